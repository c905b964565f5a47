#pragma once

#include <array>
#include <string>
#include <vector>

#include "friedrichs/resolvent.hpp"

namespace friedrichs {

enum class ZeroKind { Regular, First, Second, Third };

const char* to_string(ZeroKind k);

struct ZeroEnergyClassification {
  ZeroKind kind = ZeroKind::Regular;
  Mat k_zero;
  Mat gamma1;
  Mat kernel;  // orthonormal columns spanning M
  Mat m1, m2;
  Mat q0, q1, q2;
  Eigen::VectorXd kappa;  // eigenvalues of K(0)
  double tau_kernel = 0.0;
  double tau_gamma = 0.0;
};

ZeroEnergyClassification classify_zero_energy(const ResolventEvaluator& ev);

struct CriticalCoupling {
  double lambda;
  double lambda2;
  double kappa;  // n-th eigenvalue of K(0) at lambda
  ZeroKind kind;
};

// bracket [w_n / sigma_N(0), w_n / sigma_1(0)] for lambda^2, sigma extreme eigenvalues of S(0)
std::array<double, 2> critical_bracket(const ResolventEvaluator& ev, int n);
std::vector<CriticalCoupling> critical_couplings(const ResolventEvaluator& ev, int n, double lambda2_lo,
                                                 double lambda2_hi, int subintervals = 200);

class ZeroMode {
 public:
  ZeroMode(ModelSpec spec, Vec psi, double norm2) : spec_(std::move(spec)), psi_(std::move(psi)), norm2_(norm2) {}
  const Vec& psi() const { return psi_; }
  double tail_norm2() const { return norm2_; }
  // f(w) = -lambda sum_n psi_n v_n(w) / w
  cplx tail(double w) const;

 private:
  ModelSpec spec_;
  Vec psi_;
  double norm2_;
};

ZeroMode build_zero_mode(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, const Vec& psi);

// (1/(l^2 z log z)) G^-1 + (1/(l^4 z log^2 z)) G^-1 (Q1 + l^2 Q1 A1 Q1 + l^2 pi i Q1 G1 Q1) G^-1, G = Q1 Gamma_1 Q1,
// with log z = log(-z) + i pi
Mat small_z_expansion_first_kind(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, cplx z);
// -(1/z) [Q2 (1 + l^2 A1) Q2]^-1
Mat small_z_expansion_second_kind(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, cplx z);

struct ThirdKindBlocks {
  std::array<std::array<Mat, 3>, 3> e;  // E_kl = Q_k [K(w +- i0) - w] Q_l
  Mat a_inv;                            // inverse of the (M0 + M1) block
  Mat d_inv;                            // inverse of the M2 block
  Mat b, c;                             // off-diagonal blocks
  Mat top_left;                         // [A - B D^-1 C]^-1
  Mat bottom_right;                     // [D - C A^-1 B]^-1
  Mat inverse;                          // assembled partitioned inverse
};

ThirdKindBlocks third_kind_blocks(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, double w,
                                  int side = +1);

}  // namespace friedrichs
