#pragma once

#include <vector>

#include "friedrichs/model.hpp"
#include "friedrichs/polyrat.hpp"

namespace friedrichs {

// principal log(-z): log|z| + i(arg z - pi), arg z in (0, 2pi)
cplx log_minus(cplx z);
inline cplx log_minus_unchecked(cplx z) { return std::log(-z); }

cplx halfline_integral(const RationalFunction& r, const Tolerances& tol = default_tolerances());
cplx halfline_integral(const PoleDecomposition& pd);
// decomposition of f(w)/w with the residue at the origin dropped; that residue is f(0)
PoleDecomposition divide_by_omega(const PoleDecomposition& pd, cplx* dropped = nullptr);

class CauchyClosedForm {
 public:
  CauchyClosedForm() = default;
  explicit CauchyClosedForm(RationalFunction eta, const Tolerances& tol = default_tolerances());

  const RationalFunction& source() const { return eta_; }
  const PoleDecomposition& decomposition() const { return pd_; }
  const PoleDecomposition& rational_part() const { return rat_; }

  // sum of c_kj J_j(a_k, zeta) with log(-zeta) supplied by the caller
  cplx transform_with_log(cplx zeta, cplx log_zeta) const;
  cplx transform(cplx zeta) const { return transform_with_log(zeta, log_minus_unchecked(zeta)); }
  cplx eta(cplx z) const { return pd_(z); }
  cplx rat(cplx z) const { return rat_(z); }
  cplx rat0() const { return rat0_; }
  // Rat(z) - Rat(0), accurate for tiny z
  cplx a(cplx z) const;
  // Taylor coefficients of Rat at 0 through z^order
  std::vector<cplx> rat_taylor(int order) const;

 private:
  RationalFunction eta_;
  PoleDecomposition pd_;
  PoleDecomposition rat_;
  cplx rat0_{0.0};
};

cplx cauchy_transform(const CauchyClosedForm& cf, cplx zeta, const Tolerances& tol = default_tolerances());

struct BoundaryValues {
  Mat d;
  Mat gamma;
};

struct ASeries {
  int n_a = 1;
  Mat atilde_na;
  std::vector<Mat> a;  // A_1 .. A_depth at index 0 .. depth-1
};

class SelfEnergyEvaluator {
 public:
  explicit SelfEnergyEvaluator(GammaMatrix g, const Tolerances& tol = default_tolerances());

  int size() const { return n_; }
  const GammaMatrix& gamma() const { return g_; }
  const CauchyClosedForm& entry(int m, int n) const { return cf_[m * n_ + n]; }
  const Mat& s0() const { return s0_; }
  const std::vector<cplx>& poles() const { return poles_; }
  // smallest |a_k| over all Gamma poles
  double pole_radius() const { return pole_radius_; }
  // largest |a_k|
  double pole_scale() const { return pole_scale_; }
  const Tolerances& tolerances() const { return tol_; }

  Mat self_energy(cplx z) const;
  Mat self_energy_unchecked(cplx z) const;
  Mat gamma_at(cplx z) const;
  Mat a(cplx z) const;
  // S(z) - S(0) and its second-sheet counterpart; stable near the origin
  Mat delta(cplx z) const;
  Mat delta_second_sheet(cplx z) const;
  BoundaryValues boundary_values(double w) const;
  // D(w) - S(0)
  Mat boundary_shift(double w) const;
  Mat second_sheet(cplx z) const;
  Mat rat_taylor(int n) const;

 private:
  int n_ = 0;
  GammaMatrix g_;
  Tolerances tol_;
  std::vector<CauchyClosedForm> cf_;
  std::vector<cplx> poles_;
  double pole_radius_ = 1.0;
  double pole_scale_ = 1.0;
  Mat s0_;
};

Mat self_energy(const SelfEnergyEvaluator& s, cplx z);
Mat self_energy_zero(const SelfEnergyEvaluator& s);
BoundaryValues boundary_values(const SelfEnergyEvaluator& s, double w);
ASeries a_series(const SelfEnergyEvaluator& s, double lambda, int depth);
cplx moment_integral(const RationalFunction& entry, int p, const Tolerances& tol = default_tolerances());
Mat moment_integral(const SelfEnergyEvaluator& s, int p);
Mat second_sheet_self_energy(const SelfEnergyEvaluator& s, cplx z);

}  // namespace friedrichs
