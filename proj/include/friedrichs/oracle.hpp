#pragma once

#include <functional>
#include <vector>

#include "friedrichs/model.hpp"

namespace friedrichs {

using ScalarFn = std::function<cplx(double)>;

struct QuadratureResult {
  cplx value;
  double error = 0.0;
};

// adaptive Gauss-Kronrod on [a, b] (b may be +inf) split at the given breakpoints
QuadratureResult oracle_quadrature(const ScalarFn& f, double a, double b, double tol = 1e-12,
                                   std::vector<double> breakpoints = {});
// PV of int_0^inf f(x)/(x - w) dx by symmetric excision and extrapolation in the excision radius
cplx principal_value(const ScalarFn& f, double w, std::vector<double> radii = {1e-2, 1e-3, 1e-4},
                     std::vector<double> breakpoints = {});

struct DiscretizationParams {
  int m = 2000;
  double omega_min = 1e-6;
  double ratio = 1.05;
  double omega_max = 0.0;  // 0 selects 50 x pole scale
};

class DiscretizedHamiltonian {
 public:
  DiscretizedHamiltonian(const ModelSpec& spec, DiscretizationParams params);

  int levels() const { return n_; }
  int grid_size() const { return static_cast<int>(nodes_.size()); }
  int dimension() const { return n_ + grid_size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& widths() const { return widths_; }
  double spacing() const { return spacing_; }
  // coupling block B (N x M), H = [[diag w_n, lambda B], [lambda B^H, diag w_j]]
  const Mat& coupling() const { return b_; }
  Mat dense() const;

  const Eigen::VectorXd& eigenvalues() const;
  // first N components of every eigenvector (N x dim)
  const Mat& level_components() const;
  std::vector<double> smallest_eigenvalues(int k) const;
  // residual |H (psi + tail)| / |psi + tail| of a zero-energy candidate
  double zero_mode_residual(const Vec& psi) const;
  // <m|(H - z)^{-1}|n>
  Mat resolvent(cplx z) const;

 private:
  void diagonalize() const;

  ModelSpec spec_;
  int n_;
  std::vector<double> nodes_, widths_;
  double spacing_ = 0.0;
  Mat b_;
  mutable bool solved_ = false;
  mutable Eigen::VectorXd evals_;
  mutable Mat comps_;
};

// <psi|P e^{-itH} P|psi>, P = projector on positive eigenvalues
cplx oracle_evolution(const DiscretizedHamiltonian& dh, const Vec& psi, double t);
std::vector<cplx> oracle_evolution(const DiscretizedHamiltonian& dh, const Vec& psi, const std::vector<double>& t);

struct ConvergenceReport {
  std::vector<double> spacings;
  std::vector<double> differences;  // max |q_{k+1} - q_k|
  double order = 0.0;
  bool monotone = false;
};

// quantity(k) returns samples computed on refinement level k
ConvergenceReport convergence_study(const std::vector<double>& spacings,
                                    const std::vector<std::vector<cplx>>& samples);

}  // namespace friedrichs
