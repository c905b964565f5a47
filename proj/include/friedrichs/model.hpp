#pragma once

#include <string>
#include <vector>

#include "friedrichs/polyrat.hpp"

namespace friedrichs {

// v(w) = w^{h/2} q(w); raw coefficients are kept as given so that scenarios round-trip
struct FormFactor {
  int half_power = 1;
  std::vector<cplx> numerator;
  std::vector<cplx> denominator;

  RationalFunction q() const;
  cplx v(double w) const;
};

struct ModelSpec {
  std::vector<double> levels;
  double coupling = 0.0;
  std::vector<FormFactor> form_factors;

  int size() const { return static_cast<int>(levels.size()); }
  double lambda2() const { return coupling * coupling; }
  ModelSpec with_coupling(double lambda) const;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> messages;
};

ValidationReport validate_model(const ModelSpec& spec, const Tolerances& tol = default_tolerances());
// throws on the first violated condition
void require_valid(const ModelSpec& spec, const Tolerances& tol = default_tolerances());

class GammaMatrix {
 public:
  GammaMatrix() = default;
  explicit GammaMatrix(std::vector<RationalFunction> entries, int n);

  int size() const { return n_; }
  const RationalFunction& operator()(int m, int n) const { return e_[m * n_ + n]; }
  Mat eval(cplx z) const;
  Mat eval(double w) const;

 private:
  int n_ = 0;
  std::vector<RationalFunction> e_;
};

GammaMatrix build_gamma(const ModelSpec& spec, const Tolerances& tol = default_tolerances());

struct GammaExpansion {
  int n_b = 0;
  std::vector<Mat> coeffs;  // Gamma_{n_b} .. Gamma_{n_b+depth}
};

GammaExpansion gamma_small_expansion(const GammaMatrix& g, int depth, const Tolerances& tol = default_tolerances());
// Taylor coefficient matrix of order k at the origin
Mat gamma_coefficient(const GammaMatrix& g, int k, const Tolerances& tol = default_tolerances());

// canonical instances used throughout tests and examples
ModelSpec model_a(double lambda, double level = 1.0);
ModelSpec model_b(double lambda, double level = 1.0);

}  // namespace friedrichs
