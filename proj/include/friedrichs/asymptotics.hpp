#pragma once

#include <functional>
#include <vector>

#include "friedrichs/classify.hpp"

namespace friedrichs {

struct AsymptoteModel {
  ZeroKind kind = ZeroKind::Regular;
  int n_a = 1;
  int n_b = 1;
  double lambda = 0.0;
  std::vector<Mat> coefficients;  // regular: K(0)^-1 Gamma_{n_b+j} K(0)^-1, j = 0..2
  Mat first;                      // first kind: (Q1 Gamma_1 Q1)^-1 within M1
};

AsymptoteModel asymptote_model(const ResolventEvaluator& ev, const ZeroEnergyClassification& c);

Mat theorem1_asymptote(const AsymptoteModel& m, double t);
Mat theorem2_asymptote(const AsymptoteModel& m, double t);

// k-th derivative of Gamma at 1, k <= 6
double gamma_derivative_at_one(int k);
// j-th term of the inverse-logarithmic Fourier series
cplx log_fourier_term(double t, int q, int j);
cplx log_fourier_series(double t, int q, int terms);

struct OrderProbe {
  double slope = 0.0;
  double expected = 0.0;
  bool pass = false;
  bool exact = false;
  std::vector<double> grid;
  std::vector<double> diffs;
};

// slope of log ||quantity - expansion|| / |log w|^log_power against log w
OrderProbe remainder_order_probe(const std::function<Mat(double)>& quantity,
                                 const std::function<Mat(double)>& expansion, const std::vector<double>& grid,
                                 double expected, double log_power = 0.0, double tol = 0.15);

}  // namespace friedrichs
