#pragma once

#include <functional>
#include <vector>

#include "friedrichs/classify.hpp"
#include "friedrichs/resolvent.hpp"

namespace friedrichs {

// smooth step: 1 on [0, d-a], 0 on [d+a, inf), built from the integral of exp(-1/(x(1-x)))
class CutoffFunction {
 public:
  CutoffFunction(double a, double d);
  double a() const { return a_; }
  double d() const { return d_; }
  double operator()(double w) const;

 private:
  double step(double s) const;  // normalized bump integral on [0,1]
  double a_, d_;
  std::vector<double> cheb_;  // per-cell Chebyshev coefficients
};

struct FilonOptions {
  double tol = 1e-10;        // absolute, on the integral
  double rel = 1e-10;        // per-panel error relative to the panel mass
  double max_panel = 0.0;    // 0 selects pi / (2|t|) (rounded down to a power of two)
  long max_panels = 200000000;
  int max_depth = 40;
};

struct FilonResult {
  Mat value;
  long panels = 0;
  double error = 0.0;
};

// int_a^b e^{-itw} g(w) dw with degree-6 Legendre interpolants per panel and exact moments;
// [a, h) is graded geometrically with ratio 2, then panels of width h
FilonResult filon_integrate(const std::function<Mat(double)>& g, double t, double a, double b,
                            const FilonOptions& opt = {});

struct EvolutionOptions {
  double omega_min = 0.0;    // 0 selects the kind-dependent default
  double omega_start = 0.0;  // 0 selects a multiple of the pole scale
  double max_panel = 0.0;
  long max_panels = 200000000;
  bool check_spectrum = true;
};

struct EvolutionDiagnostics {
  long panels = 0;
  double omega_max = 0.0;
  double omega_min = 0.0;
  double quadrature_error = 0.0;
  double tail_bound = 0.0;
  double origin_bound = 0.0;
  double error() const { return quadrature_error + tail_bound + origin_bound; }
};

struct TimeEvolutionResult {
  std::vector<double> times;
  std::vector<Mat> u;
  std::vector<EvolutionDiagnostics> diagnostics;
  Mat weight;  // U(0+)
  ZeroKind kind = ZeroKind::Regular;
};

enum class Exec { Serial, Parallel };

TimeEvolutionResult reduced_evolution(const ResolventEvaluator& ev, const std::vector<double>& times, double tol,
                                      const EvolutionOptions& opt = {}, Exec exec = Exec::Parallel);
// single time, no weight or spectrum check
Mat reduced_evolution_at(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, double t, double tol,
                         const EvolutionOptions& opt, EvolutionDiagnostics* diag = nullptr);

std::vector<double> survival_probability(const TimeEvolutionResult& r, const Vec& psi);

struct SpectralWeight {
  Mat weight;
  double tail_estimate = 0.0;
  double error = 0.0;
};

SpectralWeight spectral_weight(const ResolventEvaluator& ev, double omega, double tol);

// int_0^inf w^-1 (log w)^-q phi(w) e^{-itw} dw, phi supported in [0, 1)
cplx log_singular_integral(double t, int q, const CutoffFunction& phi, double tol, long* panels = nullptr);

}  // namespace friedrichs
