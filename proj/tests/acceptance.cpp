#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "friedrichs/asymptotics.hpp"
#include "friedrichs/classify.hpp"
#include "friedrichs/evolve.hpp"
#include "friedrichs/kernels.hpp"
#include "friedrichs/linalg.hpp"
#include "friedrichs/oracle.hpp"

using namespace friedrichs;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char b[512];
  std::snprintf(b, sizeof b, f, args...);
  return b;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ModelSpec critical_a() { return model_a(std::sqrt(4.0 / kPi)); }
ModelSpec critical_b() { return model_b(std::sqrt(2.0)); }

Outcome closed_form_vs_quadrature() {
  auto t0 = Clock::now();
  std::vector<ModelSpec> models{model_a(0.3), model_b(0.3)};
  std::mt19937 rng(2024);
  for (int k = 0; k < 20; ++k) models.push_back(fixtures::random_model(rng));
  double worst = 0.0, worst_h = 0.0;
  for (const auto& m : models) {
    GammaMatrix g = build_gamma(m);
    const RationalFunction& eta = g(0, 0);
    CauchyClosedForm cf(eta);
    for (int i = 0; i < 50; ++i) {
      double r = std::pow(10.0, -1.0 + 2.0 * ((i * 7) % 50) / 49.0);
      cplx z = std::polar(r, 2 * kPi * (i + 0.5) / 50.0);
      std::vector<double> bp{1.0};
      if (z.real() > 0)
        for (double k : {-8.0, -2.0, 0.0, 2.0, 8.0}) bp.push_back(z.real() + k * std::abs(z.imag()));
      cplx q = oracle_quadrature([&](double w) { return eta(w) / (w - z); }, 0.0, kInf, 1e-11, bp).value;
      worst = std::max(worst, std::abs(cauchy_transform(cf, z) - q) / std::abs(q));
    }
    cplx hq = oracle_quadrature([&](double w) { return eta(w); }, 0.0, kInf, 1e-11, {1.0}).value;
    worst_h = std::max(worst_h, std::abs(halfline_integral(eta) - hq) / std::abs(hq));
  }
  double s = since(t0);
  return {worst <= 1e-8 && worst_h <= 1e-8 && s < 5.0,
          fmt("22 models x 50 points: max rel err cauchy %.2e, halfline %.2e (tol 1e-8); %.2f s (limit 5 s)", worst,
              worst_h, s)};
}

Outcome structural_invariants() {
  ModelSpec s = fixtures::two_level_odd();
  s.form_factors[1].numerator = {cplx(1.0, 0.5), cplx(0.2, -0.3)};
  s.form_factors[1].denominator = {cplx(4.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.5, 0.1)};
  ResolventEvaluator ev(s);
  const GammaMatrix& g = ev.self_energy().gamma();
  double herm = 0.0, neg = 0.0, rank = 0.0, dneg = 0.0, drank = 0.0;
  for (int i = 0; i < 50; ++i) {
    double w = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
    Mat m = g.eval(w);
    herm = std::max(herm, (m - m.adjoint()).norm() / m.norm());
    auto e = hermitian_eigen(m);
    neg = std::max(neg, -e.values(0) / e.values(1));
    rank = std::max(rank, std::abs(e.values(0)) / e.values(1));
    // the difference R+ - R- carries an absolute rounding floor of order eps |R+|
    auto d = hermitian_eigen(spectral_density(ev, w));
    double floor = 64.0 * std::numeric_limits<double>::epsilon() * ev.boundary_resolvent_unchecked(w, +1).norm();
    double scale = std::max(d.values(1), floor / 1e-10);
    dneg = std::max(dneg, -d.values(0) / scale);
    drank = std::max(drank, std::abs(d.values(0)) / scale);
  }
  double proj = 0.0;
  for (const ModelSpec& m : {model_a(0.3), model_b(0.3), critical_a(), critical_b(), fixtures::two_level_odd(),
                             fixtures::third_kind_model()}) {
    auto c = classify_zero_energy(ResolventEvaluator(m));
    int n = m.size();
    const Mat* q[3] = {&c.q0, &c.q1, &c.q2};
    proj = std::max(proj, (c.q0 + c.q1 + c.q2 - Mat::Identity(n, n)).norm());
    for (int a = 0; a < 3; ++a) {
      proj = std::max(proj, (*q[a] - q[a]->adjoint()).norm());
      for (int b = 0; b < 3; ++b) proj = std::max(proj, (*q[a] * *q[b] - (a == b ? *q[a] : Mat::Zero(n, n))).norm());
    }
  }
  bool ok = herm <= 1e-14 && neg <= 1e-14 && rank <= 1e-10 && dneg <= 1e-10 && drank <= 1e-10 && proj <= 1e-12;
  return {ok, fmt("Gamma: hermiticity %.1e, min eig/max %.1e, rank-1 gap %.1e; Im R+ (rounding floor 64 eps |R+|): min eig/max "
                  "%.1e, rank-1 gap %.1e; projections %.1e (tol 1e-12)",
                  herm, -neg, rank, -dneg, drank, proj)};
}

Outcome completeness() {
  auto t0 = Clock::now();
  ResolventEvaluator b(model_b(0.3));
  bool bound = !find_negative_eigenvalues(b).empty();
  bool clean = scan_positive_spectrum(b, default_scan_grid(b)).clean;
  double omega = 8.0;
  SpectralWeight w = spectral_weight(b, omega, 1e-8);
  while (w.tail_estimate > 1e-4) {
    omega *= 2.0;
    w = spectral_weight(b, omega, 1e-8);
  }
  double dev = (w.weight - Mat::Identity(1, 1)).norm();
  double s = since(t0);
  return {!bound && clean && dev <= 1e-3 && s < 10.0,
          fmt("bound state %s, scan %s, Omega %.0f (tail bound %.1e): ||W - I|| = %.2e (tol 1e-3); %.2f s", bound ? "yes" : "no",
              clean ? "clean" : "flagged", omega, w.tail_estimate, dev, s)};
}

Outcome oracle_equivalence() {
  ResolventEvaluator b(model_b(0.3));
  auto times = linear_grid(0.0, 50.0, 60);
  auto r = reduced_evolution(b, times, 1e-10);
  std::vector<double> spacing;
  std::vector<std::vector<cplx>> samples;
  for (int m : {1000, 2000, 4000, 8000}) {
    DiscretizationParams p;
    p.m = m;
    DiscretizedHamiltonian dh(model_b(0.3), p);
    auto o = oracle_evolution_sweep(dh, Vec::Ones(1), times);
    std::vector<cplx> a;
    for (cplx x : o) a.emplace_back(std::abs(x));
    spacing.push_back(dh.spacing());
    samples.push_back(a);
  }
  ConvergenceReport rep = convergence_study(spacing, samples);
  double diff = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    diff = std::max(diff, std::abs(std::abs(r.u[i](0, 0)) - samples.back()[i].real()));
  return {diff <= 1e-3 && rep.order >= 1.0,
          fmt("60 points on [0,50], M=8000: max ||U| - |U_M|| = %.2e (tol 1e-3); grid order %.2f (need >= 1)", diff,
              rep.order)};
}

Outcome theorem1() {
  auto t0 = Clock::now();
  ResolventEvaluator b(model_b(0.3));
  auto m = asymptote_model(b, classify_zero_energy(b));
  auto times = log_grid(1e2, 1e4, 21);
  auto r = reduced_evolution(b, times, 1e-14);
  std::vector<double> amp;
  for (const Mat& u : r.u) amp.push_back(std::abs(u(0, 0)));
  double slope = fit_slope(times, amp);
  cplx ratio = r.u.back()(0, 0) / theorem1_asymptote(m, 1e4)(0, 0);
  double late = fit_slope(std::vector<double>(times.begin() + 10, times.end()),
                          std::vector<double>(amp.begin() + 10, amp.end()));
  double s = since(t0);
  bool ok = std::abs(slope + 3.0) <= 0.05 && std::abs(ratio - 1.0) <= 0.02 && s < 120.0;
  return {ok, fmt("n_b=%d: slope over [1e2,1e4] = %.3f (need -3 +- 0.05; over [1e3,1e4] %.4f); U/theorem1 at 1e4 = "
                  "%.5f%+.5fi (need within 0.02); |U(1e2)| = %.2e vs asymptote %.2e; %.1f s",
                  m.n_b, slope, late, ratio.real(), ratio.imag(), amp.front(),
                  std::abs(theorem1_asymptote(m, 1e2)(0, 0)), s)};
}

Outcome theorem2() {
  ResolventEvaluator a(critical_a());
  auto c = classify_zero_energy(a);
  auto m = asymptote_model(a, c);
  double g = m.first.norm();
  std::vector<double> ts{1e4, 1e6};
  auto r = reduced_evolution(a, ts, 1e-8);
  cplx p4 = a.lambda2() * std::log(1e4) * r.u[0](0, 0), p6 = a.lambda2() * std::log(1e6) * r.u[1](0, 0);
  double e4 = std::abs(p4 - g), e6 = std::abs(p6 - g);
  double s4 = e4 * std::log(1e4), s6 = e6 * std::log(1e6);
  bool ok = std::abs(g - 1.0) < 1e-10 && e6 <= 0.2 && e6 < e4 && s6 <= 1.5 * s4;
  return {ok, fmt("(Q1 G1 Q1)^-1 = %.12f; lambda^2 log t U: t=1e4 %.4f%+.4fi, t=1e6 %.4f%+.4fi; residual %.3f -> "
                  "%.3f (need <= 0.2, decreasing); residual*log t %.2f -> %.2f (bounded within 1.5x)",
                  g, p4.real(), p4.imag(), p6.real(), p6.imag(), e4, e6, s4, s6)};
}

Outcome lemma_series() {
  CutoffFunction phi(0.25, 0.5);
  double t = 1e8;
  cplx num = log_singular_integral(t, 2, phi, 1e-10);
  cplx two = log_fourier_series(t, 2, 2);
  double third = std::abs(log_fourier_term(t, 2, 2));
  double diff = std::abs(num - two);
  cplx t0 = log_fourier_term(t, 2, 0);
  double lt = 1.0 / std::log(t);
  double lead = std::abs(t0 - lt) / lt;
  double window = std::abs(num - lt);
  double allowed = std::abs(log_fourier_term(t, 2, 1)) + 2.0 * third;
  bool ok = diff <= 2.0 * third && lead <= 1e-14 && window <= allowed;
  return {ok, fmt("t=1e8, q=2: |numeric - 2 terms| = %.3e, 2x|3rd term| = %.3e; j=0 term vs 1/log t rel %.1e; "
                  "|numeric - 1/log t| = %.3e within %.3e",
                  diff, 2.0 * third, lead, window, allowed)};
}

Outcome critical_coupling() {
  double worst_k = 0.0;
  bool bracket = true;
  std::ostringstream os;
  ResolventEvaluator a(model_a(0.3));
  auto br = critical_bracket(a, 0);
  auto fa = critical_couplings(a, 0, 0.5 * br[0], 1.5 * br[1]);
  bool a_ok = fa.size() == 1 && std::abs(fa[0].lambda2 / (4.0 / kPi) - 1.0) <= 1e-10;
  double a_rel = fa.empty() ? kInf : std::abs(fa[0].lambda2 / (4.0 / kPi) - 1.0);
  int count = 0;
  auto check = [&](const ResolventEvaluator& ev, int n, const std::vector<CriticalCoupling>& f) {
    auto b = critical_bracket(ev, n);
    for (const auto& x : f) {
      ++count;
      worst_k = std::max(worst_k, std::abs(x.kappa));
      bracket &= x.lambda2 >= b[0] * (1 - 1e-12) && x.lambda2 <= b[1] * (1 + 1e-12);
    }
  };
  check(a, 0, fa);
  ResolventEvaluator b(model_b(0.3));
  auto fb = critical_couplings(b, 0, 0.1, 5.0);
  check(b, 0, fb);
  bool b_ok = fb.size() == 1 && std::abs(fb[0].lambda2 - 2.0) <= 1e-10;
  ResolventEvaluator two(fixtures::two_level_odd());
  for (int n = 0; n < 2; ++n) {
    auto bn = critical_bracket(two, n);
    check(two, n, critical_couplings(two, n, 0.0, std::min(bn[1], 1e3) * 1.01));
  }
  bool ok = a_ok && b_ok && worst_k <= 1e-12 && bracket;
  return {ok, fmt("%d roots: max |kappa_n(0)| = %.1e (tol 1e-12), bracket %s; Model A lambda*^2 rel err %.1e "
                  "(tol 1e-10); Model B lambda*^2 = %.12f",
                  count, worst_k, bracket ? "ok" : "violated", a_rel, fb.empty() ? 0.0 : fb[0].lambda2)};
}

Outcome second_kind() {
  ResolventEvaluator b(critical_b());
  auto c = classify_zero_energy(b);
  if (c.kind != ZeroKind::Second) return {false, std::string("classified as ") + to_string(c.kind)};
  ZeroMode zm = build_zero_mode(b, c, c.m2.col(0));
  double norm_err = std::abs(zm.tail_norm2() - kPi / 2);
  Mat inner = inverse_on_subspace(Mat::Identity(1, 1) + b.lambda2() * b.self_energy().rat_taylor(1), c.m2);
  std::vector<double> x, y;
  for (int i = 0; i <= 9; ++i) {
    double m = 1e-7 * std::pow(10.0, i / 3.0);
    cplx z(-m, 0.0);
    x.push_back(m);
    y.push_back((z * c.q2 * b.resolvent_unchecked(z) * c.q2 + inner).norm());
  }
  double slope = fit_slope(x, y);
  double lead = std::abs(inner(0, 0) - 1.0 / (1.0 + kPi / 2));
  bool ok = norm_err <= 1e-6 && std::abs(slope - 1.0) <= 0.15 && lead <= 1e-10;
  return {ok, fmt("second kind; tail norm^2 - pi/2 = %.1e (tol 1e-6); (1+pi/2)^-1 match %.1e; slope over "
                  "[1e-7,1e-4] = %.3f (need 1 +- 0.15)",
                  norm_err, lead, slope)};
}

Outcome remainder_probes() {
  ResolventEvaluator a(model_a(0.3));
  double l2 = a.lambda2();
  Mat kinv = a.k_zero().inverse();
  Mat a1 = a.self_energy().rat_taylor(1);
  Mat g1 = gamma_coefficient(a.self_energy().gamma(), 1);
  auto first = [&](double w) {
    Mat d = l2 * w * (a1 - (std::log(w) - kI * kPi) * g1) + w * Mat::Identity(1, 1);
    return Mat(kinv + kinv * d * kinv);
  };
  auto r1 = remainder_order_probe([&](double w) { return a.boundary_resolvent_unchecked(w, +1); }, first,
                                  log_grid(1e-6, 1e-3, 10), 2.0, 2.0);

  ResolventEvaluator b(model_b(0.3));
  Mat kb = b.k_zero().inverse();
  const auto& gb = b.self_energy().gamma();
  auto three = [&](double w) {
    Mat s = Mat::Zero(1, 1);
    for (int k = 2; k <= 4; ++k) s += gamma_coefficient(gb, k) * std::pow(w, k);
    return Mat(b.lambda2() * kPi * kb * s * kb);
  };
  auto r2 = remainder_order_probe([&](double w) { return b.spectral_density_unchecked(w); }, three,
                                  log_grid(1e-4, 1e-1, 10), 3.0);

  ResolventEvaluator ac(critical_a());
  auto cc = classify_zero_energy(ac);
  auto r3 = remainder_order_probe([&](double w) { return ac.resolvent_unchecked(-w); },
                                  [&](double w) { return small_z_expansion_first_kind(ac, cc, -w); },
                                  log_grid(1e-12, 1e-6, 10), -1.0, -3.0);
  return {r1.pass && r2.pass && r3.pass,
          fmt("regular resolvent remainder %.3f (expect 2), Im R+ three-term remainder %.3f (expect 3), first-kind "
              "remainder %.3f (expect -1); tolerance 0.15",
              r1.slope, r2.slope, r3.slope)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expected, only;
  app.add_option("--expected-fail", expected, "criteria known to fail; they do not affect the exit status");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"closed form vs quadrature", closed_form_vs_quadrature},
      {"structural invariants", structural_invariants},
      {"completeness", completeness},
      {"oracle equivalence", oracle_equivalence},
      {"regular power law", theorem1},
      {"logarithmic decay", theorem2},
      {"inverse-log Fourier series", lemma_series},
      {"critical coupling", critical_coupling},
      {"second kind", second_kind},
      {"remainder-order probes", remainder_probes}};
  std::set<int> exp(expected.begin(), expected.end()), sel(only.begin(), only.end());
  int unexpected = 0, failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!sel.empty() && !sel.count(id)) continue;
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                o.detail.c_str(), since(t0));
    std::fflush(stdout);
    if (!o.pass) {
      ++failed;
      if (!exp.count(id)) ++unexpected;
    }
  }
  std::printf("%d failed, %d unexpected\n", failed, unexpected);
  return unexpected ? 1 : 0;
}
