#include "friedrichs/evolve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "friedrichs/error.hpp"
#include "friedrichs/linalg.hpp"

namespace friedrichs {

namespace {

constexpr int kNodes = 7;
constexpr int kCells = 512;
constexpr int kCheb = 14;

double bump(double x) { return x <= 0.0 || x >= 1.0 ? 0.0 : std::exp(-1.0 / (x * (1.0 - x))); }

double dyadic_floor(double x) { return std::exp2(std::floor(std::log2(x))); }
double dyadic_ceil(double x) { return std::exp2(std::ceil(std::log2(x))); }

struct Legendre {
  std::array<double, kNodes> x{}, w{};
  std::array<std::array<double, kNodes>, kNodes> p{};  // p[k][i] = (2k+1)/2 w_i P_k(x_i)

  Legendre() {
    using G = boost::math::quadrature::gauss<double, kNodes>;
    const auto& ab = G::abscissa();
    const auto& wt = G::weights();
    int j = 0;
    for (int i = static_cast<int>(ab.size()) - 1; i >= 1; --i) x[j] = -ab[i], w[j++] = wt[i];
    for (std::size_t i = 0; i < ab.size(); ++i) x[j] = ab[i], w[j++] = wt[i];
    for (int i = 0; i < kNodes; ++i) {
      double p0 = 1.0, p1 = x[i];
      for (int k = 0; k < kNodes; ++k) {
        double pk = k == 0 ? p0 : p1;
        if (k >= 2) {
          double p2 = ((2.0 * k - 1.0) * x[i] * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
          pk = p2;
        }
        p[k][i] = 0.5 * (2.0 * k + 1.0) * w[i] * pk;
      }
    }
  }
};

const Legendre& legendre() {
  static const Legendre l;
  return l;
}

// int_{-1}^{1} e^{-i theta x} P_k(x) dx = 2 (-i)^k j_k(theta)
std::array<cplx, kNodes> moments(double theta) {
  std::array<cplx, kNodes> m{};
  double s = theta < 0 ? -1.0 : 1.0;
  double a = std::abs(theta);
  cplx mi(1.0, 0.0);
  for (int k = 0; k < kNodes; ++k) {
    double j = a == 0.0 ? (k == 0 ? 1.0 : 0.0) : boost::math::sph_bessel(static_cast<unsigned>(k), a);
    if (k % 2 == 1) j *= s;
    m[k] = 2.0 * mi * j;
    mi *= cplx(0.0, -1.0);
  }
  return m;
}

// e^{-i t m} with t*m split exactly
cplx phase(double t, double m) {
  double p = t * m;
  double e = std::fma(t, m, -p);
  return std::polar(1.0, -p) * cplx(1.0, -e);
}

double norm_of(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double norm_of(cplx v) { return std::abs(v); }

template <class V>
V zero_like(const V& v) {
  if constexpr (std::is_same_v<V, Mat>) return Mat::Zero(v.rows(), v.cols());
  else return V(0.0);
}

template <class V>
struct Accumulator {
  V sum, comp;
  void add(const V& x) {
    if constexpr (std::is_same_v<V, Mat>) {
      for (Eigen::Index i = 0; i < x.size(); ++i) add_one(sum(i), comp(i), x(i));
    } else {
      add_one(sum, comp, x);
    }
  }
  static void add_one(cplx& s, cplx& c, cplx x) {
    auto part = [](double& s, double& c, double x) {
      double t = s + x;
      c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
      s = t;
    };
    double sr = s.real(), si = s.imag(), cr = c.real(), ci = c.imag();
    part(sr, cr, x.real());
    part(si, ci, x.imag());
    s = {sr, si};
    c = {cr, ci};
  }
  V value() const { return sum + comp; }
};

template <class V>
struct FilonCore {
  const std::function<V(double)>& g;
  double t;
  double tol_density;
  const FilonOptions& opt;
  Accumulator<V> acc;
  double error = 0.0;
  long panels = 0;
  double cached_h = -1.0;
  std::array<cplx, kNodes> cached_m{};

  const std::array<cplx, kNodes>& moments_for(double h) {
    if (h != cached_h) {
      cached_h = h;
      cached_m = moments(0.5 * t * h);
    }
    return cached_m;
  }

  void panel(double lo, double hi, int depth) {
    const Legendre& L = legendre();
    double h = hi - lo, mid = 0.5 * (lo + hi);
    std::array<V, kNodes> f;
    for (int i = 0; i < kNodes; ++i) f[i] = g(mid + 0.5 * h * L.x[i]);
    std::array<V, kNodes> c;
    for (int k = 0; k < kNodes; ++k) {
      c[k] = L.p[k][0] * f[0];
      for (int i = 1; i < kNodes; ++i) c[k] += L.p[k][i] * f[i];
    }
    double est = h * (norm_of(c[kNodes - 2]) + norm_of(c[kNodes - 1]));
    double allowed = std::max(tol_density * h, opt.rel * h * norm_of(c[0]));
    bool tiny = h <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid);
    if (est > allowed && depth < opt.max_depth && !tiny) {
      panel(lo, mid, depth + 1);
      panel(mid, hi, depth + 1);
      return;
    }
    if (++panels > opt.max_panels) {
      std::ostringstream os;
      os << "panel budget " << opt.max_panels << " exhausted at w = " << mid << "; error so far " << error;
      throw Error(ErrorKind::BudgetExceeded, os.str());
    }
    error += est;
    const auto& m = moments_for(h);
    V s = c[0] * m[0];
    for (int k = 1; k < kNodes; ++k) s += c[k] * m[k];
    acc.add((0.5 * h * phase(t, mid)) * s);
  }
};

template <class V>
FilonResult filon_run(const std::function<V(double)>& g, double t, double a, double b, const FilonOptions& opt,
                      V* out) {
  if (!(b > a) || !(a >= 0.0)) throw Error(ErrorKind::InvalidInput, "filon interval must satisfy 0 <= a < b");
  double h = opt.max_panel > 0.0 ? opt.max_panel : (t != 0.0 ? kPi / (2.0 * std::abs(t)) : (b - a) / 64.0);
  h = dyadic_floor(h);
  double start = a >= h ? a : h;
  double uniform = b > start ? std::ceil((b - start) / h) : 0.0;
  double graded = a > 0.0 && a < h ? std::ceil(std::log2(h / a)) : (a == 0.0 ? 1.0 : 0.0);
  if (uniform + graded > static_cast<double>(opt.max_panels)) {
    std::ostringstream os;
    os << "needs at least " << uniform + graded << " panels of width " << h << ", budget " << opt.max_panels;
    throw Error(ErrorKind::BudgetExceeded, os.str());
  }
  V probe = g(0.5 * (a + b));
  FilonCore<V> core{g, t, opt.tol / (b - a), opt, {zero_like(probe), zero_like(probe)}};
  if (a < h) {
    double e = a;
    if (a == 0.0) {
      core.panel(0.0, std::min(h, b), 0);
      e = h;
    }
    while (e < h && e < b) {
      double next = std::min({2.0 * e, h, b});
      core.panel(e, next, 0);
      e = next;
    }
  }
  long n = static_cast<long>(uniform);
  for (long j = 0; j < n; ++j) {
    double lo = start + static_cast<double>(j) * h;
    double hi = j + 1 == n ? b : lo + h;
    if (hi > lo) core.panel(lo, hi, 0);
  }
  *out = core.acc.value();
  FilonResult r;
  r.panels = core.panels;
  r.error = core.error;
  return r;
}

}  // namespace

CutoffFunction::CutoffFunction(double a, double d) : a_(a), d_(d) {
  if (!(a > 0.0 && d > a)) throw Error(ErrorKind::InvalidInput, "cutoff needs d > a > 0");
  using G = boost::math::quadrature::gauss<double, 20>;
  std::vector<double> cum(kCells + 1, 0.0);
  auto cell_integral = [](double lo, double hi) { return G::integrate(bump, lo, hi); };
  for (int i = 0; i < kCells; ++i)
    cum[i + 1] = cum[i] + cell_integral(static_cast<double>(i) / kCells, static_cast<double>(i + 1) / kCells);
  double total = cum[kCells];
  cheb_.assign(static_cast<std::size_t>(kCells) * kCheb, 0.0);
  std::array<double, kCheb> vals{};
  for (int i = 0; i < kCells; ++i) {
    double lo = static_cast<double>(i) / kCells, hi = static_cast<double>(i + 1) / kCells;
    for (int j = 0; j < kCheb; ++j) {
      double x = std::cos(kPi * (j + 0.5) / kCheb);
      double s = lo + 0.5 * (x + 1.0) * (hi - lo);
      vals[j] = (cum[i] + cell_integral(lo, s)) / total;
    }
    for (int k = 0; k < kCheb; ++k) {
      double c = 0.0;
      for (int j = 0; j < kCheb; ++j) c += vals[j] * std::cos(kPi * k * (j + 0.5) / kCheb);
      cheb_[static_cast<std::size_t>(i) * kCheb + k] = (k == 0 ? 1.0 : 2.0) * c / kCheb;
    }
  }
}

double CutoffFunction::step(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  int i = std::min(static_cast<int>(s * kCells), kCells - 1);
  double x = 2.0 * (s * kCells - i) - 1.0;
  const double* c = &cheb_[static_cast<std::size_t>(i) * kCheb];
  double b1 = 0.0, b2 = 0.0;
  for (int k = kCheb - 1; k >= 1; --k) {
    double b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return std::clamp(x * b1 - b2 + c[0], 0.0, 1.0);
}

double CutoffFunction::operator()(double w) const {
  if (w <= d_ - a_) return 1.0;
  if (w >= d_ + a_) return 0.0;
  return 1.0 - step((w - (d_ - a_)) / (2.0 * a_));
}

FilonResult filon_integrate(const std::function<Mat(double)>& g, double t, double a, double b,
                            const FilonOptions& opt) {
  Mat v;
  FilonResult r = filon_run<Mat>(g, t, a, b, opt, &v);
  r.value = v;
  return r;
}

namespace {

struct Tail {
  Mat correction;
  double bound;
  double omega;
};

// integral of e^{-itw} g over [omega, inf), g = Im R+ (not yet divided by pi)
Tail choose_tail(const ResolventEvaluator& ev, double t, double omega, double tol_raw, double cap) {
  int n = ev.size();
  auto g = [&](double w) { return ev.spectral_density_unchecked(w); };
  for (;;) {
    Mat g1 = g(omega);
    Mat g2 = g(2.0 * omega);
    double n1 = norm_of(g1), n2 = norm_of(g2);
    Tail tail{Mat::Zero(n, n), 0.0, omega};
    if (n1 == 0.0) return tail;
    double p = n2 > 0.0 ? std::log2(n1 / n2) : 50.0;
    if (t != 0.0 && std::abs(t) * omega >= 8.0 * (p + 2.0)) {
      double d = 1e-4 * omega;
      Mat gp = (g(omega + d) - g(omega - d)) / (2.0 * d);
      cplx it(0.0, t);
      tail.correction = phase(t, omega) * (g1 / it + gp / (it * it));
      tail.bound = p * (p + 1.0) * n1 / (omega * omega * std::pow(std::abs(t), 3));
    } else if (p > 1.0) {
      tail.bound = n1 * omega / (p - 1.0);
    } else {
      tail.bound = std::numeric_limits<double>::infinity();
    }
    if (tail.bound <= tol_raw) return tail;
    if (2.0 * omega > cap) {
      if (p > 1.0 && t == 0.0) {
        // analytic tail of the fitted power-law envelope
        Mat g4 = g(4.0 * omega);
        double q = norm_of(g4) > 0.0 ? std::log2(n2 / norm_of(g4)) : p;
        tail.correction = g1 * omega / (p - 1.0);
        tail.bound = n1 * omega * std::abs(1.0 / (p - 1.0) - 1.0 / (std::max(q, 1.0 + 1e-3) - 1.0));
      }
      return tail;
    }
    omega *= 2.0;
  }
}

struct Origin {
  double omega_min;
  Mat value;  // already divided by pi
  double bound;
};

Origin choose_origin(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, double t, double tol,
                     double requested) {
  int n = ev.size();
  double inv_t2 = t != 0.0 ? 1.0 / (t * t) : 1.0;
  Origin o{0.0, Mat::Zero(n, n), 0.0};
  if (c.kind == ZeroKind::First) {
    double w = requested > 0.0 ? requested
                               : std::max(1e-300, std::min({1e-12, inv_t2, std::exp(-1.0 / std::sqrt(tol))}));
    o.omega_min = dyadic_floor(w);
    double l2 = ev.lambda2();
    Mat g = inverse_on_subspace(c.gamma1, c.m1);
    Mat a1 = ev.self_energy().rat_taylor(1);
    Mat mid = c.q1 + l2 * c.q1 * a1 * c.q1 + l2 * kPi * kI * c.q1 * c.gamma1 * c.q1;
    double lw = std::abs(std::log(o.omega_min));
    o.value = g / (l2 * lw);
    o.bound = norm_of(g) * (1.0 + norm_of(g * mid) / l2) / (l2 * lw * lw) + std::abs(t) * o.omega_min * norm_of(g) / l2;
  } else {
    double w = requested > 0.0 ? requested : std::min(1e-12, inv_t2);
    o.omega_min = dyadic_floor(w);
    o.bound = norm_of(ev.spectral_density_unchecked(o.omega_min)) * o.omega_min / kPi;
  }
  return o;
}

double default_start(const ResolventEvaluator& ev) {
  double top = 0.0;
  for (double w : ev.spec().levels) top = std::max(top, std::abs(w));
  return dyadic_ceil(std::max(4.0 * ev.self_energy().pole_scale(), 2.0 * top + 1.0));
}

void require_evolvable(const ZeroEnergyClassification& c) {
  if (c.kind != ZeroKind::Regular && c.kind != ZeroKind::First)
    throw Error(ErrorKind::ClassificationMismatch,
                std::string("reduced evolution needs a regular or first-kind zero-energy point, got ") +
                    to_string(c.kind));
}

}  // namespace

Mat reduced_evolution_at(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, double t, double tol,
                         const EvolutionOptions& opt, EvolutionDiagnostics* diag) {
  require_evolvable(c);
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
  double scale = ev.self_energy().pole_scale();
  double start = opt.omega_start > 0.0 ? dyadic_ceil(opt.omega_start) : default_start(ev);
  Tail tail = choose_tail(ev, t, start, 0.25 * tol * kPi, 1e6 * std::max(scale, 1.0));
  Origin origin = choose_origin(ev, c, t, tol, opt.omega_min);
  FilonOptions fo;
  fo.tol = 0.5 * tol * kPi;
  fo.max_panel = opt.max_panel;
  fo.max_panels = opt.max_panels;
  std::function<Mat(double)> g = [&](double w) { return ev.spectral_density_unchecked(w); };
  FilonResult q = filon_integrate(g, t, origin.omega_min, tail.omega, fo);
  if (diag) {
    diag->panels = q.panels;
    diag->omega_max = tail.omega;
    diag->omega_min = origin.omega_min;
    diag->quadrature_error = q.error / kPi;
    diag->tail_bound = tail.bound / kPi;
    diag->origin_bound = origin.bound;
  }
  return (q.value + tail.correction) / kPi + origin.value;
}

TimeEvolutionResult reduced_evolution(const ResolventEvaluator& ev, const std::vector<double>& times, double tol,
                                      const EvolutionOptions& opt, Exec exec) {
  ZeroEnergyClassification c = classify_zero_energy(ev);
  require_evolvable(c);
  if (opt.check_spectrum) {
    SpectrumScan scan = scan_positive_spectrum(ev, default_scan_grid(ev));
    if (!scan.clean) {
      std::ostringstream os;
      os << "positive spectrum scan flagged w = " << scan.flagged.front();
      throw Error(ErrorKind::EmbeddedEigenvalue, os.str());
    }
  }
  TimeEvolutionResult r;
  r.kind = c.kind;
  r.times = times;
  r.u.assign(times.size(), Mat());
  r.diagnostics.assign(times.size(), {});
  r.weight = reduced_evolution_at(ev, c, 0.0, tol, opt, nullptr);
  std::exception_ptr failure;
  long n = static_cast<long>(times.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (long i = 0; i < n; ++i) {
    try {
      r.u[i] = reduced_evolution_at(ev, c, times[i], tol, opt, &r.diagnostics[i]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return r;
}

std::vector<double> survival_probability(const TimeEvolutionResult& r, const Vec& psi) {
  if (psi.size() != r.weight.rows()) throw Error(ErrorKind::InvalidInput, "psi has the wrong dimension");
  double n2 = std::real(psi.dot(r.weight * psi));
  if (!(n2 > 1e-12 * std::max(psi.squaredNorm(), 1e-300)))
    throw Error(ErrorKind::UndefinedSurvival, "P psi vanishes; the survival probability is undefined");
  std::vector<double> out;
  out.reserve(r.u.size());
  for (const Mat& u : r.u) out.push_back(std::norm(psi.dot(u * psi)) / (n2 * n2));
  return out;
}

SpectralWeight spectral_weight(const ResolventEvaluator& ev, double omega, double tol) {
  ZeroEnergyClassification c = classify_zero_energy(ev);
  require_evolvable(c);
  if (!(omega > 0.0)) throw Error(ErrorKind::InvalidInput, "cutoff must be positive");
  Origin origin = choose_origin(ev, c, 0.0, tol, 0.0);
  if (omega <= origin.omega_min) throw Error(ErrorKind::InvalidInput, "cutoff below the graded origin");
  FilonOptions fo;
  fo.tol = 0.5 * tol * kPi;
  std::function<Mat(double)> g = [&](double w) { return ev.spectral_density_unchecked(w); };
  FilonResult q = filon_integrate(g, 0.0, origin.omega_min, omega, fo);
  SpectralWeight out;
  out.weight = q.value / kPi + origin.value;
  Tail tail = choose_tail(ev, 0.0, omega, std::numeric_limits<double>::infinity(), omega);
  out.tail_estimate = tail.bound / kPi;
  out.error = q.error / kPi + origin.bound;
  return out;
}

cplx log_singular_integral(double t, int q, const CutoffFunction& phi, double tol, long* panels) {
  if (q < 2) throw Error(ErrorKind::Domain, "q must be at least 2");
  double top = phi.d() + phi.a();
  if (!(top < 1.0)) throw Error(ErrorKind::InvalidInput, "cutoff support must lie inside [0, 1)");
  double inv_t2 = t != 0.0 ? 1.0 / (t * t) : 1.0;
  double wmin = dyadic_floor(std::max(1e-300, std::min(1e-12, inv_t2)));
  std::function<cplx(double)> g = [&](double w) { return phi(w) / (w * std::pow(std::log(w), q)); };
  FilonOptions fo;
  fo.tol = tol;
  cplx v;
  FilonResult r = filon_run<cplx>(g, t, wmin, top, fo, &v);
  if (panels) *panels = r.panels;
  double lw = std::log(wmin);
  return v + std::pow(lw, 1 - q) / (1.0 - q);
}

}  // namespace friedrichs
