#include "friedrichs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "friedrichs/error.hpp"
#include "friedrichs/selfenergy.hpp"

namespace friedrichs {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

QuadratureResult integrate_piece(const ScalarFn& f, double a, double b, double tol) {
  double err = 0.0;
  cplx v = GK::integrate([&](double x) { return f(x); }, a, b, 15, tol, &err);
  return {v, err};
}

}  // namespace

QuadratureResult oracle_quadrature(const ScalarFn& f, double a, double b, double tol,
                                   std::vector<double> breakpoints) {
  std::vector<double> pts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double p : breakpoints)
    if (p > a && p < b && p - pts.back() > 1e-10 * std::max(1.0, std::abs(p))) pts.push_back(p);
  if (pts.size() > 1 && std::isfinite(b) && b - pts.back() <= 1e-10 * std::max(1.0, std::abs(b))) pts.pop_back();
  pts.push_back(b);
  QuadratureResult total{0.0, 0.0};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    QuadratureResult r = integrate_piece(f, pts[i], pts[i + 1], tol);
    total.value += r.value;
    total.error += r.error;
  }
  return total;
}

cplx principal_value(const ScalarFn& f, double w, std::vector<double> radii, std::vector<double> breakpoints) {
  if (radii.size() != 3) throw Error(ErrorKind::InvalidInput, "principal_value expects three excision radii");
  // folded integrand on the symmetric window [w - u, w + u], u in [d, w]
  auto folded = [&](double u) { return (f(w + u) - f(w - u)) / u; };
  auto tail = [&](double x) { return f(x) / (x - w); };
  std::vector<double> inner, outer;
  for (double p : breakpoints) {
    if (p < 2.0 * w) inner.push_back(std::abs(p - w));
    else outer.push_back(p);
  }
  for (double x = 8.0 * w; x < 1e2 * std::max(1.0, w); x *= 4.0) outer.push_back(x);
  cplx far = oracle_quadrature(tail, 2.0 * w, std::numeric_limits<double>::infinity(), 1e-13, outer).value;
  Eigen::Matrix3cd m;
  Eigen::Vector3cd v;
  for (int k = 0; k < 3; ++k) {
    double d = radii[k];
    if (d >= w) throw Error(ErrorKind::Domain, "excision radius exceeds the evaluation point");
    m(k, 0) = 1.0;
    m(k, 1) = d;
    m(k, 2) = d * d * d;
    v(k) = far + oracle_quadrature(folded, d, w, 1e-10, inner).value;
  }
  return m.partialPivLu().solve(v)(0);
}

DiscretizedHamiltonian::DiscretizedHamiltonian(const ModelSpec& spec, DiscretizationParams p)
    : spec_(spec), n_(spec.size()) {
  require_valid(spec);
  double omega = p.omega_max;
  if (omega <= 0.0) {
    SelfEnergyEvaluator se(build_gamma(spec));
    omega = std::max(50.0 * se.pole_scale(), 2.0 * std::abs(spec.levels.back()) + 1.0);
  }
  // the geometric part ends at 20 uniform spacings; solve for the spacing self-consistently
  double delta = omega / p.m;
  int ng = 0;
  for (int it = 0; it < 50; ++it) {
    double ws = 20.0 * delta;
    ng = ws > p.omega_min ? static_cast<int>(std::ceil(std::log(ws / p.omega_min) / std::log(p.ratio))) : 0;
    double nd = (omega - ws) / (p.m - ng);
    if (std::abs(nd - delta) < 1e-15 * delta) break;
    delta = nd;
  }
  if (ng >= p.m) throw Error(ErrorKind::InvalidInput, "grid too small for the graded segment");
  double ws = 20.0 * delta;
  double r = ng > 0 ? std::pow(ws / p.omega_min, 1.0 / ng) : 1.0;
  double lo = p.omega_min;
  for (int k = 0; k < ng; ++k) {
    double hi = k + 1 == ng ? ws : lo * r;
    nodes_.push_back(0.5 * (lo + hi));
    widths_.push_back(hi - lo);
    lo = hi;
  }
  int nu = p.m - ng;
  delta = (omega - ws) / nu;
  for (int k = 0; k < nu; ++k) {
    nodes_.push_back(ws + (k + 0.5) * delta);
    widths_.push_back(delta);
  }
  spacing_ = delta;
  b_.resize(n_, grid_size());
  for (int n = 0; n < n_; ++n)
    for (int j = 0; j < grid_size(); ++j)
      b_(n, j) = std::conj(spec.form_factors[n].v(nodes_[j])) * std::sqrt(widths_[j]);
}

Mat DiscretizedHamiltonian::dense() const {
  int d = dimension();
  Mat h = Mat::Zero(d, d);
  for (int n = 0; n < n_; ++n) h(n, n) = spec_.levels[n];
  for (int j = 0; j < grid_size(); ++j) h(n_ + j, n_ + j) = nodes_[j];
  h.topRightCorner(n_, grid_size()) = spec_.coupling * b_;
  h.bottomLeftCorner(grid_size(), n_) = spec_.coupling * b_.adjoint();
  return h;
}

namespace {

struct Secular {
  double d0;
  const std::vector<double>& p;
  const std::vector<double>& z2;

  // f at E = p[a] + tau, with derivative
  double value(int a, double tau, double* deriv) const {
    double s = 0.0, ds = 0.0;
    double pa = a >= 0 ? p[a] : 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      double dj = (p[j] - pa) - tau;
      s += z2[j] / dj;
      ds += z2[j] / (dj * dj);
    }
    if (deriv) *deriv = -1.0 - ds;
    return d0 - (pa + tau) - s;
  }

  double solve(int a, double lo, double hi) const {
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      double d = 0.0;
      double f = value(a, x, &d);
      if (f == 0.0) return x;
      if (f > 0) lo = x;
      else hi = x;
      double xn = x - f / d;
      if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
      double tol = 1e-15 * std::abs(xn) + 1e-300;
      if (std::abs(xn - x) <= tol || hi - lo <= tol) return xn;
      x = xn;
    }
    return x;
  }
};

}  // namespace

void DiscretizedHamiltonian::diagonalize() const {
  if (solved_) return;
  int d = dimension();
  if (n_ == 1) {
    double lam = spec_.coupling;
    std::vector<double> p, z2;
    std::vector<double> deflated;
    double zscale = 0.0;
    for (int j = 0; j < grid_size(); ++j) zscale = std::max(zscale, lam * lam * std::norm(b_(0, j)));
    for (int j = 0; j < grid_size(); ++j) {
      double w = lam * lam * std::norm(b_(0, j));
      if (w <= 1e-32 * std::max(zscale, 1e-300)) deflated.push_back(nodes_[j]);
      else {
        p.push_back(nodes_[j]);
        z2.push_back(w);
      }
    }
    Secular s{spec_.levels[0], p, z2};
    std::vector<std::pair<double, double>> eig;  // (E, weight)
    auto weight = [&](int a, double tau) {
      double acc = 1.0;
      double pa = a >= 0 ? p[a] : 0.0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        double dj = (p[j] - pa) - tau;
        acc += z2[j] / (dj * dj);
      }
      return 1.0 / acc;
    };
    if (p.empty()) {
      eig.push_back({spec_.levels[0], 1.0});
    } else {
      int k = static_cast<int>(p.size());
      double span = 1.0 + std::abs(spec_.levels[0] - p[0]);
      double lo = -span;
      while (s.value(0, lo, nullptr) <= 0) lo *= 2;
      double tau = s.solve(0, lo, 0.0);
      eig.push_back({p[0] + tau, weight(0, tau)});
      for (int i = 0; i + 1 < k; ++i) {
        double g = p[i + 1] - p[i];
        double fm = s.value(i, 0.5 * g, nullptr);
        if (fm > 0) {
          double t = s.solve(i + 1, -0.5 * g, 0.0);
          eig.push_back({p[i + 1] + t, weight(i + 1, t)});
        } else {
          double t = s.solve(i, 0.0, 0.5 * g);
          eig.push_back({p[i] + t, weight(i, t)});
        }
      }
      double hi = 1.0 + std::abs(spec_.levels[0] - p[k - 1]);
      while (s.value(k - 1, hi, nullptr) >= 0) hi *= 2;
      tau = s.solve(k - 1, 0.0, hi);
      eig.push_back({p[k - 1] + tau, weight(k - 1, tau)});
    }
    for (double e : deflated) eig.push_back({e, 0.0});
    std::sort(eig.begin(), eig.end());
    evals_.resize(d);
    comps_.resize(1, d);
    for (int i = 0; i < d; ++i) {
      evals_(i) = eig[i].first;
      comps_(0, i) = std::sqrt(eig[i].second);
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(dense());
    evals_ = es.eigenvalues();
    comps_ = es.eigenvectors().topRows(n_);
  }
  solved_ = true;
}

const Eigen::VectorXd& DiscretizedHamiltonian::eigenvalues() const {
  diagonalize();
  return evals_;
}

const Mat& DiscretizedHamiltonian::level_components() const {
  diagonalize();
  return comps_;
}

std::vector<double> DiscretizedHamiltonian::smallest_eigenvalues(int k) const {
  const auto& e = eigenvalues();
  return std::vector<double>(e.data(), e.data() + std::min<int>(k, e.size()));
}

double DiscretizedHamiltonian::zero_mode_residual(const Vec& psi) const {
  int m = grid_size();
  Vec full(dimension());
  full.head(n_) = psi;
  for (int j = 0; j < m; ++j) {
    cplx s = 0.0;
    for (int n = 0; n < n_; ++n) s += psi(n) * spec_.form_factors[n].v(nodes_[j]);
    full(n_ + j) = -spec_.coupling * s / nodes_[j] * std::sqrt(widths_[j]);
  }
  Vec hv(dimension());
  Vec lv = Vec::Zero(n_);
  for (int n = 0; n < n_; ++n) lv(n) = spec_.levels[n] * psi(n);
  hv.head(n_) = lv + spec_.coupling * b_ * full.tail(m);
  Vec cont = spec_.coupling * b_.adjoint() * psi;
  for (int j = 0; j < m; ++j) cont(j) += nodes_[j] * full(n_ + j);
  hv.tail(m) = cont;
  return hv.norm() / full.norm();
}

Mat DiscretizedHamiltonian::resolvent(cplx z) const {
  const auto& e = eigenvalues();
  const auto& c = level_components();
  Mat r = Mat::Zero(n_, n_);
  for (int k = 0; k < e.size(); ++k) r += c.col(k) * c.col(k).adjoint() / (e(k) - z);
  return r;
}

cplx oracle_evolution(const DiscretizedHamiltonian& dh, const Vec& psi, double t) {
  return oracle_evolution(dh, psi, std::vector<double>{t})[0];
}

std::vector<cplx> oracle_evolution(const DiscretizedHamiltonian& dh, const Vec& psi, const std::vector<double>& t) {
  const auto& e = dh.eigenvalues();
  const auto& c = dh.level_components();
  std::vector<double> w;
  std::vector<double> en;
  for (int k = 0; k < e.size(); ++k) {
    if (e(k) <= 0.0) continue;
    en.push_back(e(k));
    w.push_back(std::norm(c.col(k).dot(psi)));
  }
  std::vector<cplx> out(t.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < t.size(); ++i) {
    cplx s = 0.0;
    for (std::size_t k = 0; k < en.size(); ++k) s += w[k] * std::exp(cplx(0.0, -t[i] * en[k]));
    out[i] = s;
  }
  return out;
}

ConvergenceReport convergence_study(const std::vector<double>& spacings, const std::vector<std::vector<cplx>>& samples) {
  if (spacings.size() != samples.size() || samples.size() < 3)
    throw Error(ErrorKind::InvalidInput, "convergence study needs at least three refinement levels");
  ConvergenceReport rep;
  rep.spacings = spacings;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    double d = 0.0;
    for (std::size_t i = 0; i < samples[k].size(); ++i) d = std::max(d, std::abs(samples[k + 1][i] - samples[k][i]));
    rep.differences.push_back(d);
  }
  double acc = 0.0;
  int cnt = 0;
  for (std::size_t k = 0; k + 1 < rep.differences.size(); ++k) {
    acc += std::log(rep.differences[k] / rep.differences[k + 1]) / std::log(spacings[k] / spacings[k + 1]);
    ++cnt;
  }
  rep.order = acc / cnt;
  rep.monotone = std::is_sorted(rep.differences.rbegin(), rep.differences.rend());
  return rep;
}

}  // namespace friedrichs
