#include "friedrichs/selfenergy.hpp"

#include <algorithm>
#include <cmath>

#include "friedrichs/error.hpp"
#include "friedrichs/linalg.hpp"

namespace friedrichs {

cplx log_minus(cplx z) {
  if (z.imag() == 0.0 && z.real() >= 0.0)
    throw Error(ErrorKind::BranchBoundary, "log(-z) requested on the closed positive real axis");
  return std::log(-z);
}

cplx halfline_integral(const PoleDecomposition& pd) {
  cplx s = 0.0;
  for (const PoleTerm& t : pd.terms) {
    s -= t.coeffs[0] * std::log(-t.pole);
    for (int j = 2; j <= t.order; ++j) s += t.coeffs[j - 1] * std::pow(-t.pole, 1 - j) / static_cast<double>(j - 1);
  }
  return s;
}

cplx halfline_integral(const RationalFunction& r, const Tolerances& tol) {
  if (r.is_zero()) return 0.0;
  validate_no_poles_on_halfline(r, tol);
  if (!r.integrable_tail()) throw Error(ErrorKind::InvalidInput, "integrand does not decay like w^-2");
  return halfline_integral(partial_fractions(r, tol));
}

PoleDecomposition divide_by_omega(const PoleDecomposition& pd, cplx* dropped) {
  PoleDecomposition out;
  cplx origin = 0.0;
  for (const PoleTerm& t : pd.terms) {
    PoleTerm u{t.pole, t.order, std::vector<cplx>(t.order, 0.0)};
    for (int i = 1; i <= t.order; ++i) {
      cplx s = 0.0;
      for (int j = i; j <= t.order; ++j)
        s += t.coeffs[j - 1] * ((j - i) % 2 ? -1.0 : 1.0) * std::pow(t.pole, -(j - i + 1));
      u.coeffs[i - 1] = s;
    }
    for (int j = 1; j <= t.order; ++j) origin += t.coeffs[j - 1] * std::pow(-t.pole, -j);
    out.residue_sum += u.coeffs[0];
    out.terms.push_back(std::move(u));
  }
  if (dropped) *dropped = origin;
  return out;
}

namespace {

double decomposition_scale(const PoleDecomposition& pd) {
  double s = 0.0;
  for (const PoleTerm& t : pd.terms)
    for (int j = 1; j <= t.order; ++j) s += std::abs(t.coeffs[j - 1]) * std::pow(std::abs(t.pole), -j);
  return s;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

CauchyClosedForm::CauchyClosedForm(RationalFunction eta, const Tolerances& tol) : eta_(std::move(eta)) {
  if (eta_.is_zero()) return;
  pd_ = partial_fractions(eta_, tol);
  for (const PoleTerm& t : pd_.terms) {
    // principal part of eta(z) log(-z) at the pole
    PoleTerm r{t.pole, t.order, std::vector<cplx>(t.order, 0.0)};
    for (int j = 1; j <= t.order; ++j)
      for (int n = 0; n < j; ++n) {
        cplx ell = n == 0 ? std::log(-t.pole) : (n % 2 ? 1.0 : -1.0) / (static_cast<double>(n) * std::pow(t.pole, n));
        r.coeffs[j - n - 1] += t.coeffs[j - 1] * ell;
      }
    rat_.residue_sum += r.coeffs[0];
    rat_.terms.push_back(std::move(r));
  }
  rat0_ = rat_(0.0);
}

cplx CauchyClosedForm::transform_with_log(cplx zeta, cplx log_zeta) const {
  cplx total = 0.0;
  cplx jv[kMaxPoleOrder + 1];
  for (const PoleTerm& t : pd_.terms) {
    cplx a = t.pole, delta = zeta - a;
    if (std::abs(delta) < 0.25 * distance_to_halfline(a)) {
      for (int j = 1; j <= t.order; ++j) {
        cplx s = 0.0, dn = 1.0, ma = -a;
        for (int n = 0; n < 60; ++n, dn *= delta) {
          cplx term = dn * std::pow(ma, -(j + n)) / static_cast<double>(j + n);
          s += term;
          if (std::abs(term) <= 1e-17 * std::abs(s)) break;
        }
        jv[j] = s;
      }
    } else {
      cplx inv = 1.0 / (a - zeta);
      jv[1] = (log_zeta - std::log(-a)) * inv;
      for (int j = 2; j <= t.order; ++j) jv[j] = (std::pow(-a, 1 - j) / static_cast<double>(j - 1) - jv[j - 1]) * inv;
    }
    for (int j = 1; j <= t.order; ++j) total += t.coeffs[j - 1] * jv[j];
  }
  return total;
}

cplx CauchyClosedForm::a(cplx z) const {
  cplx s = 0.0;
  for (const PoleTerm& t : rat_.terms) {
    cplx u = 1.0 / (z - t.pole), v = -1.0 / t.pole;
    cplx diff = z / (t.pole * (z - t.pole));
    for (int i = 1; i <= t.order; ++i) {
      cplx acc = 0.0;
      for (int k = 0; k < i; ++k) acc += std::pow(u, k) * std::pow(v, i - 1 - k);
      s += t.coeffs[i - 1] * diff * acc;
    }
  }
  return s;
}

std::vector<cplx> CauchyClosedForm::rat_taylor(int order) const {
  std::vector<cplx> c(order + 1, 0.0);
  for (const PoleTerm& t : rat_.terms)
    for (int i = 1; i <= t.order; ++i) {
      cplx base = t.coeffs[i - 1] * std::pow(-t.pole, -i);
      for (int n = 0; n <= order; ++n) c[n] += base * binom(n + i - 1, i - 1) * std::pow(t.pole, -n);
    }
  return c;
}

cplx cauchy_transform(const CauchyClosedForm& cf, cplx zeta, const Tolerances& tol) {
  log_minus(zeta);
  for (const PoleTerm& t : cf.decomposition().terms)
    if (std::abs(zeta - t.pole) <= tol.root * std::max(1.0, std::abs(t.pole)))
      throw Error(ErrorKind::PoleCollision, "zeta coincides with a pole of eta");
  return cf.transform(zeta);
}

SelfEnergyEvaluator::SelfEnergyEvaluator(GammaMatrix g, const Tolerances& tol)
    : n_(g.size()), g_(std::move(g)), tol_(tol) {
  cf_.reserve(n_ * n_);
  for (int m = 0; m < n_; ++m)
    for (int n = 0; n < n_; ++n) cf_.emplace_back(g_(m, n), tol_);
  double rmin = HUGE_VAL, rmax = 0.0;
  for (const auto& c : cf_)
    for (const PoleTerm& t : c.decomposition().terms) {
      if (std::none_of(poles_.begin(), poles_.end(), [&](cplx p) { return std::abs(p - t.pole) < tol_.cluster; }))
        poles_.push_back(t.pole);
      rmin = std::min(rmin, std::abs(t.pole));
      rmax = std::max(rmax, std::abs(t.pole));
    }
  if (std::isfinite(rmin)) {
    pole_radius_ = rmin;
    pole_scale_ = rmax;
  }
  s0_ = Mat::Zero(n_, n_);
  for (int m = 0; m < n_; ++m)
    for (int n = m; n < n_; ++n) {
      const auto& pd = entry(m, n).decomposition();
      cplx origin = 0.0;
      PoleDecomposition q = divide_by_omega(pd, &origin);
      if (std::abs(origin) > tol_.pf * std::max(1.0, decomposition_scale(pd)))
        throw Error(ErrorKind::NonIntegrable, "Gamma does not vanish at the origin");
      cplx v = halfline_integral(q);
      s0_(m, n) = v;
      s0_(n, m) = std::conj(v);
    }
  for (int m = 0; m < n_; ++m) s0_(m, m) = s0_(m, m).real();
}

Mat SelfEnergyEvaluator::self_energy_unchecked(cplx z) const {
  Mat s(n_, n_);
  cplx lz = log_minus_unchecked(z);
  for (int m = 0; m < n_; ++m)
    for (int n = 0; n < n_; ++n) s(m, n) = entry(m, n).transform_with_log(z, lz);
  return s;
}

Mat SelfEnergyEvaluator::self_energy(cplx z) const {
  log_minus(z);
  for (cplx p : poles_)
    if (std::abs(z - p) <= tol_.root * std::max(1.0, std::abs(p)))
      throw Error(ErrorKind::PoleCollision, "z coincides with a pole of Gamma");
  return self_energy_unchecked(z);
}

Mat SelfEnergyEvaluator::gamma_at(cplx z) const { return g_.eval(z); }

Mat SelfEnergyEvaluator::a(cplx z) const {
  Mat s(n_, n_);
  for (int m = 0; m < n_; ++m)
    for (int n = 0; n < n_; ++n) s(m, n) = entry(m, n).a(z);
  return s;
}

Mat SelfEnergyEvaluator::delta(cplx z) const {
  if (std::abs(z) < 0.5 * pole_radius_) return a(z) - log_minus_unchecked(z) * gamma_at(z);
  return self_energy_unchecked(z) - s0_;
}

Mat SelfEnergyEvaluator::delta_second_sheet(cplx z) const { return delta(z) + 2.0 * kPi * kI * gamma_at(z); }

Mat SelfEnergyEvaluator::boundary_shift(double w) const {
  if (w < 0.5 * pole_radius_) {
    Mat d = a(w) - std::log(w) * g_.eval(w);
    return hermitian_part(d);
  }
  Mat d(n_, n_);
  double lw = std::log(w);
  for (int m = 0; m < n_; ++m)
    for (int n = m; n < n_; ++n) {
      d(m, n) = entry(m, n).transform_with_log(w, lw) - s0_(m, n);
      d(n, m) = std::conj(d(m, n));
    }
  for (int m = 0; m < n_; ++m) d(m, m) = d(m, m).real();
  return d;
}

BoundaryValues SelfEnergyEvaluator::boundary_values(double w) const {
  if (!(w > 0.0)) throw Error(ErrorKind::Domain, "boundary values need w > 0");
  return {s0_ + boundary_shift(w), g_.eval(w)};
}

Mat SelfEnergyEvaluator::second_sheet(cplx z) const {
  for (cplx p : poles_)
    if (std::abs(z - p) <= tol_.root * std::max(1.0, std::abs(p)))
      throw Error(ErrorKind::PoleCollision, "second sheet evaluated at a pole of Gamma");
  return self_energy_unchecked(z) + 2.0 * kPi * kI * gamma_at(z);
}

Mat SelfEnergyEvaluator::rat_taylor(int n) const {
  Mat s(n_, n_);
  for (int m = 0; m < n_; ++m)
    for (int k = 0; k < n_; ++k) s(m, k) = entry(m, k).rat_taylor(n)[n];
  return s;
}

Mat self_energy(const SelfEnergyEvaluator& s, cplx z) { return s.self_energy(z); }
Mat self_energy_zero(const SelfEnergyEvaluator& s) { return s.s0(); }
BoundaryValues boundary_values(const SelfEnergyEvaluator& s, double w) { return s.boundary_values(w); }
Mat second_sheet_self_energy(const SelfEnergyEvaluator& s, cplx z) { return s.second_sheet(z); }

ASeries a_series(const SelfEnergyEvaluator& s, double lambda, int depth) {
  if (lambda == 0.0) throw Error(ErrorKind::DegenerateCoupling, "A-tilde needs a nonzero coupling");
  ASeries out;
  int n = s.size();
  for (int k = 1; k <= std::max(depth, 1); ++k) out.a.push_back(s.rat_taylor(k));
  double scale = std::max(1.0 / (lambda * lambda), out.a[0].norm());
  out.n_a = 0;
  for (int k = 1; k <= static_cast<int>(out.a.size()); ++k) {
    Mat at = out.a[k - 1];
    if (k == 1) at += Mat::Identity(n, n) / (lambda * lambda);
    if (at.norm() > 1e-12 * scale) {
      out.n_a = k;
      out.atilde_na = at;
      break;
    }
  }
  if (out.n_a == 0) throw Error(ErrorKind::InconclusiveOrder, "A-tilde vanishes through the requested depth");
  int n_b = gamma_small_expansion(s.gamma(), 0, s.tolerances()).n_b;
  if (n_b >= 2 && out.n_a != 1)
    throw Error(ErrorKind::Numerical, "n_b >= 2 requires n_a = 1; the A-series is inconsistent");
  return out;
}

cplx moment_integral(const RationalFunction& entry, int p, const Tolerances& tol) {
  if (entry.is_zero()) return 0.0;
  if (!entry.integrable_tail()) throw Error(ErrorKind::NonIntegrable, "entry does not decay like w^-2");
  PoleDecomposition pd = partial_fractions(entry, tol);
  for (int k = 0; k < p; ++k) {
    cplx origin = 0.0;
    PoleDecomposition q = divide_by_omega(pd, &origin);
    if (std::abs(origin) > tol.pf * std::max(1.0, decomposition_scale(pd)))
      throw Error(ErrorKind::NonIntegrable, "entry does not vanish to order " + std::to_string(p) + " at the origin");
    pd = std::move(q);
  }
  return halfline_integral(pd);
}

Mat moment_integral(const SelfEnergyEvaluator& s, int p) {
  int n = s.size();
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = moment_integral(s.gamma()(i, j), p, s.tolerances());
  return m;
}

}  // namespace friedrichs
