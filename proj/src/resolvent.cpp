#include "friedrichs/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "friedrichs/error.hpp"
#include "friedrichs/linalg.hpp"

namespace friedrichs {

ResolventEvaluator::ResolventEvaluator(const ModelSpec& spec, ResolventOptions opt, const Tolerances& tol)
    : spec_(spec), opt_(opt), se_(build_gamma(spec, tol), tol) {
  int n = spec.size();
  k0_ = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) k0_(i, i) = spec.levels[i];
  kz_raw_ = hermitian_part(k0_ - spec.lambda2() * se_.s0());
  double k0n = 0.0;
  for (double w : spec.levels) k0n = std::max(k0n, std::abs(w));
  double s0n = hermitian_eigen(se_.s0()).values.cwiseAbs().maxCoeff();
  tau_kernel_ = opt.kernel_rel * std::max(k0n, spec.lambda2() * s0n);
  kz_ = kz_raw_;
  if (opt.snap_kernel) {
    HermitianEigen e = hermitian_eigen(kz_raw_);
    Eigen::VectorXd v = e.values;
    for (int i = 0; i < v.size(); ++i)
      if (std::abs(v(i)) < tau_kernel_) v(i) = 0.0;
    kz_ = hermitian_part(e.vectors * v.cast<cplx>().asDiagonal() * e.vectors.adjoint());
  }
}

Mat ResolventEvaluator::k(cplx z) const { return k0_ - lambda2() * se_.self_energy(z); }

Mat ResolventEvaluator::k_minus_z(cplx z) const {
  int n = size();
  return kz_ - lambda2() * se_.delta(z) - z * Mat::Identity(n, n);
}

Mat ResolventEvaluator::k_minus_z_second_sheet(cplx z) const {
  int n = size();
  return kz_ - lambda2() * se_.delta_second_sheet(z) - z * Mat::Identity(n, n);
}

Mat ResolventEvaluator::boundary_matrix(double w, int side) const {
  int n = size();
  Mat shift = se_.boundary_shift(w) + (side > 0 ? 1.0 : -1.0) * kI * kPi * se_.gamma().eval(w);
  return kz_ - lambda2() * shift - w * Mat::Identity(n, n);
}

Mat ResolventEvaluator::resolvent_unchecked(cplx z) const { return k_minus_z(z).partialPivLu().inverse(); }

Mat ResolventEvaluator::second_sheet_resolvent(cplx z) const {
  return k_minus_z_second_sheet(z).partialPivLu().inverse();
}

Mat ResolventEvaluator::boundary_resolvent_unchecked(double w, int side) const {
  return boundary_matrix(w, side).partialPivLu().inverse();
}

Mat ResolventEvaluator::spectral_density_unchecked(double w) const {
  Mat rp = boundary_resolvent_unchecked(w, +1);
  return hermitian_part((rp - rp.adjoint()) / (2.0 * kI));
}

Mat reduced_resolvent(const ResolventEvaluator& ev, cplx z) {
  log_minus(z);
  Mat m = ev.k_minus_z(z);
  double cond = condition_number(m);
  if (!(cond <= ev.options().max_condition)) {
    std::ostringstream os;
    os << "K(z) - z nearly singular at z = " << z << ", |det| = " << std::abs(m.determinant()) << ", cond = " << cond;
    throw Error(ErrorKind::EigenvalueProximity, os.str());
  }
  Mat r = m.partialPivLu().inverse();
  int n = ev.size();
  double res = (m * r - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  if (res > 1e-10 * cond) throw Error(ErrorKind::Numerical, "resolvent residual too large");
  return r;
}

Mat boundary_resolvent(const ResolventEvaluator& ev, double w, int side) {
  if (!(w > 0.0)) throw Error(ErrorKind::Domain, "boundary resolvent needs w > 0");
  Mat m = ev.boundary_matrix(w, side);
  double s = min_singular_value(m);
  if (s <= ev.options().tau_sing) {
    std::ostringstream os;
    os << "K(w +- i0) - w singular at w = " << w << " (sigma_min = " << s << "); possible embedded eigenvalue";
    throw Error(ErrorKind::EmbeddedEigenvalue, os.str());
  }
  return m.partialPivLu().inverse();
}

Mat spectral_density(const ResolventEvaluator& ev, double w) {
  Mat rp = boundary_resolvent(ev, w, +1);
  Mat rm = boundary_resolvent(ev, w, -1);
  return hermitian_part((rp - rm) / (2.0 * kI));
}

Mat spectral_density_product(const ResolventEvaluator& ev, double w) {
  Mat rp = boundary_resolvent(ev, w, +1);
  Mat rm = boundary_resolvent(ev, w, -1);
  return hermitian_part(ev.lambda2() * kPi * rp * ev.self_energy().gamma().eval(w) * rm);
}

std::vector<double> default_scan_grid(const ResolventEvaluator& ev, int points) {
  double hi = 1e3 * std::max({1.0, ev.self_energy().pole_scale(), std::abs(ev.spec().levels.back())});
  std::vector<double> g;
  double lo = 1e-8;
  for (int i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  for (double w : ev.spec().levels)
    if (w > 0)
      for (double f : {-1e-3, -1e-5, 0.0, 1e-5, 1e-3}) g.push_back(w * (1.0 + f));
  std::sort(g.begin(), g.end());
  return g;
}

SpectrumScan scan_positive_spectrum(const ResolventEvaluator& ev, const std::vector<double>& grid) {
  SpectrumScan out;
  out.grid = grid;
  out.min_singular.resize(grid.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t i = 0; i < grid.size(); ++i) out.min_singular[i] = min_singular_value(ev.boundary_matrix(grid[i], +1));
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (out.min_singular[i] < ev.options().tau_sing) {
      out.clean = false;
      out.flagged.push_back(grid[i]);
    }
  return out;
}

namespace {

HermitianEigen negative_axis_eigen(const ResolventEvaluator& ev, double x) {
  return hermitian_eigen(hermitian_part(ev.k_minus_z(cplx(x, 0.0))));
}

}  // namespace

// every sorted eigenvalue of K(x) - x decreases in x on the negative axis (d/dx S(x) >= 0), so the
// number of bound states equals the number of negative eigenvalues of K(0)
std::vector<NegativeEigenvalue> find_negative_eigenvalues(const ResolventEvaluator& ev) {
  std::vector<NegativeEigenvalue> out;
  HermitianEigen k0 = hermitian_eigen(ev.k_zero());
  int n = ev.size();
  double xmax = std::abs(ev.spec().levels.back()) + std::abs(ev.spec().levels.front()) +
                2.0 * ev.lambda2() * hermitian_eigen(ev.self_energy().s0()).values.cwiseAbs().maxCoeff() + 1.0;
  double xlo_floor = -1e-8;
  for (int i = 0; i < n; ++i) {
    if (!(k0.values(i) < -ev.tau_kernel())) continue;
    double lo = -xmax;
    while (negative_axis_eigen(ev, lo).values(i) <= 0.0) lo *= 2.0;
    double hi = xlo_floor;
    if (negative_axis_eigen(ev, hi).values(i) > 0.0) continue;
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
      double mid = 0.5 * (lo + hi);
      if (negative_axis_eigen(ev, mid).values(i) > 0.0) lo = mid;
      else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    HermitianEigen e = negative_axis_eigen(ev, x);
    Vec v = e.vectors.col(i);
    double res = (ev.k_minus_z(cplx(x, 0.0)) * v).norm();
    if (res <= 1e-8) out.push_back({x, v, res});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return out;
}

Mat second_sheet_residue(const ResolventEvaluator& ev, cplx pole, double radius) {
  int n = ev.size();
  Mat acc = Mat::Zero(n, n);
  const int k = 64;
  for (int j = 0; j < k; ++j) {
    cplx d = std::polar(radius, 2.0 * kPi * (j + 0.5) / k);
    acc += ev.second_sheet_resolvent(pole + d) * d;
  }
  return acc / static_cast<double>(k);
}

ResonanceSearch find_resonance_poles(const ResolventEvaluator& ev, const SearchRectangle& box, int grid) {
  if (!(box.im_max < 0.0) || box.re_min >= box.re_max || box.im_min >= box.im_max)
    throw Error(ErrorKind::Domain, "resonance search needs a rectangle in the lower half-plane");
  if (std::abs(cplx(std::clamp(0.0, box.re_min, box.re_max), std::clamp(0.0, box.im_min, box.im_max))) < 1e-3)
    throw Error(ErrorKind::Domain, "resonance search rectangle touches the threshold");
  const auto& se = ev.self_energy();
  auto near_gamma_pole = [&](cplx z) {
    for (cplx p : se.poles())
      if (std::abs(z - p) < 1e-6 * std::max(1.0, std::abs(p))) return true;
    return false;
  };
  auto det = [&](cplx z) { return ev.k_minus_z_second_sheet(z).determinant(); };

  std::vector<cplx> seeds;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      seeds.push_back(cplx(box.re_min + (box.re_max - box.re_min) * (i + 0.5) / grid,
                           box.im_min + (box.im_max - box.im_min) * (j + 0.5) / grid));
  for (double w : ev.spec().levels) {
    if (!(w > 0.0)) continue;
    BoundaryValues bv = se.boundary_values(w);
    Mat sp = bv.d + kI * kPi * bv.gamma;
    Eigen::ComplexEigenSolver<Mat> es(ev.k0() - ev.lambda2() * sp);
    for (int i = 0; i < es.eigenvalues().size(); ++i) seeds.push_back(es.eigenvalues()(i));
    seeds.push_back(cplx(w, -1e-3 * w));
  }

  ResonanceSearch out;
  double span = std::max(box.re_max - box.re_min, box.im_max - box.im_min);
  for (cplx z : seeds) {
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      if (z.imag() >= 0.0 || near_gamma_pole(z)) break;
      cplx f = det(z);
      if (f == 0.0) {
        ok = true;
        break;
      }
      double h = 1e-6 * std::max(1.0, std::abs(z));
      h = std::min(h, 0.25 * std::abs(z.imag()));
      cplx df = (det(z + h) - det(z - h)) / (2.0 * h);
      if (df == 0.0) break;
      cplx step = f / df;
      if (std::abs(step) > 0.5 * span) step *= 0.5 * span / std::abs(step);
      z -= step;
      if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) {
        ok = true;
        break;
      }
    }
    if (!ok || z.imag() >= 0.0 || z.real() < box.re_min || z.real() > box.re_max || z.imag() < box.im_min ||
        z.imag() > box.im_max) {
      if (!ok) ++out.failed_seeds;
      continue;
    }
    double d = std::abs(det(z));
    if (d > 1e-10) {
      ++out.failed_seeds;
      continue;
    }
    if (std::any_of(out.poles.begin(), out.poles.end(), [&](const ResonancePole& p) { return std::abs(p.z - z) < 1e-8; }))
      continue;
    out.poles.push_back({z, d, Mat()});
  }
  for (auto& p : out.poles) {
    double r = 0.25 * std::abs(p.z.imag());
    for (const auto& q : out.poles)
      if (&q != &p) r = std::min(r, 0.25 * std::abs(q.z - p.z));
    for (cplx g : se.poles()) r = std::min(r, 0.25 * std::abs(g - p.z));
    p.residue = second_sheet_residue(ev, p.z, r);
  }
  std::sort(out.poles.begin(), out.poles.end(), [](const auto& a, const auto& b) { return a.z.real() < b.z.real(); });
  return out;
}

}  // namespace friedrichs
