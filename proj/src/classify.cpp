#include "friedrichs/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/LU>

#include "friedrichs/error.hpp"
#include "friedrichs/linalg.hpp"

namespace friedrichs {

const char* to_string(ZeroKind k) {
  switch (k) {
    case ZeroKind::Regular: return "regular";
    case ZeroKind::First: return "first kind";
    case ZeroKind::Second: return "second kind";
    case ZeroKind::Third: return "third kind";
  }
  return "?";
}

namespace {

Mat columns(const Mat& v, const std::vector<int>& idx) {
  Mat out(v.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = v.col(idx[i]);
  return out;
}

void check_band(const Eigen::VectorXd& values, double tau, const char* what) {
  for (int i = 0; i < values.size(); ++i) {
    double a = std::abs(values(i));
    if (a >= 0.1 * tau && a <= 10.0 * tau) {
      std::ostringstream os;
      os << what << ": eigenvalue " << values(i) << " inside the ambiguous band [" << 0.1 * tau << ", " << 10.0 * tau
         << "]";
      throw Error(ErrorKind::BorderlineClassification, os.str());
    }
  }
}

Mat orthonormal_complement(const Mat& basis, int n) {
  Mat p = Mat::Identity(n, n) - projector(basis);
  HermitianEigen e = hermitian_eigen(p);
  std::vector<int> idx;
  for (int i = 0; i < n; ++i)
    if (e.values(i) > 0.5) idx.push_back(i);
  return columns(e.vectors, idx);
}

void require_kind(const ZeroEnergyClassification& c, std::initializer_list<ZeroKind> ok, const char* what) {
  if (std::find(ok.begin(), ok.end(), c.kind) == ok.end())
    throw Error(ErrorKind::ClassificationMismatch, std::string(what) + " not available for a " + to_string(c.kind) +
                                                       " zero-energy point");
}

}  // namespace

ZeroEnergyClassification classify_zero_energy(const ResolventEvaluator& ev) {
  ZeroEnergyClassification c;
  int n = ev.size();
  c.k_zero = ev.k_zero_raw();
  c.tau_kernel = ev.tau_kernel();
  HermitianEigen ke = hermitian_eigen(c.k_zero);
  c.kappa = ke.values;
  check_band(ke.values, c.tau_kernel, "K(0)");
  std::vector<int> ker;
  for (int i = 0; i < n; ++i)
    if (std::abs(ke.values(i)) < c.tau_kernel) ker.push_back(i);
  c.kernel = columns(ke.vectors, ker);
  c.gamma1 = hermitian_part(gamma_coefficient(ev.self_energy().gamma(), 1));
  double g1n = hermitian_eigen(c.gamma1).values.cwiseAbs().maxCoeff();
  c.tau_gamma = 1e-9 * g1n;
  c.m1 = Mat::Zero(n, 0);
  c.m2 = Mat::Zero(n, 0);
  if (!ker.empty()) {
    Mat form = c.kernel.adjoint() * c.gamma1 * c.kernel;
    if (g1n == 0.0) {
      c.m2 = c.kernel;
    } else {
      HermitianEigen fe = hermitian_eigen(form);
      check_band(fe.values, c.tau_gamma, "Gamma_1 restricted to the kernel");
      std::vector<int> i1, i2;
      for (int i = 0; i < fe.values.size(); ++i) (fe.values(i) < c.tau_gamma ? i2 : i1).push_back(i);
      c.m1 = c.kernel * columns(fe.vectors, i1);
      c.m2 = c.kernel * columns(fe.vectors, i2);
    }
  }
  c.q1 = projector(c.m1);
  c.q2 = projector(c.m2);
  c.q0 = Mat::Identity(n, n) - projector(c.kernel);
  bool has1 = c.m1.cols() > 0, has2 = c.m2.cols() > 0;
  c.kind = !has1 && !has2 ? ZeroKind::Regular : has1 && !has2 ? ZeroKind::First : !has1 ? ZeroKind::Second : ZeroKind::Third;
  return c;
}

std::array<double, 2> critical_bracket(const ResolventEvaluator& ev, int n) {
  if (n < 0 || n >= ev.size()) throw Error(ErrorKind::InvalidInput, "level index out of range");
  Eigen::VectorXd s = hermitian_eigen(ev.self_energy().s0()).values;
  double w = ev.spec().levels[n];
  double smax = s(s.size() - 1), smin = s(0);
  if (!(smax > 0.0)) throw Error(ErrorKind::Domain, "S(0) has no positive eigenvalue");
  double hi = smin > 0.0 ? w / smin : std::numeric_limits<double>::infinity();
  return {w / smax, hi};
}

std::vector<CriticalCoupling> critical_couplings(const ResolventEvaluator& ev, int n, double lo, double hi,
                                                 int subintervals) {
  if (n < 0 || n >= ev.size()) throw Error(ErrorKind::InvalidInput, "level index out of range");
  if (!(lo >= 0.0 && hi > lo && std::isfinite(hi))) throw Error(ErrorKind::InvalidInput, "bad lambda^2 interval");
  const Mat& k0 = ev.k0();
  const Mat& s0 = ev.self_energy().s0();
  auto kappa = [&](double l2) { return hermitian_eigen(k0 - l2 * s0).values(n); };
  std::vector<CriticalCoupling> out;
  double x0 = lo, f0 = kappa(lo);
  for (int i = 1; i <= subintervals; ++i) {
    double x1 = lo + (hi - lo) * i / subintervals;
    double f1 = kappa(x1);
    if (f0 == 0.0 || (f0 > 0) != (f1 > 0)) {
      double a = x0, b = x1, fa = f0;
      double root = a;
      if (fa != 0.0) {
        for (int it = 0; it < 200; ++it) {
          double m = 0.5 * (a + b);
          if (m <= a || m >= b) break;
          double fm = kappa(m);
          if (fm == 0.0) {
            a = b = m;
            break;
          }
          if ((fm > 0) == (fa > 0)) a = m, fa = fm;
          else b = m;
        }
        root = std::abs(kappa(a)) <= std::abs(kappa(b)) ? a : b;
      }
      if (root > 0.0 && (out.empty() || std::abs(out.back().lambda2 - root) > 1e-12 * root)) {
        double kv = kappa(root);
        if (std::abs(kv) <= 1e-12) {
          ResolventEvaluator at(ev.spec().with_coupling(std::sqrt(root)), ev.options(), ev.self_energy().tolerances());
          ZeroKind kind = classify_zero_energy(at).kind;
          if (kind != ZeroKind::Regular) out.push_back({std::sqrt(root), root, kv, kind});
        }
      }
    }
    x0 = x1;
    f0 = f1;
  }
  return out;
}

cplx ZeroMode::tail(double w) const {
  cplx s = 0.0;
  for (int n = 0; n < psi_.size(); ++n) s += psi_(n) * spec_.form_factors[n].v(w);
  return -spec_.coupling * s / w;
}

ZeroMode build_zero_mode(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, const Vec& psi) {
  require_kind(c, {ZeroKind::Second, ZeroKind::Third}, "a zero mode is");
  if (psi.norm() == 0.0) throw Error(ErrorKind::InvalidInput, "the zero vector is not a zero mode");
  double g1 = std::real(psi.dot(c.gamma1 * psi));
  if (g1 > c.tau_kernel * psi.squaredNorm())
    throw Error(ErrorKind::NonNormalizableMode, "psi has a Gamma_1 component; it is a resonance direction");
  if ((psi - c.q2 * psi).norm() > 1e-8 * psi.norm()) throw Error(ErrorKind::InvalidInput, "psi is not in M2");
  int n = ev.size();
  const auto& se = ev.self_energy();
  // partial fractions of <psi|Gamma|psi>, merged over entries
  PoleDecomposition sum;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx w = std::conj(psi(a)) * psi(b);
      if (w == 0.0) continue;
      for (const PoleTerm& t : se.entry(a, b).decomposition().terms) {
        auto it = std::find_if(sum.terms.begin(), sum.terms.end(), [&](const PoleTerm& u) {
          return std::abs(u.pole - t.pole) < 1e-7 * std::max(1.0, std::abs(t.pole));
        });
        if (it == sum.terms.end()) {
          sum.terms.push_back({t.pole, t.order, std::vector<cplx>(t.order, 0.0)});
          it = sum.terms.end() - 1;
        }
        if (it->order < t.order) {
          it->coeffs.resize(t.order, 0.0);
          it->order = t.order;
        }
        for (int j = 0; j < t.order; ++j) it->coeffs[j] += w * t.coeffs[j];
      }
    }
  PoleDecomposition q = divide_by_omega(divide_by_omega(sum));
  double norm2 = ev.lambda2() * std::real(halfline_integral(q));
  return ZeroMode(ev.spec(), psi, norm2);
}

Mat small_z_expansion_first_kind(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, cplx z) {
  require_kind(c, {ZeroKind::First}, "the first-kind expansion is");
  double l2 = ev.lambda2();
  Mat g = inverse_on_subspace(c.gamma1, c.m1);
  Mat a1 = ev.self_energy().rat_taylor(1);
  cplx lz = log_minus(z) + kI * kPi;
  Mat mid = c.q1 + l2 * c.q1 * a1 * c.q1 + l2 * kPi * kI * c.q1 * c.gamma1 * c.q1;
  return g / (l2 * z * lz) + g * mid * g / (l2 * l2 * z * lz * lz);
}

Mat small_z_expansion_second_kind(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, cplx z) {
  require_kind(c, {ZeroKind::Second}, "the second-kind expansion is");
  int n = ev.size();
  Mat a1 = ev.self_energy().rat_taylor(1);
  Mat inv = inverse_on_subspace(Mat::Identity(n, n) + ev.lambda2() * a1, c.m2);
  return -inv / z;
}

ThirdKindBlocks third_kind_blocks(const ResolventEvaluator& ev, const ZeroEnergyClassification& c, double w, int side) {
  if (c.m1.cols() == 0 || c.m2.cols() == 0)
    throw Error(ErrorKind::ClassificationMismatch, "third-kind blocks need both M1 and M2 nonzero");
  int n = ev.size();
  Mat e = ev.boundary_matrix(w, side);
  ThirdKindBlocks out;
  const Mat* q[3] = {&c.q0, &c.q1, &c.q2};
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l) out.e[k][l] = *q[k] * e * *q[l];
  Mat pd = c.m2;
  Mat pa = orthonormal_complement(pd, n);
  Mat a = pa.adjoint() * e * pa, b = pa.adjoint() * e * pd, cc = pd.adjoint() * e * pa, d = pd.adjoint() * e * pd;
  Mat ai = a.partialPivLu().inverse(), di = d.partialPivLu().inverse();
  Mat tl = (a - b * di * cc).partialPivLu().inverse();
  Mat br = (d - cc * ai * b).partialPivLu().inverse();
  Mat tr = -ai * b * br, bl = -br * cc * ai;
  out.a_inv = pa * ai * pa.adjoint();
  out.d_inv = pd * di * pd.adjoint();
  out.b = pa * b * pd.adjoint();
  out.c = pd * cc * pa.adjoint();
  out.top_left = pa * tl * pa.adjoint();
  out.bottom_right = pd * br * pd.adjoint();
  out.inverse = out.top_left + out.bottom_right + pa * tr * pd.adjoint() + pd * bl * pa.adjoint();
  return out;
}

}  // namespace friedrichs
