#include "friedrichs/polyrat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "friedrichs/error.hpp"

namespace friedrichs {

const Tolerances& default_tolerances() {
  static const Tolerances t;
  return t;
}

Polynomial::Polynomial(std::vector<cplx> coeffs, double trim_rel) : c_(std::move(coeffs)) {
  double m = max_abs();
  while (!c_.empty() && std::abs(c_.back()) <= trim_rel * m) c_.pop_back();
  if (m == 0.0) c_.clear();
}

Polynomial Polynomial::constant(cplx c) { return Polynomial(std::vector<cplx>{c}); }

Polynomial Polynomial::monomial(int k, cplx c) {
  std::vector<cplx> v(k + 1, 0.0);
  v[k] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const cplx> roots, cplx lead) {
  std::vector<cplx> v{lead};
  for (cplx r : roots) {
    v.push_back(0.0);
    for (std::size_t k = v.size() - 1; k > 0; --k) v[k] = v[k - 1] - r * v[k];
    v[0] = -r * v[0];
  }
  Polynomial p;
  p.c_ = std::move(v);
  return p;
}

double Polynomial::max_abs() const {
  double m = 0.0;
  for (cplx c : c_) m = std::max(m, std::abs(c));
  return m;
}

cplx Polynomial::operator()(cplx z) const {
  cplx s = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * z + *it;
  return s;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Polynomial(std::move(d), 0.0);
}

Polynomial Polynomial::conj() const {
  Polynomial p;
  p.c_.resize(c_.size());
  std::transform(c_.begin(), c_.end(), p.c_.begin(), [](cplx c) { return std::conj(c); });
  return p;
}

Polynomial Polynomial::scaled(cplx s) const {
  Polynomial p = *this;
  for (cplx& c : p.c_) c *= s;
  return p;
}

Polynomial Polynomial::shifted(cplx a) const {
  // repeated synthetic division
  std::vector<cplx> v = c_;
  int n = static_cast<int>(v.size());
  for (int i = 0; i < n; ++i)
    for (int k = n - 2; k >= i; --k) v[k] += a * v[k + 1];
  Polynomial p;
  p.c_ = std::move(v);
  return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> v(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (std::size_t k = 0; k < a.c_.size(); ++k) v[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) v[k] += b.c_[k];
  return Polynomial(std::move(v));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b.scaled(-1.0); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> v(a.c_.size() + b.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  Polynomial p;
  p.c_ = std::move(v);
  return p;
}

namespace {

std::vector<cplx> raw_roots(const Polynomial& p) {
  int n = p.degree();
  const auto& c = p.coefficients();
  if (n == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  return std::vector<cplx>(es.eigenvalues().data(), es.eigenvalues().data() + n);
}

// Newton on the (m-1)-th derivative, where an m-fold root is simple
cplx polish(const Polynomial& p, cplx z, int m) {
  Polynomial f = p;
  for (int k = 1; k < m; ++k) f = f.derivative();
  Polynomial df = f.derivative();
  for (int it = 0; it < 3; ++it) {
    cplx d = df(z);
    if (std::abs(d) == 0.0) break;
    cplx zn = z - f(z) / d;
    if (!(std::abs(f(zn)) < std::abs(f(z)))) break;
    z = zn;
  }
  return z;
}

double coefficient_mismatch(const Polynomial& a, const Polynomial& b) {
  double m = std::max(a.max_abs(), b.max_abs());
  double d = 0.0;
  for (int k = 0; k <= std::max(a.degree(), b.degree()); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return m > 0 ? d / m : d;
}

}  // namespace

Polynomial rebuild_from_roots(std::span<const Root> roots, cplx lead) {
  std::vector<cplx> flat;
  for (const Root& r : roots)
    for (int k = 0; k < r.multiplicity; ++k) flat.push_back(r.value);
  return Polynomial::from_roots(flat, lead);
}

std::vector<Root> poly_roots(const Polynomial& p, const Tolerances& tol) {
  if (p.is_zero()) throw Error(ErrorKind::InvalidInput, "poly_roots of the zero polynomial");
  if (p.degree() < 1) throw Error(ErrorKind::InvalidInput, "poly_roots needs degree >= 1");
  std::vector<cplx> z = raw_roots(p);
  int n = static_cast<int>(z.size());

  // single-linkage candidate clusters
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(z[i] - z[j]) < 1e-2 * std::max(1.0, std::abs(z[i]))) parent[find(i)] = find(j);

  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

  std::vector<Root> out;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    auto& g = groups[gi];
    if (g.empty()) continue;
    if (g.size() == 1) {
      out.push_back({polish(p, z[g[0]], 1), 1});
      continue;
    }
    cplx centroid = 0.0;
    for (int i : g) centroid += z[i];
    centroid /= static_cast<double>(g.size());
    // trial merge: accept when the rebuilt polynomial still matches
    std::vector<Root> trial = out;
    trial.push_back({centroid, static_cast<int>(g.size())});
    for (std::size_t hi = gi + 1; hi < groups.size(); ++hi)
      for (int i : groups[hi]) trial.push_back({z[i], 1});
    Polynomial rebuilt = rebuild_from_roots(trial, p.leading());
    if (coefficient_mismatch(rebuilt, p) < 1e-10) {
      int m = static_cast<int>(g.size());
      out.push_back({polish(p, centroid, m), m});
      continue;
    }
    // fall back to pairwise clustering at tau_cluster
    std::vector<bool> used(g.size(), false);
    for (std::size_t a = 0; a < g.size(); ++a) {
      if (used[a]) continue;
      cplx sum = z[g[a]];
      int m = 1;
      for (std::size_t b = a + 1; b < g.size(); ++b)
        if (!used[b] && std::abs(z[g[a]] - z[g[b]]) < tol.cluster) {
          used[b] = true;
          sum += z[g[b]];
          ++m;
        }
      out.push_back({polish(p, sum / static_cast<double>(m), m), m});
    }
  }
  std::sort(out.begin(), out.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw Error(ErrorKind::InvalidInput, "zero denominator");
  cplx lead = den.leading();
  num_ = num.scaled(1.0 / lead);
  den_ = den.scaled(1.0 / lead);
}

bool RationalFunction::integrable_tail() const {
  return num_.is_zero() || num_.degree() + 2 <= den_.degree();
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

cplx PoleDecomposition::operator()(cplx z) const {
  cplx s = 0.0;
  for (const PoleTerm& t : terms) {
    cplx inv = 1.0 / (z - t.pole), pw = inv;
    for (int j = 0; j < t.order; ++j, pw *= inv) s += t.coeffs[j] * pw;
  }
  return s;
}

int PoleDecomposition::max_order() const {
  int m = 0;
  for (const PoleTerm& t : terms) m = std::max(m, t.order);
  return m;
}

std::vector<cplx> series_divide(std::span<const cplx> a, std::span<const cplx> b, int order) {
  std::vector<cplx> q(order + 1, 0.0);
  for (int n = 0; n <= order; ++n) {
    cplx s = n < static_cast<int>(a.size()) ? a[n] : cplx(0.0);
    for (int k = 1; k <= n && k < static_cast<int>(b.size()); ++k) s -= b[k] * q[n - k];
    q[n] = s / b[0];
  }
  return q;
}

PoleDecomposition partial_fractions(const RationalFunction& r, const Tolerances& tol) {
  if (!r.proper()) throw Error(ErrorKind::InvalidInput, "partial_fractions needs a proper rational function");
  PoleDecomposition pd;
  if (r.is_zero()) return pd;
  std::vector<Root> roots = poly_roots(r.denominator(), tol);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const Root& a = roots[k];
    if (a.multiplicity > kMaxPoleOrder)
      throw Error(ErrorKind::InvalidInput, "pole order " + std::to_string(a.multiplicity) + " exceeds 4");
    std::vector<Root> others;
    for (std::size_t j = 0; j < roots.size(); ++j)
      if (j != k) others.push_back(roots[j]);
    Polynomial qt = rebuild_from_roots(others, 1.0).shifted(a.value);
    Polynomial pt = r.numerator().shifted(a.value);
    std::vector<cplx> s = series_divide(pt.coefficients(), qt.coefficients(), a.multiplicity - 1);
    PoleTerm t{a.value, a.multiplicity, std::vector<cplx>(a.multiplicity)};
    for (int j = 0; j < a.multiplicity; ++j) t.coeffs[a.multiplicity - 1 - j] = s[j];
    pd.residue_sum += t.coeffs[0];
    pd.terms.push_back(std::move(t));
  }
  return pd;
}

RationalFunction rat_conjugate(const RationalFunction& r) {
  return RationalFunction(r.numerator().conj(), r.denominator().conj());
}

cplx rat_eval(const RationalFunction& r, cplx z) {
  cplx d = r.denominator()(z);
  if (d == 0.0) throw Error(ErrorKind::PoleCollision, "rat_eval at a pole");
  return r.numerator()(z) / d;
}

RationalFunction rat_derivative(const RationalFunction& r) {
  const Polynomial& p = r.numerator();
  const Polynomial& q = r.denominator();
  return RationalFunction(p.derivative() * q - p * q.derivative(), q * q);
}

std::vector<cplx> rat_series_at_zero(const RationalFunction& r, int order, const Tolerances& tol) {
  if (r.denominator().degree() >= 1)
    for (const Root& z : poly_roots(r.denominator(), tol))
      if (std::abs(z.value) < tol.root) throw Error(ErrorKind::SingularOrigin, "pole at or near the origin");
  if (r.denominator()[0] == 0.0) throw Error(ErrorKind::SingularOrigin, "denominator vanishes at 0");
  return series_divide(r.numerator().coefficients(), r.denominator().coefficients(), order);
}

double distance_to_halfline(cplx z) { return z.real() >= 0 ? std::abs(z.imag()) : std::abs(z); }

void validate_no_poles_on_halfline(const RationalFunction& r, const Tolerances& tol) {
  if (r.denominator().degree() < 1) return;
  for (const Root& z : poly_roots(r.denominator(), tol))
    if (distance_to_halfline(z.value) <= tol.axis)
      throw Error(ErrorKind::Validation, "pole on the half-line near (" + std::to_string(z.value.real()) + ", " +
                                             std::to_string(z.value.imag()) + ")");
}

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Schema: return "schema violation";
    case ErrorKind::Validation: return "validation error";
    case ErrorKind::NonRationalProduct: return "non-rational product";
    case ErrorKind::SingularOrigin: return "singular origin";
    case ErrorKind::BranchBoundary: return "branch boundary";
    case ErrorKind::PoleCollision: return "pole collision";
    case ErrorKind::NonIntegrable: return "non-integrable";
    case ErrorKind::InconclusiveOrder: return "inconclusive order";
    case ErrorKind::DegenerateCoupling: return "degenerate coupling";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::EigenvalueProximity: return "eigenvalue proximity";
    case ErrorKind::EmbeddedEigenvalue: return "embedded eigenvalue";
    case ErrorKind::BorderlineClassification: return "borderline classification";
    case ErrorKind::ClassificationMismatch: return "classification mismatch";
    case ErrorKind::NonNormalizableMode: return "non-normalizable mode";
    case ErrorKind::UndefinedSurvival: return "undefined survival";
    case ErrorKind::BudgetExceeded: return "budget exceeded";
    case ErrorKind::Numerical: return "numerical failure";
  }
  return "error";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Schema:
    case ErrorKind::Validation:
    case ErrorKind::NonRationalProduct: return 2;
    case ErrorKind::ClassificationMismatch: return 3;
    case ErrorKind::BudgetExceeded: return 4;
    default: return 1;
  }
}

}  // namespace friedrichs
