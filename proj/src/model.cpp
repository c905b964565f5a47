#include "friedrichs/model.hpp"

#include <cmath>

#include "friedrichs/error.hpp"

namespace friedrichs {

RationalFunction FormFactor::q() const { return RationalFunction(Polynomial(numerator), Polynomial(denominator)); }

cplx FormFactor::v(double w) const { return std::pow(w, 0.5 * half_power) * q()(w); }

ModelSpec ModelSpec::with_coupling(double lambda) const {
  ModelSpec s = *this;
  s.coupling = lambda;
  return s;
}

ValidationReport validate_model(const ModelSpec& spec, const Tolerances& tol) {
  ValidationReport rep;
  auto fail = [&](std::string m) {
    rep.ok = false;
    rep.messages.push_back(std::move(m));
  };
  int n = spec.size();
  if (n < 1) fail("at least one level is required");
  if (static_cast<int>(spec.form_factors.size()) != n) fail("one form factor per level is required");
  if (!std::isfinite(spec.coupling)) fail("coupling is not finite");
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(spec.levels[i])) fail("level " + std::to_string(i) + " is not finite");
    if (i > 0 && spec.levels[i] < spec.levels[i - 1]) fail("levels must be sorted ascending");
  }
  for (std::size_t i = 0; i < spec.form_factors.size(); ++i) {
    const FormFactor& f = spec.form_factors[i];
    std::string tag = "form factor " + std::to_string(i) + ": ";
    if (f.half_power < 1) fail(tag + "half_power must be a positive integer");
    if (f.half_power % 2 != spec.form_factors[0].half_power % 2) fail(tag + "mixed parity of half_power");
    Polynomial num(f.numerator), den(f.denominator);
    if (den.is_zero()) {
      fail(tag + "zero denominator");
      continue;
    }
    if (num.is_zero()) {
      fail(tag + "zero numerator");
      continue;
    }
    if (std::abs(num[0]) <= tol.trim * num.max_abs()) fail(tag + "q(0) = 0; fold zeros at the origin into half_power");
    if (f.half_power + 2 * num.degree() + 2 > 2 * den.degree()) fail(tag + "|v|^2 is not integrable at infinity");
    if (den.degree() >= 1) {
      for (const Root& r : poly_roots(den, tol)) {
        if (distance_to_halfline(r.value) <= tol.axis) fail(tag + "pole on the half-line");
        if (r.multiplicity > kMaxPoleOrder) fail(tag + "pole order above 4");
      }
    }
  }
  return rep;
}

void require_valid(const ModelSpec& spec, const Tolerances& tol) {
  ValidationReport rep = validate_model(spec, tol);
  if (rep.ok) return;
  for (const auto& m : rep.messages)
    if (m.find("mixed parity") != std::string::npos) throw Error(ErrorKind::NonRationalProduct, m);
  throw Error(ErrorKind::Validation, rep.messages.front());
}

GammaMatrix::GammaMatrix(std::vector<RationalFunction> entries, int n) : n_(n), e_(std::move(entries)) {}

Mat GammaMatrix::eval(cplx z) const {
  Mat g(n_, n_);
  for (int m = 0; m < n_; ++m)
    for (int n = 0; n < n_; ++n) g(m, n) = (*this)(m, n)(z);
  return g;
}

Mat GammaMatrix::eval(double w) const {
  Mat g(n_, n_);
  for (int m = 0; m < n_; ++m) {
    g(m, m) = std::real((*this)(m, m)(w));
    for (int n = m + 1; n < n_; ++n) {
      g(m, n) = (*this)(m, n)(w);
      g(n, m) = std::conj(g(m, n));
    }
  }
  return g;
}

namespace {

RationalFunction reduced_product(const FormFactor& fm, const FormFactor& fn, const Tolerances& tol) {
  int k = (fm.half_power + fn.half_power) / 2;
  Polynomial core = Polynomial(fm.numerator).conj() * Polynomial(fn.numerator);
  Polynomial den = Polynomial(fm.denominator).conj() * Polynomial(fn.denominator);
  Polynomial wk = Polynomial::monomial(k);
  if (core.degree() < 1 || den.degree() < 1) return RationalFunction(wk * core, den);

  std::vector<Root> nr = poly_roots(core, tol), dr = poly_roots(den, tol);
  bool cancelled = false;
  for (Root& a : nr)
    for (Root& b : dr) {
      if (a.multiplicity == 0 || b.multiplicity == 0) continue;
      if (std::abs(a.value - b.value) < tol.cluster * std::max(1.0, std::abs(b.value))) {
        int c = std::min(a.multiplicity, b.multiplicity);
        a.multiplicity -= c;
        b.multiplicity -= c;
        cancelled = true;
      }
    }
  if (!cancelled) return RationalFunction(wk * core, den);
  return RationalFunction(wk * rebuild_from_roots(nr, core.leading()), rebuild_from_roots(dr, den.leading()));
}

}  // namespace

GammaMatrix build_gamma(const ModelSpec& spec, const Tolerances& tol) {
  require_valid(spec, tol);
  int n = spec.size();
  std::vector<RationalFunction> e;
  e.reserve(n * n);
  for (int m = 0; m < n; ++m)
    for (int j = 0; j < n; ++j) e.push_back(reduced_product(spec.form_factors[m], spec.form_factors[j], tol));
  return GammaMatrix(std::move(e), n);
}

Mat gamma_coefficient(const GammaMatrix& g, int k, const Tolerances& tol) {
  int n = g.size();
  Mat c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = rat_series_at_zero(g(i, j), k, tol)[k];
  return c;
}

GammaExpansion gamma_small_expansion(const GammaMatrix& g, int depth, const Tolerances& tol) {
  int n = g.size();
  const int max_order = 24 + depth;
  std::vector<std::vector<cplx>> s(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s[i * n + j] = rat_series_at_zero(g(i, j), max_order, tol);
  auto coeff = [&](int k) {
    Mat c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = s[i * n + j][k];
    return c;
  };
  GammaExpansion ex;
  ex.n_b = -1;
  for (int k = 0; k <= max_order - depth; ++k)
    if (coeff(k).norm() > tol.series) {
      ex.n_b = k;
      break;
    }
  if (ex.n_b < 0) throw Error(ErrorKind::InconclusiveOrder, "all Gamma series coefficients vanish");
  for (int k = ex.n_b; k <= ex.n_b + depth; ++k) ex.coeffs.push_back(coeff(k));
  return ex;
}

ModelSpec model_a(double lambda, double level) {
  ModelSpec s;
  s.levels = {level};
  s.coupling = lambda;
  s.form_factors = {FormFactor{1, {1.0}, {1.0, 0.0, 1.0}}};
  return s;
}

ModelSpec model_b(double lambda, double level) {
  ModelSpec s;
  s.levels = {level};
  s.coupling = lambda;
  s.form_factors = {FormFactor{2, {1.0}, {1.0, 0.0, 1.0}}};
  return s;
}

}  // namespace friedrichs
