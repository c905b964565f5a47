#include "friedrichs/asymptotics.hpp"

#include <cmath>

#include "friedrichs/error.hpp"
#include "friedrichs/linalg.hpp"

namespace friedrichs {

AsymptoteModel asymptote_model(const ResolventEvaluator& ev, const ZeroEnergyClassification& c) {
  AsymptoteModel m;
  m.kind = c.kind;
  m.lambda = ev.spec().coupling;
  const auto& se = ev.self_energy();
  m.n_b = gamma_small_expansion(se.gamma(), 0, se.tolerances()).n_b;
  if (c.kind == ZeroKind::Regular) {
    if (m.lambda != 0.0) m.n_a = a_series(se, m.lambda, 6).n_a;
    bool ok = (m.n_b == 1 && m.n_a >= 1) || (m.n_b >= 2 && m.n_a == 1);
    if (!ok) throw Error(ErrorKind::Numerical, "exponents n_a, n_b outside the admissible combinations");
    Mat kinv = ev.k_zero().inverse();
    for (int j = 0; j < 3; ++j) m.coefficients.push_back(kinv * gamma_coefficient(se.gamma(), m.n_b + j) * kinv);
  } else if (c.kind == ZeroKind::First) {
    if (m.n_b != 1) throw Error(ErrorKind::Numerical, "a first-kind point needs n_b = 1");
    m.first = inverse_on_subspace(c.gamma1, c.m1);
  } else {
    throw Error(ErrorKind::ClassificationMismatch,
                std::string("no long-time asymptote for a ") + to_string(c.kind) + " zero-energy point");
  }
  return m;
}

Mat theorem1_asymptote(const AsymptoteModel& m, double t) {
  if (m.kind != ZeroKind::Regular) throw Error(ErrorKind::ClassificationMismatch, "theorem 1 needs a regular point");
  if (!(t > 0.0)) throw Error(ErrorKind::Domain, "t must be positive");
  cplx it(0.0, t);
  Mat out = Mat::Zero(m.coefficients[0].rows(), m.coefficients[0].cols());
  for (int j = 0; j < 3; ++j) {
    int k = m.n_b + j;
    out += std::tgamma(1.0 + k) / std::pow(it, k + 1) * m.coefficients[j];
  }
  return m.lambda * m.lambda * out;
}

Mat theorem2_asymptote(const AsymptoteModel& m, double t) {
  if (m.kind != ZeroKind::First) throw Error(ErrorKind::ClassificationMismatch, "theorem 2 needs a first-kind point");
  if (!(t > std::exp(1.0))) throw Error(ErrorKind::Domain, "theorem 2 needs log t > 1");
  return m.first / (m.lambda * m.lambda * std::log(t));
}

double gamma_derivative_at_one(int k) {
  if (k < 0 || k > 6) throw Error(ErrorKind::Domain, "derivative order must lie in [0, 6]");
  // log Gamma(1+x) = -gamma x + sum_{n>=2} (-1)^n zeta(n) x^n / n; exponentiate the series
  double a[7] = {0.0, -kEulerGamma};
  for (int n = 2; n <= 6; ++n) a[n] = (n % 2 ? -1.0 : 1.0) * std::riemann_zeta(static_cast<double>(n)) / n;
  double b[7] = {1.0};
  for (int n = 1; n <= k; ++n) {
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += j * a[j] * b[n - j];
    b[n] = s / n;
  }
  return std::tgamma(k + 1.0) * b[k];
}

cplx log_fourier_term(double t, int q, int j) {
  if (q < 2) throw Error(ErrorKind::Domain, "q must be at least 2");
  if (!(t > std::exp(1.0))) throw Error(ErrorKind::Domain, "the series needs log t > 1");
  if (j < 0 || j > 5) throw Error(ErrorKind::Domain, "term index must lie in [0, 5]");
  cplx d = 0.0;
  cplx shift(0.0, -kPi / 2.0);
  for (int k = 0; k <= j; ++k) {
    double binom = std::tgamma(j + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(j - k + 1.0));
    d += binom * gamma_derivative_at_one(k) * std::pow(shift, j - k);
  }
  double outer = std::tgamma(q + j - 1.0) / (std::tgamma(j + 1.0) * std::tgamma(q - 1.0));
  double sign = q % 2 ? -1.0 : 1.0;
  return sign / (q - 1.0) * outer * std::pow(std::log(t), 1.0 - q - j) * d;
}

cplx log_fourier_series(double t, int q, int terms) {
  if (terms < 1 || terms > 6) throw Error(ErrorKind::Domain, "number of terms must lie in [1, 6]");
  cplx s = 0.0;
  for (int j = 0; j < terms; ++j) s += log_fourier_term(t, q, j);
  return s;
}

OrderProbe remainder_order_probe(const std::function<Mat(double)>& quantity,
                                 const std::function<Mat(double)>& expansion, const std::vector<double>& grid,
                                 double expected, double log_power, double tol) {
  if (grid.size() < 3) throw Error(ErrorKind::InvalidInput, "probe grid needs at least three points");
  double lo = grid.front(), hi = grid.front();
  for (double w : grid) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "probe grid must be positive");
    lo = std::min(lo, w), hi = std::max(hi, w);
  }
  if (hi / lo < 999.0) throw Error(ErrorKind::InvalidInput, "probe grid must span three decades");
  OrderProbe r;
  r.expected = expected;
  r.grid = grid;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (double w : grid) {
    double d = (quantity(w) - expansion(w)).norm();
    if (log_power != 0.0) d /= std::pow(std::abs(std::log(w)), log_power);
    r.diffs.push_back(d);
    if (d == 0.0) continue;
    double lx = std::log(w), ly = std::log(d);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++n;
  }
  if (n == 0) {
    r.exact = true;
    r.pass = true;
    r.slope = expected;
    return r;
  }
  if (n < 3) throw Error(ErrorKind::InconclusiveOrder, "too few nonzero differences to fit a slope");
  r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  r.pass = std::abs(r.slope - expected) <= tol;
  return r;
}

}  // namespace friedrichs
