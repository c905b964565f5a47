#include <doctest.h>

#include <cmath>
#include <random>

#include "friedrichs/error.hpp"
#include "friedrichs/polyrat.hpp"

using namespace friedrichs;

namespace {

Polynomial poly(std::initializer_list<cplx> c) { return Polynomial(std::vector<cplx>(c)); }

bool has_root(const std::vector<Root>& r, cplx z, int m, double tol = 1e-9) {
  for (const Root& x : r)
    if (std::abs(x.value - z) < tol && x.multiplicity == m) return true;
  return false;
}

}  // namespace

TEST_CASE("poly_roots on the documented examples") {
  auto r = poly_roots(poly({1.0, 0.0, 1.0}));
  CHECK(r.size() == 2);
  CHECK(has_root(r, kI, 1));
  CHECK(has_root(r, -kI, 1));

  r = poly_roots(poly({1.0, 2.0, 1.0}));
  REQUIRE(r.size() == 1);
  CHECK(has_root(r, -1.0, 2));

  r = poly_roots(poly({-6.0, 11.0, -6.0, 1.0}));
  CHECK(r.size() == 3);
  CHECK(has_root(r, 1.0, 1));
  CHECK(has_root(r, 2.0, 1));
  CHECK(has_root(r, 3.0, 1));

  CHECK_THROWS_AS(poly_roots(Polynomial()), Error);
}

TEST_CASE("higher multiplicities are merged") {
  cplx a(0.3, -1.2);
  std::vector<cplx> rts{a, a, a, a, cplx(-2.0, 0.5)};
  auto r = poly_roots(Polynomial::from_roots(rts));
  CHECK(r.size() == 2);
  CHECK(has_root(r, a, 4, 1e-8));

  std::vector<cplx> tri{kI, kI, kI, -kI, -kI, -kI};
  r = poly_roots(Polynomial::from_roots(tri));
  CHECK(r.size() == 2);
  CHECK(has_root(r, kI, 3, 1e-8));

  // nearby but distinct roots stay separate
  std::vector<cplx> close{1.0, 1.001, -3.0};
  r = poly_roots(Polynomial::from_roots(close));
  CHECK(r.size() == 3);
}

TEST_CASE("roots rebuild the monic polynomial") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    int deg = 1 + trial % 8;
    std::vector<cplx> c(deg + 1);
    for (auto& x : c) x = cplx(u(rng), u(rng));
    Polynomial p(c);
    Polynomial monic = p.scaled(1.0 / p.leading());
    Polynomial rebuilt = rebuild_from_roots(poly_roots(p), 1.0);
    double err = 0.0;
    for (int k = 0; k <= deg; ++k) err = std::max(err, std::abs(rebuilt[k] - monic[k]));
    CHECK(err < 1e-10 * monic.max_abs());
  }
}

TEST_CASE("polynomial arithmetic and shift") {
  Polynomial p = poly({1.0, 2.0, 3.0});
  Polynomial s = p.shifted(0.5);
  for (double x : {-1.0, 0.0, 0.7, 2.0}) CHECK(std::abs(s(x) - p(0.5 + x)) < 1e-13);
  Polynomial q = p * poly({-1.0, 1.0});
  CHECK(q.degree() == 3);
  CHECK(std::abs(q(2.0) - p(2.0) * 1.0) < 1e-13);
  CHECK(std::abs(p.derivative()(1.0) - 8.0) < 1e-14);
  CHECK(poly({1.0, 2.0, 1e-20}).degree() == 1);
}

TEST_CASE("partial fractions on the documented examples") {
  auto pd = partial_fractions(RationalFunction(poly({1.0}), poly({2.0, 3.0, 1.0})));
  REQUIRE(pd.terms.size() == 2);
  for (const auto& t : pd.terms) {
    if (std::abs(t.pole + 1.0) < 1e-12) CHECK(std::abs(t.coeffs[0] - 1.0) < 1e-12);
    else CHECK(std::abs(t.coeffs[0] + 1.0) < 1e-12);
  }

  pd = partial_fractions(RationalFunction(poly({1.0}), poly({1.0, 0.0, 2.0, 0.0, 1.0})));
  REQUIRE(pd.terms.size() == 2);
  for (const auto& t : pd.terms) {
    REQUIRE(t.order == 2);
    // residue at +i is -i/4
    cplx s = t.pole.imag() > 0 ? -kI : kI;
    CHECK(std::abs(t.coeffs[0] - s / 4.0) < 1e-10);
    CHECK(std::abs(t.coeffs[1] + 0.25) < 1e-10);
  }

  pd = partial_fractions(RationalFunction(poly({0.0, 1.0}), poly({1.0, 0.0, 1.0})));
  for (const auto& t : pd.terms) CHECK(std::abs(t.coeffs[0] - 0.5) < 1e-12);

  CHECK_THROWS_AS(partial_fractions(RationalFunction(poly({1.0, 0.0, 1.0}), poly({1.0, 1.0}))), Error);
}

TEST_CASE("partial fractions re-sum and residue sum vanishes for integrable tails") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    int dd = 2 + trial % 5;
    std::vector<cplx> poles;
    for (int k = 0; k < dd; ++k) poles.push_back(cplx(u(rng) - 0.5, 0.3 + std::abs(u(rng))) * (k % 2 ? 1.0 : -1.0));
    if (trial % 3 == 0) poles.back() = poles.front();
    Polynomial den = Polynomial::from_roots(poles);
    std::vector<cplx> nc(dd - 1);
    for (auto& x : nc) x = cplx(u(rng), u(rng));
    RationalFunction r(Polynomial(nc), den);
    auto pd = partial_fractions(r);
    for (int i = 0; i < 20; ++i) {
      double w = 0.05 + 0.5 * i;
      CHECK(std::abs(pd(w) - r(w)) <= 1e-8 * std::max(1.0, std::abs(r(w))));
    }
    if (r.integrable_tail()) CHECK(std::abs(pd.residue_sum) < 1e-8);
  }
}

TEST_CASE("conjugation") {
  RationalFunction r(poly({0.0, cplx(1, 1)}), poly({2.0, 1.0}));
  RationalFunction c = rat_conjugate(r);
  CHECK(c.numerator()[1] == cplx(1, -1));
  RationalFunction s(poly({kI}), poly({-kI, 1.0}));
  CHECK(std::abs(rat_conjugate(s)(1.0) - std::conj(s(1.0))) < 1e-15);
  CHECK(std::abs(rat_conjugate(s)(1.0) - (-kI / (1.0 + kI))) < 1e-15);
}

TEST_CASE("series at zero") {
  auto c = rat_series_at_zero(RationalFunction(poly({0.0, 1.0}), poly({1.0, 0.0, 2.0, 0.0, 1.0})), 5);
  CHECK(std::abs(c[0]) < 1e-15);
  CHECK(std::abs(c[1] - 1.0) < 1e-15);
  CHECK(std::abs(c[2]) < 1e-15);
  CHECK(std::abs(c[3] + 2.0) < 1e-15);
  CHECK(std::abs(c[5] - 3.0) < 1e-14);
  c = rat_series_at_zero(RationalFunction(poly({1.0}), poly({1.0, -1.0})), 4);
  for (cplx x : c) CHECK(std::abs(x - 1.0) < 1e-15);
  c = rat_series_at_zero(RationalFunction(poly({5.0}), poly({1.0})), 3);
  CHECK(c[0] == cplx(5.0));
  CHECK(c[3] == cplx(0.0));
  CHECK_THROWS_AS(rat_series_at_zero(RationalFunction(poly({1.0}), poly({0.0, 1.0})), 2), Error);
}

TEST_CASE("series truncation error scales with the order") {
  RationalFunction r(poly({1.0, 0.3}), poly({2.0, 1.0, 1.0}));
  for (int order : {1, 2}) {
    auto c = rat_series_at_zero(r, order);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (double lw = std::log(1e-4); lw <= std::log(1e-2) + 1e-12; lw += std::log(10.0) / 4) {
      double w = std::exp(lw);
      cplx partial = 0.0;
      for (int k = order; k >= 0; --k) partial = partial * w + c[k];
      double y = std::log(std::abs(r(w) - partial));
      sx += lw, sy += y, sxx += lw * lw, sxy += lw * y, ++n;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(std::abs(slope - (order + 1)) < 0.1);
  }
}

TEST_CASE("half-line pole validation") {
  CHECK_THROWS_AS(validate_no_poles_on_halfline(RationalFunction(poly({1.0}), poly({-1.0, 1.0}))), Error);
  CHECK_NOTHROW(validate_no_poles_on_halfline(RationalFunction(poly({1.0}), poly({1.0, 1.0}))));
  CHECK_NOTHROW(validate_no_poles_on_halfline(RationalFunction(poly({1.0}), poly({1.0, 0.0, 1.0}))));
}
