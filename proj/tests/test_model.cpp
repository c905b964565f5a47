#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "friedrichs/error.hpp"
#include "friedrichs/model.hpp"
#include "friedrichs/scenario.hpp"

using namespace friedrichs;

namespace {

ModelSpec two_level_odd() {
  ModelSpec s;
  s.levels = {1.0, 2.0};
  s.coupling = 0.3;
  s.form_factors = {FormFactor{1, {1.0}, {1.0, 0.0, 1.0}}, FormFactor{1, {1.0}, {4.0, 0.0, 1.0}}};
  return s;
}

}  // namespace

TEST_CASE("build_gamma on the canonical models") {
  GammaMatrix ga = build_gamma(model_a(0.3));
  for (double w : {0.1, 1.0, 3.0}) CHECK(std::abs(ga(0, 0)(w) - w / std::pow(w * w + 1, 2)) < 1e-15);
  GammaMatrix gb = build_gamma(model_b(0.3));
  for (double w : {0.1, 1.0, 3.0}) CHECK(std::abs(gb(0, 0)(w) - w * w / std::pow(w * w + 1, 2)) < 1e-15);

  GammaMatrix g2 = build_gamma(two_level_odd());
  CHECK(std::abs(g2(0, 1)(1.0) - 1.0 / (2.0 * 5.0)) < 1e-15);
  Eigen::SelfAdjointEigenSolver<Mat> es(g2.eval(1.0));
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-15);
  CHECK(es.eigenvalues()(1) > 0.0);
}

TEST_CASE("Gamma is Hermitian, PSD and rank one on the half-line") {
  ModelSpec s = two_level_odd();
  s.form_factors[1].numerator = {cplx(1.0, 0.5), cplx(0.2, -0.3)};
  s.form_factors[1].denominator = {cplx(4.0, 0.0), cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.5, 0.1)};
  GammaMatrix g = build_gamma(s);
  for (int i = 0; i < 50; ++i) {
    double w = std::pow(10.0, -3.0 + 6.0 * i / 49.0);
    Mat m(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) m(a, b) = g(a, b)(w);
    CHECK((m - m.adjoint()).norm() <= 1e-14 * m.norm());
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    CHECK(es.eigenvalues()(0) >= -1e-14 * es.eigenvalues()(1));
    CHECK(std::abs(es.eigenvalues()(0)) <= 1e-10 * es.eigenvalues()(1));
  }
  CHECK(g.eval(1e6).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(g.eval(1e-12).cwiseAbs().maxCoeff() <= 1e-10);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CHECK(std::abs(g(a, b).numerator()[0]) == 0.0);
      CHECK(g(a, b).numerator().degree() + 2 <= g(a, b).denominator().degree());
    }
}

TEST_CASE("small-omega expansion of Gamma") {
  auto ea = gamma_small_expansion(build_gamma(model_a(0.3)), 2);
  CHECK(ea.n_b == 1);
  CHECK(std::abs(ea.coeffs[0](0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(ea.coeffs[1](0, 0)) < 1e-14);
  CHECK(std::abs(ea.coeffs[2](0, 0) + 2.0) < 1e-14);

  auto eb = gamma_small_expansion(build_gamma(model_b(0.3)), 2);
  CHECK(eb.n_b == 2);
  CHECK(std::abs(eb.coeffs[0](0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(eb.coeffs[1](0, 0)) < 1e-14);
  CHECK(std::abs(eb.coeffs[2](0, 0) + 2.0) < 1e-14);

  auto e2 = gamma_small_expansion(build_gamma(two_level_odd()), 0);
  CHECK(e2.n_b == 1);
  Mat expect(2, 2);
  expect << 1.0, 0.25, 0.25, 1.0 / 16;
  CHECK((e2.coeffs[0] - expect).norm() < 1e-14);

  std::mt19937 rng(3);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 100; ++k) {
    Vec psi(2);
    psi << cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng));
    CHECK(psi.dot(e2.coeffs[0] * psi).real() >= -1e-14);
  }
}

TEST_CASE("validation rejects inadmissible models") {
  ModelSpec s = model_a(0.3);
  s.form_factors[0].denominator = {-1.0, 1.0};
  CHECK_FALSE(validate_model(s).ok);
  CHECK_THROWS_AS(build_gamma(s), Error);

  s = two_level_odd();
  s.form_factors[1].half_power = 2;
  try {
    build_gamma(s);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonRationalProduct);
  }

  s = model_a(0.3);
  s.form_factors[0].numerator = {0.0, 1.0};
  CHECK_FALSE(validate_model(s).ok);

  s = model_a(0.3);
  s.form_factors[0].denominator = {1.0, 1.0};
  CHECK_FALSE(validate_model(s).ok);

  s = two_level_odd();
  std::swap(s.levels[0], s.levels[1]);
  CHECK_FALSE(validate_model(s).ok);
  CHECK(validate_model(two_level_odd()).ok);
}

TEST_CASE("common factors cancel in Gamma entries") {
  ModelSpec s;
  s.levels = {1.0};
  s.coupling = 0.1;
  // q = (w + 2) / ((w + 2)(w^2 + 1)) is left unreduced on input
  s.form_factors = {FormFactor{1, {2.0, 1.0}, {2.0, 1.0, 2.0, 1.0}}};
  GammaMatrix g = build_gamma(s);
  CHECK(g(0, 0).denominator().degree() == 4);
  CHECK(std::abs(g(0, 0)(1.5) - 1.5 / std::pow(1.5 * 1.5 + 1, 2)) < 1e-13);
}

TEST_CASE("scenario round trip is bit-exact") {
  ModelSpec s = two_level_odd();
  s.coupling = 0.1 + 0.2;
  s.form_factors[0].numerator = {cplx(1.0 / 3.0, -2.0 / 7.0)};
  std::string text = dump_scenario(s);
  ModelSpec r = parse_scenario(text);
  CHECK(r.levels == s.levels);
  CHECK(r.coupling == s.coupling);
  for (int i = 0; i < 2; ++i) {
    CHECK(r.form_factors[i].half_power == s.form_factors[i].half_power);
    CHECK(r.form_factors[i].numerator == s.form_factors[i].numerator);
    CHECK(r.form_factors[i].denominator == s.form_factors[i].denominator);
  }
  CHECK(dump_scenario(r) == text);
}

TEST_CASE("malformed scenarios raise schema errors") {
  for (const char* bad : {"{", "[]", R"({"levels":[1],"coupling":0.1})",
                          R"({"levels":[1],"coupling":0.1,"form_factors":[{"half_power":1,"numerator":[1],"denominator":[[1,0]]}]})",
                          R"({"levels":["a"],"coupling":0.1,"form_factors":[]})"}) {
    try {
      parse_scenario(bad);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Schema);
      CHECK(exit_code(e.kind()) == 2);
    }
  }
}
