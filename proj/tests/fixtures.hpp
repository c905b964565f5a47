#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "friedrichs/model.hpp"
#include "friedrichs/selfenergy.hpp"

namespace fixtures {

using namespace friedrichs;

inline ModelSpec two_level_odd(double lambda = 0.3) {
  ModelSpec s;
  s.levels = {1.0, 2.0};
  s.coupling = lambda;
  s.form_factors = {FormFactor{1, {1.0}, {1.0, 0.0, 1.0}}, FormFactor{1, {1.0}, {4.0, 0.0, 1.0}}};
  return s;
}

// single-level admissible model, denominator of q of degree 2..3, poles kept away from the half-line
inline ModelSpec random_model(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int h = 1 + static_cast<int>(u(rng) * 2);
  int dq = 2 + static_cast<int>(u(rng) * 2);
  int maxnum = (2 * dq - h - 2) / 2;
  std::vector<cplx> poles;
  for (int k = 0; k < dq; ++k) {
    double r = 0.4 + 2.0 * u(rng);
    double th = 0.35 + (2 * kPi - 0.7) * u(rng);
    poles.push_back(std::polar(r, th));
  }
  Polynomial den = Polynomial::from_roots(poles);
  std::vector<cplx> num;
  int dn = maxnum < 0 ? 0 : static_cast<int>(u(rng) * (maxnum + 1));
  for (int k = 0; k <= dn; ++k) num.push_back(cplx(u(rng) + 0.2, u(rng) - 0.5));
  ModelSpec s;
  s.levels = {0.5 + u(rng)};
  s.coupling = 0.2;
  s.form_factors = {FormFactor{h, num, den.coefficients()}};
  return s;
}

// three levels with S(0) diagonal; levels 1 and 2 sit on the kernel of K(0), level 1 couples at order w, level 2
// only at order w^3, so M1 and M2 are both one-dimensional
inline ModelSpec third_kind_model(double lambda = 0.5) {
  std::vector<cplx> den4 = Polynomial::from_roots(std::vector<cplx>{-1.0, -2.0, -3.0, -4.0}).coefficients();
  auto make = [&](cplx b, cplx c, cplx d) {
    ModelSpec s;
    s.levels = {1.0, 2.0, 3.0};
    s.coupling = lambda;
    s.form_factors = {FormFactor{1, {1.0}, {2.0, 3.0, 1.0}}, FormFactor{3, {1.0, b}, den4},
                      FormFactor{1, {1.0, c, d}, den4}};
    return s;
  };
  auto s0 = [&](cplx b, cplx c, cplx d) { return SelfEnergyEvaluator(build_gamma(make(b, c, d))).s0(); };
  cplx f0 = s0(0.0, 0.0, 0.0)(0, 1), f1 = s0(1.0, 0.0, 0.0)(0, 1);
  cplx b = -f0 / (f1 - f0);
  Mat base = s0(b, 0.0, 0.0), dc = s0(b, 1.0, 0.0) - base, dd = s0(b, 0.0, 1.0) - base;
  Eigen::Matrix2cd m;
  m << dc(0, 2), dd(0, 2), dc(1, 2), dd(1, 2);
  Eigen::Vector2cd r(-base(0, 2), -base(1, 2));
  Eigen::Vector2cd cd = m.partialPivLu().solve(r);
  ModelSpec s = make(b.real(), cd(0).real(), cd(1).real());
  Mat z = SelfEnergyEvaluator(build_gamma(s)).s0();
  double l2 = lambda * lambda;
  double w1 = l2 * z(0, 0).real(), w2 = l2 * z(1, 1).real();
  double w3 = std::max(w1, w2) + 0.5;
  std::vector<std::pair<double, FormFactor>> lv{{w1, s.form_factors[0]}, {w2, s.form_factors[1]}, {w3, s.form_factors[2]}};
  std::sort(lv.begin(), lv.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  for (int i = 0; i < 3; ++i) {
    s.levels[i] = lv[i].first;
    s.form_factors[i] = lv[i].second;
  }
  return s;
}

}  // namespace fixtures
