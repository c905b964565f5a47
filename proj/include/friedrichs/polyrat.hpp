#pragma once

#include <span>
#include <vector>

#include "friedrichs/types.hpp"

namespace friedrichs {

struct Tolerances {
  double trim = 1e-12;
  double root = 1e-9;
  double cluster = 1e-7;
  double pf = 1e-8;
  double axis = 1e-6;
  double series = 1e-12;
};

const Tolerances& default_tolerances();

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs, double trim_rel = 1e-12);

  static Polynomial constant(cplx c);
  static Polynomial monomial(int k, cplx c = 1.0);
  static Polynomial from_roots(std::span<const cplx> roots, cplx lead = 1.0);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<cplx>& coefficients() const { return c_; }
  cplx operator[](int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : cplx(0.0); }
  cplx leading() const { return c_.empty() ? cplx(0.0) : c_.back(); }
  double max_abs() const;

  cplx operator()(cplx z) const;
  Polynomial derivative() const;
  Polynomial conj() const;
  Polynomial scaled(cplx s) const;
  // coefficients of x -> p(a + x)
  Polynomial shifted(cplx a) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

 private:
  std::vector<cplx> c_;
};

struct Root {
  cplx value;
  int multiplicity = 1;
};

std::vector<Root> poly_roots(const Polynomial& p, const Tolerances& tol = default_tolerances());
Polynomial rebuild_from_roots(std::span<const Root> roots, cplx lead);

class RationalFunction {
 public:
  RationalFunction() : den_(Polynomial::constant(1.0)) {}
  RationalFunction(Polynomial num, Polynomial den);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  cplx operator()(cplx z) const { return num_(z) / den_(z); }
  bool is_zero() const { return num_.is_zero(); }
  // numerator degree + 2 <= denominator degree
  bool integrable_tail() const;
  bool proper() const { return num_.degree() < den_.degree(); }

  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);

 private:
  Polynomial num_;
  Polynomial den_;
};

struct PoleTerm {
  cplx pole;
  int order = 1;
  std::vector<cplx> coeffs;  // c_1..c_m, coefficient of (z-a)^-j at index j-1
};

struct PoleDecomposition {
  std::vector<PoleTerm> terms;
  cplx residue_sum{0.0};

  cplx operator()(cplx z) const;
  int max_order() const;
};

inline constexpr int kMaxPoleOrder = 4;

PoleDecomposition partial_fractions(const RationalFunction& r, const Tolerances& tol = default_tolerances());
RationalFunction rat_conjugate(const RationalFunction& r);
cplx rat_eval(const RationalFunction& r, cplx z);
RationalFunction rat_derivative(const RationalFunction& r);
std::vector<cplx> rat_series_at_zero(const RationalFunction& r, int order,
                                     const Tolerances& tol = default_tolerances());
void validate_no_poles_on_halfline(const RationalFunction& r, const Tolerances& tol = default_tolerances());
double distance_to_halfline(cplx z);

// power series of a/b at 0 through x^order (b[0] != 0)
std::vector<cplx> series_divide(std::span<const cplx> a, std::span<const cplx> b, int order);

}  // namespace friedrichs
