#pragma once

#include <vector>

#include "mgn/numbers.hpp"
#include "mgn/rational.hpp"

namespace mgn {

/// Truncated bivariate series: polynomial in x (degrees 0..xmax) and Laurent in
/// hbar (degrees hmin..hmax, hmin typically -1). Coefficients outside the window
/// are discarded; binary operations intersect the operands' windows. All
/// coefficients are exact rationals.
class BiSeries {
 public:
  BiSeries(int xmax, int hmin, int hmax);

  static BiSeries constant(const Rational& c, int xmax, int hmin, int hmax);
  /// The monomial x^1.
  static BiSeries var_x(int xmax, int hmin, int hmax);

  int xmax() const { return xmax_; }
  int hmin() const { return hmin_; }
  int hmax() const { return hmax_; }

  /// Coefficient of x^i hbar^j; zero outside the window.
  const Rational& coeff(int i, int j) const;
  /// Mutable access; (i, j) must lie inside the window.
  void set(int i, int j, const Rational& v);
  void add_to(int i, int j, const Rational& v);

  bool is_zero() const;
  bool in_window(int i, int j) const {
    return i >= 0 && i <= xmax_ && j >= hmin_ && j <= hmax_;
  }

  /// Copy restricted to a (sub)window.
  BiSeries restricted(int xmax, int hmin, int hmax) const;

  BiSeries operator-() const;
  friend BiSeries operator+(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator-(const BiSeries& a, const BiSeries& b);
  friend BiSeries operator*(const BiSeries& a, const BiSeries& b);
  BiSeries& operator+=(const BiSeries& o) { *this = *this + o; return *this; }
  BiSeries& operator-=(const BiSeries& o) { *this = *this - o; return *this; }
  BiSeries& operator*=(const BiSeries& o) { *this = *this * o; return *this; }

  BiSeries scaled(const Rational& c) const;
  /// Multiply by the monomial x^dx hbar^dh. Terms shifted outside the window are
  /// discarded (the caller widens the window first when that matters).
  BiSeries shifted(int dx, int dh) const;
  BiSeries pow(int e) const;

  /// Multiplicative inverse; requires coeff(0,0) != 0 and no x^0 terms with
  /// negative hbar power.
  BiSeries inverse() const;

 private:
  int xmax_, hmin_, hmax_;
  std::vector<Rational> c_;

  int idx(int i, int j) const { return i * (hmax_ - hmin_ + 1) + (j - hmin_); }
};

/// exp of a series. The argument may not contain x^0 hbar^{j<=0} terms (those
/// would make the exponential fail to terminate in the truncated ring).
BiSeries exp_series(const BiSeries& s);

/// log of a series with constant term 1 (invalid-argument otherwise).
BiSeries log_series(const BiSeries& s);

/// Truncated univariate series/polynomial, used for the single-variable
/// generating polynomials composed at bivariate arguments.
using Polynomial = std::vector<Rational>;  // p[i] = coefficient of y^i

Polynomial poly_derivative(const Polynomial& p);

/// Horner evaluation p(s) for s with zero constant term.
BiSeries poly_compose(const Polynomial& p, const BiSeries& s);

/// Polynomial in an auxiliary Gaussian variable w with BiSeries coefficients;
/// index = power of w.
using WPoly = std::vector<BiSeries>;

WPoly wpoly_mul(const WPoly& a, const WPoly& b, int wmax);
/// exp of u in the w-truncated ring; u's w^0 part must satisfy the exp_series
/// precondition.
WPoly wpoly_exp(const WPoly& u, int wmax);

/// Formal Gaussian expectation with the given variance series: w^t contributes
/// (t-1)!! * variance^{t/2} for even t; odd powers vanish by parity.
BiSeries gaussian_moments(const WPoly& f, const BiSeries& variance);

/// <exp(sum of exponent terms)> under the centered Gaussian with the given
/// variance: the one-variable Wick expectation.
BiSeries wick_single(const WPoly& exponent, const BiSeries& variance, int wmax);

/// Solves ybar = x + sum_g omega_prime[g](ybar) hbar^g in the (xmax, 0..hmax)
/// window by fixed-point iteration; omega_prime[g] is the y-series of the g-th
/// coefficient. Aborts with consistency_error if the residual does not vanish.
BiSeries solve_fixed_point(const std::vector<Polynomial>& omega_prime, int xmax, int hmax);

/// Row extraction: the x-coefficients of hbar^j as a Polynomial.
Polynomial hbar_row(const BiSeries& s, int j);

}  // namespace mgn
