#pragma once

#include <map>
#include <utility>
#include <vector>

#include "mgn/numbers.hpp"
#include "mgn/rational.hpp"

namespace mgn {

/// Exponent vector over the auxiliary Gaussian slots x_r, stored sparsely as
/// (slot index, exponent) pairs sorted by slot index.
using SlotVec = std::vector<std::pair<int, int>>;

SlotVec slotvec_merge(const SlotVec& a, const SlotVec& b);

struct WMonomial {
  int lam = 0;  // lambda degree
  int y = 0;    // y degree
  SlotVec slots;

  friend bool operator<(const WMonomial& a, const WMonomial& b) {
    if (a.lam != b.lam) return a.lam < b.lam;
    if (a.y != b.y) return a.y < b.y;
    return a.slots < b.slots;
  }
  friend bool operator==(const WMonomial& a, const WMonomial& b) {
    return a.lam == b.lam && a.y == b.y && a.slots == b.slots;
  }
};

/// Sparse truncated series in lambda, y and the Gaussian slot variables.
/// Monomials with lambda degree outside [lmin, lmax] or y degree above ymax are
/// discarded on insertion.
class WeightedSeries {
 public:
  WeightedSeries(int lmin, int lmax, int ymax) : lmin_(lmin), lmax_(lmax), ymax_(ymax) {}

  static WeightedSeries one(int lmin, int lmax, int ymax);

  int lmin() const { return lmin_; }
  int lmax() const { return lmax_; }
  int ymax() const { return ymax_; }

  void add_term(const WMonomial& m, const Rational& c);
  Rational coeff(const WMonomial& m) const;
  Rational coeff(int lam, int y) const { return coeff(WMonomial{lam, y, {}}); }

  const std::map<WMonomial, Rational>& terms() const { return t_; }
  size_t size() const { return t_.size(); }
  bool is_zero() const { return t_.empty(); }

  /// Smallest lambda degree among the stored terms (lmax+1 when empty).
  int min_lambda_degree() const;
  bool has_slots() const;

  WeightedSeries operator-() const;
  friend WeightedSeries operator+(const WeightedSeries& a, const WeightedSeries& b);
  friend WeightedSeries operator-(const WeightedSeries& a, const WeightedSeries& b);
  friend WeightedSeries operator*(const WeightedSeries& a, const WeightedSeries& b);
  WeightedSeries& operator+=(const WeightedSeries& o);
  WeightedSeries& operator*=(const WeightedSeries& o) { *this = *this * o; return *this; }

  WeightedSeries scaled(const Rational& c) const;

 private:
  int lmin_, lmax_, ymax_;
  std::map<WMonomial, Rational> t_;
};

/// exp of a series all of whose terms have lambda degree >= 1 (which makes the
/// exponential terminate within the window).
WeightedSeries exp_weighted(const WeightedSeries& s);

/// log of a series with constant term 1 and all other terms of lambda degree >= 1.
WeightedSeries log_weighted(const WeightedSeries& s);

/// Formal Gaussian expectation over the slots, with covariance <x_r x_r> = r:
/// each x_r^e factor becomes (e-1)!! r^{e/2} for even e and kills the monomial
/// for odd e. The result carries no slots.
WeightedSeries wick_multi(const WeightedSeries& s);

/// Expectation over a single slot r only (used to integrate slots out one at a
/// time without materializing the full expansion).
WeightedSeries wick_slot(const WeightedSeries& s, int r);

}  // namespace mgn
