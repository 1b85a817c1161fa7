#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mgn/biseries.hpp"
#include "mgn/chi.hpp"
#include "mgn/weighted_series.hpp"

using namespace mgn;

namespace {

// Random series obeying the grading the engine's series carry: no x^0 terms at
// hbar^{<=0}, and the hbar^{-1} row supported on x^3 and above (so that within
// the x-window no product can cross the Laurent floor).
BiSeries random_series(std::mt19937& rng, int xmax, int hmin, int hmax, bool zero_const) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  BiSeries s(xmax, hmin, hmax);
  for (int i = 0; i <= xmax; ++i)
    for (int j = hmin; j <= hmax; ++j) {
      if (zero_const && i == 0 && j <= 0) continue;
      if (zero_const && j < 0 && i + 3 * j < 0) continue;
      s.set(i, j, Rational(num(rng), den(rng)));
    }
  return s;
}

}  // namespace

TEST_CASE("ring ops") {
  BiSeries one = BiSeries::constant(Rational(1), 4, -1, 2);
  BiSeries x = BiSeries::var_x(4, -1, 2);
  BiSeries prod = (one + x) * (one - x);
  CHECK(prod.coeff(0, 0) == Rational(1));
  CHECK(prod.coeff(1, 0) == Rational(0));
  CHECK(prod.coeff(2, 0) == Rational(-1));

  // x * hbar^{-1} squared leaves the floor-(-1) window
  BiSeries xh = x.shifted(0, -1);
  CHECK((xh * xh).is_zero());

  // convolution oracle on the hbar^0 row
  std::mt19937 rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    BiSeries a = random_series(rng, 6, 0, 0, false);
    BiSeries b = random_series(rng, 6, 0, 0, false);
    BiSeries c = a * b;
    for (int k = 0; k <= 6; ++k) {
      Rational expect(0);
      for (int i = 0; i <= k; ++i) expect += a.coeff(i, 0) * b.coeff(k - i, 0);
      REQUIRE(c.coeff(k, 0) == expect);
    }
  }
}

TEST_CASE("exp/log inverse pair") {
  CHECK(exp_series(BiSeries(5, -1, 3)).coeff(0, 0) == Rational(1));
  CHECK(log_series(BiSeries::constant(Rational(1), 5, -1, 3)).is_zero());
  CHECK_THROWS_AS(log_series(BiSeries::constant(Rational(2), 5, -1, 3)), std::invalid_argument);

  BiSeries ex = exp_series(BiSeries::var_x(8, 0, 0));
  for (int i = 0; i <= 8; ++i) CHECK(ex.coeff(i, 0) == Rational(1) / Rational(factorial(i)));

  std::mt19937 rng(11);
  for (int rep = 0; rep < 100; ++rep) {
    BiSeries s = random_series(rng, 5, -1, 3, true);
    CHECK((log_series(exp_series(s)) - s).is_zero());
  }
}

TEST_CASE("truncation monotonicity") {
  std::mt19937 rng(23);
  BiSeries small = random_series(rng, 4, 0, 2, true);
  BiSeries big = small.restricted(7, 0, 4);
  BiSeries es = exp_series(small);
  BiSeries eb = exp_series(big);
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 2; ++j) REQUIRE(es.coeff(i, j) == eb.coeff(i, j));
}

TEST_CASE("gaussian moments of a single variable") {
  // <w^4> = 3 hbar^2, <w^3> = 0, <w^6> = 15 hbar^3
  BiSeries hbar = BiSeries::constant(Rational(1), 2, 0, 4).shifted(0, 1);
  WPoly f;
  for (int t = 0; t <= 6; ++t) f.push_back(BiSeries(2, 0, 4));
  f[4] = BiSeries::constant(Rational(1), 2, 0, 4);
  BiSeries m4 = gaussian_moments(f, hbar);
  CHECK(m4.coeff(0, 2) == Rational(3));
  f[4] = BiSeries(2, 0, 4);
  f[3] = BiSeries::constant(Rational(1), 2, 0, 4);
  CHECK(gaussian_moments(f, hbar).is_zero());
  f[3] = BiSeries(2, 0, 4);
  f[6] = BiSeries::constant(Rational(1), 2, 0, 4);
  CHECK(gaussian_moments(f, hbar).coeff(0, 3) == Rational(15));
}

TEST_CASE("wick_single factorizes like pairings") {
  // <w^a> <w^b> independence against direct pairing counts for a+b <= 12:
  // moments of monomials match (t-1)!! hbar^{t/2} exactly
  BiSeries hbar = BiSeries::constant(Rational(1), 0, 0, 6).shifted(0, 1);
  for (int a = 0; a <= 12; a += 2)
    for (int b = 0; a + b <= 12; b += 2) {
      WPoly f;
      for (int t = 0; t <= a + b; ++t) f.push_back(BiSeries(0, 0, 6));
      f[a + b] = BiSeries::constant(Rational(1), 0, 0, 6);
      BiSeries m = gaussian_moments(f, hbar);
      if ((a + b) / 2 <= 6)
        REQUIRE(m.coeff(0, (a + b) / 2) == Rational(odd_double_factorial(a + b)));
    }
}

TEST_CASE("fixed point solution matches the known series") {
  BiSeries ybar = ybar_series(10, 4);
  Polynomial y0 = hbar_row(ybar, 0);
  // 1, 1/2, 1/3, 7/24, 17/60, 71/240, 163/504 from x^1
  CHECK(y0[1] == Rational(1));
  CHECK(y0[2] == Rational(1, 2));
  CHECK(y0[3] == Rational(1, 3));
  CHECK(y0[4] == Rational(7, 24));
  CHECK(y0[5] == Rational(17, 60));
  CHECK(y0[6] == Rational(71, 240));
  CHECK(y0[7] == Rational(163, 504));

  // (1+y0) log(1+y0) = 2 y0 - x
  int deg = 10;
  BiSeries y0s(deg, 0, 0);
  for (size_t i = 0; i < y0.size(); ++i) y0s.set((int)i, 0, y0[i]);
  BiSeries one = BiSeries::constant(Rational(1), deg, 0, 0);
  BiSeries lhs = (one + y0s) * log_series(one + y0s);
  BiSeries rhs = y0s.scaled(Rational(2)) - BiSeries::var_x(deg, 0, 0);
  CHECK((lhs - rhs).is_zero());
}

TEST_CASE("fixed point residual vanishes across windows") {
  for (int xmax = 4; xmax <= 12; xmax += 4)
    for (int hmax = 0; hmax <= 6; hmax += 3) CHECK_NOTHROW(ybar_series(xmax, hmax));
  // truncation monotonicity of the solution
  BiSeries a = ybar_series(6, 2);
  BiSeries b = ybar_series(12, 6);
  for (int i = 0; i <= 6; ++i)
    for (int j = 0; j <= 2; ++j) REQUIRE(a.coeff(i, j) == b.coeff(i, j));
}

TEST_CASE("weighted series ring, exp/log and moments") {
  WeightedSeries a(0, 8, 4);
  a.add_term(WMonomial{1, 1, {{1, 2}}}, Rational(1, 2));
  a.add_term(WMonomial{2, 0, {{2, 1}}}, Rational(3));
  WeightedSeries b = a * a;
  CHECK(b.coeff(WMonomial{2, 2, {{1, 4}}}) == Rational(1, 4));
  CHECK(b.coeff(WMonomial{3, 1, {{1, 2}, {2, 1}}}) == Rational(3));
  CHECK(b.coeff(WMonomial{4, 0, {{2, 2}}}) == Rational(9));

  // exp/log round trip
  WeightedSeries e = exp_weighted(a);
  WeightedSeries l = log_weighted(e);
  CHECK((l - a).is_zero());

  // <x_2^2> = 2, <x_1^4> = 3, <x_3 x_5> = 0
  WeightedSeries s(0, 4, 0);
  s.add_term(WMonomial{0, 0, {{2, 2}}}, Rational(1));
  CHECK(wick_multi(s).coeff(0, 0) == Rational(2));
  WeightedSeries s2(0, 4, 0);
  s2.add_term(WMonomial{0, 0, {{1, 4}}}, Rational(1));
  CHECK(wick_multi(s2).coeff(0, 0) == Rational(3));
  WeightedSeries s3(0, 4, 0);
  s3.add_term(WMonomial{0, 0, {{3, 1}, {5, 1}}}, Rational(1));
  CHECK(wick_multi(s3).is_zero());

  // slot-by-slot integration agrees with the all-at-once moment map
  WeightedSeries mixed(0, 8, 2);
  mixed.add_term(WMonomial{2, 1, {{1, 2}, {3, 2}}}, Rational(5, 7));
  mixed.add_term(WMonomial{3, 0, {{2, 4}}}, Rational(-2));
  mixed.add_term(WMonomial{1, 1, {{1, 1}}}, Rational(9));
  WeightedSeries once = wick_multi(mixed);
  WeightedSeries steps = wick_slot(wick_slot(wick_slot(mixed, 3), 2), 1);
  CHECK((once - steps).is_zero());
}
