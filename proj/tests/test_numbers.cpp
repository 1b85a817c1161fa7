#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <numeric>

#include "mgn/numbers.hpp"
#include "mgn/stable_graph.hpp"

using namespace mgn;

namespace {

// Independent Bernoulli oracle: Worpitzky double sum
// B_m = sum_{k=0}^{m} 1/(k+1) sum_{j=0}^{k} (-1)^j C(k,j) j^m  (with 0^0 = 1).
Rational bernoulli_oracle(int m) {
  Rational acc(0);
  for (int k = 0; k <= m; ++k) {
    Rational inner(0);
    for (int j = 0; j <= k; ++j) {
      Integer jm(1);
      for (int e = 0; e < m; ++e) jm *= j;
      Rational term = Rational(binomial(k, j)) * Rational(jm);
      inner += (j % 2 == 0) ? term : -term;
    }
    acc += inner / Rational(k + 1);
  }
  return acc;
}

long phi_brute(long n) {
  long c = 0;
  for (long r = 1; r <= n; ++r)
    if (std::gcd(r, n) == 1) ++c;
  return c;
}

int moebius_brute(long n) {
  for (long p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return 0;
  int primes = 0;
  long m = n;
  for (long p = 2; p <= m; ++p)
    while (m % p == 0) {
      m /= p;
      ++primes;
    }
  return primes % 2 == 0 ? 1 : -1;
}

std::complex<double> root_sum(long k, long l, std::complex<double> zeta) {
  std::complex<double> acc(0, 0);
  for (long r = 0; r < k; ++r)
    if (std::gcd(r == 0 ? k : r, k) == l) acc += std::pow(zeta, (double)r);
  return acc;
}

}  // namespace

TEST_CASE("bernoulli values and convention") {
  CHECK(bernoulli(0) == Rational(1));
  CHECK(bernoulli(1) == Rational(-1, 2));
  CHECK(bernoulli(2) == Rational(1, 6));
  CHECK(bernoulli(12) == Rational(-691, 2730));
  for (int m = 3; m <= 29; m += 2) CHECK(bernoulli(m) == Rational(0));
  // oracle cross-check up to B_30
  for (int m = 0; m <= 30; ++m) CHECK(bernoulli(m) == bernoulli_oracle(m));
}

TEST_CASE("euler phi and moebius") {
  CHECK(euler_phi(1) == 1);
  CHECK(moebius(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(moebius(12) == 0);
  CHECK(moebius(30) == -1);
  for (long n = 1; n <= 300; ++n) {
    CHECK(euler_phi(n) == phi_brute(n));
    CHECK(moebius(n) == moebius_brute(n));
  }
  // divisor-sum identities
  for (long n = 1; n <= 10000; ++n) {
    long phisum = 0;
    long musum = 0;
    for (long d : divisors(n)) {
      phisum += euler_phi(d);
      musum += moebius(d);
    }
    REQUIRE(phisum == n);
    REQUIRE(musum == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("double factorial counts pairings") {
  CHECK(odd_double_factorial(0) == Integer(1));
  CHECK(odd_double_factorial(4) == Integer(3));
  CHECK(odd_double_factorial(8) == Integer(105));
  CHECK_THROWS_AS(odd_double_factorial(5), std::invalid_argument);
  for (int m = 1; m <= 6; ++m) {
    std::vector<int> owners(2 * m, 0);
    auto pairings = enumerate_pairings(owners, false);
    CHECK(Integer((long)pairings.size()) == odd_double_factorial(2 * m));
  }
}

TEST_CASE("c/T/gamma coefficient values") {
  CHECK(c_coeff(6, 2, 1) == Rational(2));
  CHECK(c_coeff(4, 1, 4) == Rational(0));
  for (long k = 1; k <= 20; ++k)
    for (long d : divisors(k)) CHECK(c_coeff(k, k, d) == Rational(1));
  CHECK_THROWS_AS(c_coeff(6, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(c_coeff(6, 2, 5), std::invalid_argument);

  CHECK(t_coeff(4, 2) == Rational(2));
  CHECK(t_coeff(4, 4) == Rational(0));
  CHECK(t_coeff(3, 1) == Rational(0));

  CHECK(gamma_coeff(5, 5, 0) == Rational(4));
  CHECK(gamma_coeff(3, 1, 2) == Rational(0));
  CHECK(gamma_coeff(4, 1, 2) == Rational(4));
}

TEST_CASE("root-of-unity identities for c and T") {
  const double pi = 3.14159265358979323846;
  for (long k = 1; k <= 60; ++k) {
    for (long delta : divisors(k)) {
      // all primitive delta-th roots give the same value c(k,l,delta)
      for (long l : divisors(k)) {
        double expect = c_coeff(k, l, delta).to_double();
        for (long a = 0; a < delta; ++a) {
          if (std::gcd(a == 0 ? delta : a, delta) != 1) continue;
          std::complex<double> zeta = std::polar(1.0, 2 * pi * a / delta);
          std::complex<double> s = root_sum(k, l, zeta);
          REQUIRE(std::abs(s.real() - expect) < 1e-6);
          REQUIRE(std::abs(s.imag()) < 1e-6);
        }
      }
    }
    if (k % 2 == 0) {
      // even-residue sums: k/2 at +-1, zero elsewhere
      for (long a = 0; a < k; ++a) {
        std::complex<double> zeta = std::polar(1.0, 2 * pi * a / k);
        std::complex<double> acc(0, 0);
        for (long r = 0; r < k; ++r)
          if (std::gcd(r == 0 ? k : r, k) % 2 == 0) acc += std::pow(zeta, (double)r);
        bool pm1 = (a == 0 || 2 * a == k);
        double expect = pm1 ? k / 2.0 : 0.0;
        REQUIRE(std::abs(acc.real() - expect) < 1e-6);
        REQUIRE(std::abs(acc.imag()) < 1e-6);
        if (pm1) {
          long delta = (a == 0) ? 1 : 2;
          REQUIRE(t_coeff(k, delta) == Rational(k / 2));
        }
      }
    }
  }
}

TEST_CASE("rational basics") {
  Rational a(3, -6);
  CHECK(a == Rational(-1, 2));
  CHECK(a.denominator() == Integer(2));
  CHECK(a.str() == "-1/2");
  CHECK(Rational(4, 2).str() == "2");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
}
