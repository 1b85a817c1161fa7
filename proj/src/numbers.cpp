#include "mgn/numbers.hpp"

#include <mutex>
#include <numeric>
#include <unordered_map>

namespace mgn {

namespace {
std::mutex g_bernoulli_mu;
std::vector<Rational> g_bernoulli;  // g_bernoulli[m] = B_m

std::mutex g_factorial_mu;
std::vector<Integer> g_factorials;

std::mutex g_c_mu;
std::unordered_map<uint64_t, long> g_c_cache;
}  // namespace

Rational bernoulli(int m) {
  if (m < 0) throw std::invalid_argument("bernoulli: negative index");
  std::lock_guard<std::mutex> lock(g_bernoulli_mu);
  if (g_bernoulli.empty()) g_bernoulli.push_back(Rational(1));
  // B_m = -1/(m+1) * sum_{j<m} C(m+1,j) B_j
  while ((int)g_bernoulli.size() <= m) {
    long t = (long)g_bernoulli.size();
    Rational acc(0);
    for (long j = 0; j < t; ++j) acc += Rational(binomial(t + 1, j)) * g_bernoulli[j];
    g_bernoulli.push_back(-acc / Rational(t + 1));
  }
  return g_bernoulli[m];
}

namespace testhooks {
void corrupt_bernoulli_cache() {
  std::lock_guard<std::mutex> lock(g_bernoulli_mu);
  if (g_bernoulli.size() < 3) {
    g_bernoulli.assign({Rational(1), Rational(-1, 2), Rational(1, 6)});
  }
  g_bernoulli[2] = Rational(1, 7);
}
}  // namespace testhooks

long euler_phi(long n) {
  if (n < 1) throw std::invalid_argument("euler_phi: n must be >= 1");
  long result = n;
  long m = n;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

int moebius(long n) {
  if (n < 1) throw std::invalid_argument("moebius: n must be >= 1");
  int primes = 0;
  long m = n;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      m /= p;
      if (m % p == 0) return 0;
      ++primes;
    }
  }
  if (m > 1) ++primes;
  return (primes % 2 == 0) ? 1 : -1;
}

std::vector<long> divisors(long n) {
  if (n < 1) throw std::invalid_argument("divisors: n must be >= 1");
  std::vector<long> small, large;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d != n / d) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

long gcd_long(long a, long b) { return std::gcd(a, b); }

Integer factorial(long n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  std::lock_guard<std::mutex> lock(g_factorial_mu);
  if (g_factorials.empty()) g_factorials.push_back(Integer(1));
  while ((long)g_factorials.size() <= n) {
    g_factorials.push_back(g_factorials.back() * Integer((long)g_factorials.size()));
  }
  return g_factorials[n];
}

Integer binomial(long n, long k) {
  if (k < 0 || k > n) return Integer(0);
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), (unsigned long)n, (unsigned long)k);
  return r;
}

Integer odd_double_factorial(long t) {
  if (t < 0 || t % 2 != 0) throw std::invalid_argument("odd_double_factorial: t must be even and >= 0");
  Integer acc(1);
  for (long i = t - 1; i >= 3; i -= 2) acc *= Integer(i);
  return acc;
}

long c_value(long k, long l, long delta) {
  if (k < 1 || l < 1 || delta < 1 || k % l != 0 || k % delta != 0)
    throw std::invalid_argument("c_coeff: requires l | k and delta | k");
  uint64_t key = ((uint64_t)k << 40) | ((uint64_t)l << 20) | (uint64_t)delta;
  {
    std::lock_guard<std::mutex> lock(g_c_mu);
    auto it = g_c_cache.find(key);
    if (it != g_c_cache.end()) return it->second;
  }
  long d = delta / std::gcd(delta, l);
  long num = euler_phi(k / l);
  long den = euler_phi(d);
  if (num % den != 0) throw consistency_error("c_coeff: phi(delta/(delta,l)) does not divide phi(k/l)");
  long v = (num / den) * moebius(d);
  std::lock_guard<std::mutex> lock(g_c_mu);
  g_c_cache.emplace(key, v);
  return v;
}

Rational c_coeff(long k, long l, long delta) { return Rational(c_value(k, l, delta)); }

Rational t_coeff(long k, long delta) {
  if (k < 1 || delta < 1 || k % delta != 0) throw std::invalid_argument("t_coeff: requires delta | k");
  if (k % 2 == 0 && (delta == 1 || delta == 2)) return Rational(k / 2);
  return Rational(0);
}

Rational gamma_coeff(long k, long delta, long c) {
  if (k < 1 || delta < 1 || k % delta != 0 || c < 0)
    throw std::invalid_argument("gamma_coeff: requires delta | k and c >= 0");
  if (c == 0) return Rational(euler_phi(delta));
  if (k % 2 != 0) return Rational(0);
  if (delta > 2) return Rational(0);
  return Rational(k / 2).pow(c);
}

}  // namespace mgn
