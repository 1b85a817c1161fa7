#pragma once

#include <cstdint>
#include <vector>

#include "mgn/rational.hpp"

namespace mgn {

/// Thrown when an internal cross-check fails (a value that must be an integer is
/// not, a residual that must vanish does not, two routes disagree). Distinct from
/// std::invalid_argument so callers can map it to the consistency exit code.
class consistency_error : public std::runtime_error {
 public:
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

/// Bernoulli number B_m in the convention with B_1 = -1/2, B_2 = 1/6.
/// Memoized; thread-safe.
Rational bernoulli(int m);

/// Euler totient of n >= 1.
long euler_phi(long n);

/// Moebius function of n >= 1.
int moebius(long n);

/// Divisors of n >= 1 in increasing order.
std::vector<long> divisors(long n);

long gcd_long(long a, long b);

/// n! as a big integer; memoized.
Integer factorial(long n);

/// Binomial coefficient C(n, k) for 0 <= k <= n.
Integer binomial(long n, long k);

/// (t-1)!! for even t >= 0, the number of perfect pairings of t items.
/// Rejects odd t.
Integer odd_double_factorial(long t);

/// Root-of-unity coefficient sum c(k,l,delta) = phi(k/l)/phi(delta/(delta,l)) *
/// mu(delta/(delta,l)); integer-valued. Requires l | k and delta | k.
Rational c_coeff(long k, long l, long delta);

/// Fast integer form of c_coeff for inner loops.
long c_value(long k, long l, long delta);

/// T(k,delta): k/2 when k is even and delta in {1,2}, else 0. Requires delta | k.
Rational t_coeff(long k, long delta);

/// gamma(k,delta,c): phi(delta) for c = 0; 0 for odd k with c > 0; 0 for even k
/// with c > 0 and delta > 2; (k/2)^c for even k with c > 0 and delta in {1,2}.
Rational gamma_coeff(long k, long delta, long c);

namespace testhooks {
/// Corrupts the bernoulli memo table (fault-injection hook for verify's negative
/// test). Never called by production code paths.
void corrupt_bernoulli_cache();
}  // namespace testhooks

}  // namespace mgn
