#pragma once

#include <vector>

#include "mgn/rational.hpp"

namespace mgn {

/// Cyclic branched-cover datum for the open moduli space M_g^{n+1}: quotient
/// genus h, cyclic order k, d extra branch points with monodromy gcds M_r
/// (proper divisors of k), tied to (g,n) by
///   2g-1+n = k(2h-1+n+d) - sum_r M_r.
struct BranchDatum {
  int h = 0;
  int k = 1;
  int d = 0;
  std::vector<int> M;  // sorted multiset

  bool satisfies_constraint(int g, int n) const;
};

/// All branch data for (g,n), duplicate-free, identity datum (g,1,0,{}) first.
/// k_cap (testing hook) widens/overrides the provable cyclic-order bound 6(2g-1+n).
std::vector<BranchDatum> branch_data_enumerate(int g, int n, long k_cap = -1);

/// Ordinary Euler characteristic of M_g^{n_plus_1 - 1 + 1} = M_g^{n+1} with
/// n = n_plus_1 - 1 >= 0; requires 2g-1+n > 0. Integrality is asserted.
Integer e_open(int g, int n_plus_1);

/// Contribution of a single branch datum to e_open (the delta-sum bracket with
/// all prefactors; M treated as a multiset). Exposed for instrumentation tests.
Rational e_open_term(int g, int n, const BranchDatum& b);

struct Table1 {
  static constexpr int g_lo = 3, g_hi = 10, n_lo = 1, n_hi = 8;
  // values[g - g_lo][n - n_lo] = e(M_g^{n+1})
  std::vector<std::vector<Integer>> values;
};

Table1 table1_compute(int jobs = 1);

}  // namespace mgn
