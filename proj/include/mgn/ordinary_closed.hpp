#pragma once

#include <map>
#include <vector>

#include "mgn/rational.hpp"
#include "mgn/weighted_series.hpp"

namespace mgn {

/// One vertex of an orbifold cover datum: quotient genus h, cyclic order k,
/// a leg-type points, b paired-slot points carrying divisor values N, c
/// even-monodromy points, d extra branch points with proper-divisor values M.
/// Its weight w = k(2h-2+a+b+c+d) - sum(M) is the vertex's lambda-degree.
struct OrbiVertexDatum {
  int h = 0, k = 1, a = 0, b = 0, c = 0, d = 0;
  std::vector<int> N;  // size b, sorted, each dividing k, in [1, k]
  std::vector<int> M;  // size d, sorted, each a proper divisor of k
  long weight() const;
  bool valid() const;  // range, divisibility, quotient stability, weight >= 1
};

/// Aggregated vertex factor: all data with the same (weight, legs, slot
/// multiset) folded together with their bracket values.
struct CoverAtom {
  int w = 0;
  int a = 0;
  SlotVec nu;       // (N value, multiplicity)
  Rational weight;  // aggregated bracket including 1/(a! c! mult!) factors
};

/// The per-datum bracket: chi(M_h^{a+b+c+d})/(a! c! prod mult_N! prod mult_M!)
/// * k^{2h-2} * sum_{delta|k} c(k,1,delta)^a prod c(k,N,delta) gamma(k,delta,c)
/// prod c(k,M,delta). Exposed for instrumentation and the audit dump.
Rational cover_vertex_bracket(const OrbiVertexDatum& v);

/// All vertex data with weight <= max_w and a <= max_a (k capped by the
/// Riemann-Hurwitz deficiency bound 42*w, or by k_cap if positive).
std::vector<OrbiVertexDatum> cover_vertex_data(int max_w, int max_a, int k_cap = -1);

/// Aggregation of cover_vertex_data into atoms keyed by (w, a, nu).
std::vector<CoverAtom> cover_atoms(int max_w, int max_a, int k_cap = -1);

/// Sum over connected slot pairings of prod_e N(e), for vertices given as slot
/// multisets with multiplicities (type, count). Exact integer.
Integer connected_pairing_sum(const std::vector<std::pair<SlotVec, int>>& vertex_types);

struct DirectOptions {
  int k_cap = -1;  // restrict cyclic orders (testing hook); -1 = full bound
  int jobs = 1;
};

/// Ordinary Euler characteristic of the compactification by explicit
/// enumeration of cover data and connected pairings. For n = 0 the raw
/// enumeration also counts covers whose total space splits into m equal
/// lower-genus pieces; those are removed by the 1/m-weighted divisor
/// convolution before the value is returned.
Integer e_bar_direct(int g, int n, const DirectOptions& opt = {});

/// The raw connected enumeration value (n >= 1: e(Mbar_g^n); n = 0: the
/// 1/m-weighted divisor convolution of the closed-surface values).
Rational e_bar_raw(int g, int n, const DirectOptions& opt = {});

/// The matrix-model generating series route: Q from the V-polynomials, exp,
/// Gaussian slot moments (covariance diag r), log. Returns the slot-free
/// series in (lambda, y); coefficient of lambda^{2g-2+n} y^n times n! is
/// e(Mbar_g^n) for n >= 1, and the y^0 column carries u_g.
WeightedSeries genfun_series(int lmax, int ymax, int jobs = 1);

/// Q itself (for the naive exp-then-moments cross-check in tests).
WeightedSeries build_Q(int lmax, int ymax);

Integer e_bar_genfun(int g, int n, int lmax = -1, int ymax = -1);

struct UgLedger {
  std::map<int, Integer> u;      // g -> u_g
  std::map<int, Integer> e_bar;  // g -> e(Mbar_g)
};

/// Resolves the y^0 column of the generating series into e(Mbar_g) for
/// 2 <= g <= upto_g and records u_g = sum_{h | g-1} e(Mbar_{h+1});
/// cross-checked against the direct route.
UgLedger u_g_resolve(int upto_g, int lmax = -1);

struct Table2 {
  static constexpr int g_lo = 2, g_hi = 4, n_lo = 0, n_hi = 6;
  std::vector<std::vector<Integer>> values;  // [g - g_lo][n - n_lo]
  int direct_max_weight = 0;                 // cells with 2g-2+n <= this ran both routes
};

/// All 21 cells; the generating-series route everywhere, the direct route on
/// cells of weight <= direct_max_weight (default 8), hard failure on mismatch.
Table2 table2_compute(int jobs = 1, int direct_max_weight = 8);

/// Audit dump: every vertex datum (with bracket) and every assembly for (g,n).
std::string cover_data_json(int g, int n);

}  // namespace mgn
