#include "mgn/ordinary_closed.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "mgn/chi.hpp"
#include "mgn/numbers.hpp"

namespace mgn {

long OrbiVertexDatum::weight() const {
  long msum = 0;
  for (int m : M) msum += m;
  return (long)k * (2L * h - 2 + a + b + c + d) - msum;
}

bool OrbiVertexDatum::valid() const {
  if (h < 0 || k < 1 || a < 0 || b < 0 || c < 0 || d < 0) return false;
  if ((int)N.size() != b || (int)M.size() != d) return false;
  for (int x : N)
    if (x < 1 || x > k || k % x != 0) return false;
  for (int x : M)
    if (x < 1 || x >= k || k % x != 0) return false;
  if (2 * h + a + b + c + d < 3) return false;
  return weight() >= 1;
}

Rational cover_vertex_bracket(const OrbiVertexDatum& v) {
  if (!v.valid()) throw std::invalid_argument("cover_vertex_bracket: invalid vertex datum");
  Integer dsum(0);
  for (long delta : divisors(v.k)) {
    Rational gam = gamma_coeff(v.k, delta, v.c);
    if (gam.is_zero()) continue;
    Integer term = gam.to_integer();
    if (v.a > 0) {
      Integer c1(c_value(v.k, 1, delta));
      for (int i = 0; i < v.a; ++i) term *= c1;
    }
    for (int x : v.N) term *= Integer(c_value(v.k, x, delta));
    for (int x : v.M) term *= Integer(c_value(v.k, x, delta));
    dsum += term;
  }
  if (dsum == 0) return Rational(0);
  Integer fm = factorial(v.a) * factorial(v.c);
  auto run_factorials = [&fm](const std::vector<int>& vals) {
    for (size_t i = 0; i < vals.size();) {
      size_t j = i;
      while (j < vals.size() && vals[j] == vals[i]) ++j;
      fm *= factorial((long)(j - i));
      i = j;
    }
  };
  run_factorials(v.N);
  run_factorials(v.M);
  Rational r = chi_open(v.h, v.a + v.b + v.c + v.d) / Rational(fm);
  r *= Rational(Integer(v.k)).pow(2 * v.h - 2);
  r *= Rational(dsum);
  return r;
}

namespace {

void multisets_with_sum(const std::vector<long>& vals, size_t vi, int count, long sum,
                        std::vector<int>& cur, const std::function<void()>& out) {
  if (count == 0) {
    if (sum == 0) out();
    return;
  }
  for (size_t i = vi; i < vals.size(); ++i) {
    long v = vals[i];
    if (v > sum) continue;
    if (v * count < sum) break;  // vals descending
    cur.push_back((int)v);
    multisets_with_sum(vals, i, count - 1, sum - v, cur, out);
    cur.pop_back();
  }
}

void multisets_of_size(const std::vector<long>& vals, size_t vi, int count, std::vector<int>& cur,
                       const std::function<void()>& out) {
  if (count == 0) {
    out();
    return;
  }
  for (size_t i = vi; i < vals.size(); ++i) {
    cur.push_back((int)vals[i]);
    multisets_of_size(vals, i, count - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<OrbiVertexDatum> cover_vertex_data(int max_w, int max_a, int k_cap) {
  std::vector<OrbiVertexDatum> out;
  long kmax = (k_cap > 0) ? k_cap : 42L * max_w;
  for (long k = 1; k <= kmax; ++k) {
    std::vector<long> divs = divisors(k);
    std::vector<long> propdivs;
    for (long d : divs)
      if (d < k) propdivs.push_back(d);
    std::sort(propdivs.rbegin(), propdivs.rend());
    const long pd = propdivs.empty() ? 0 : propdivs.front();
    // X = 2h-2+a+b+c+d satisfies kX - d*pd <= max_w, d <= X+2, pd <= k/2
    const long Xcap = 2 * max_w / k + 2;
    for (int h = 0; 2 * h - 2 <= Xcap; ++h) {
      for (int a = 0; a <= std::min<long>(max_a, Xcap + 2); ++a) {
        for (int b = 0; b <= Xcap + 2; ++b) {
          for (int c = 0; c <= Xcap + 2; ++c) {
            if (c > 0 && (k % 2 != 0)) break;  // gamma vanishes
            for (int d = 0; d <= Xcap + 2; ++d) {
              long X = 2L * h - 2 + a + b + c + d;
              if (X < 1) continue;
              if (2 * h + a + b + c + d < 3) continue;  // quotient stability
              long msum_hi = std::min<long>((long)d * pd, k * X - 1);
              long msum_lo = std::max<long>(d, k * X - max_w);
              if (d == 0) {
                long w = k * X;
                if (w >= 1 && w <= max_w) {
                  OrbiVertexDatum v{h, (int)k, a, b, c, 0, {}, {}};
                  std::vector<int> curN;
                  multisets_of_size(divs, 0, b, curN, [&]() {
                    v.N = curN;
                    std::sort(v.N.begin(), v.N.end());
                    out.push_back(v);
                  });
                }
                continue;
              }
              if (pd == 0 || msum_lo > msum_hi) continue;
              for (long msum = msum_lo; msum <= msum_hi; ++msum) {
                std::vector<int> curM;
                multisets_with_sum(propdivs, 0, d, msum, curM, [&]() {
                  OrbiVertexDatum v{h, (int)k, a, b, c, d, {}, curM};
                  std::sort(v.M.begin(), v.M.end());
                  std::vector<int> curN;
                  multisets_of_size(divs, 0, b, curN, [&]() {
                    v.N = curN;
                    std::sort(v.N.begin(), v.N.end());
                    out.push_back(v);
                  });
                });
              }
            }
          }
        }
      }
    }
  }
  for (const auto& v : out)
    if (!v.valid()) throw consistency_error("cover_vertex_data: produced invalid datum");
  return out;
}

namespace {

SlotVec slots_of(const std::vector<int>& N) {
  SlotVec nu;
  for (size_t i = 0; i < N.size();) {
    size_t j = i;
    while (j < N.size() && N[j] == N[i]) ++j;
    nu.push_back({N[i], (int)(j - i)});
    i = j;
  }
  return nu;
}

std::mutex g_atoms_mu;
std::map<std::tuple<int, int, int>, std::vector<CoverAtom>> g_atoms_cache;

}  // namespace

std::vector<CoverAtom> cover_atoms(int max_w, int max_a, int k_cap) {
  {
    std::lock_guard<std::mutex> lock(g_atoms_mu);
    auto it = g_atoms_cache.find({max_w, max_a, k_cap});
    if (it != g_atoms_cache.end()) return it->second;
  }
  std::map<std::tuple<int, int, SlotVec>, Rational> agg;
  for (const OrbiVertexDatum& v : cover_vertex_data(max_w, max_a, k_cap)) {
    Rational br = cover_vertex_bracket(v);
    if (br.is_zero()) continue;
    auto key = std::make_tuple((int)v.weight(), v.a, slots_of(v.N));
    auto [it, ins] = agg.emplace(key, br);
    if (!ins) it->second += br;
  }
  std::vector<CoverAtom> atoms;
  for (auto& [key, w] : agg) {
    if (w.is_zero()) continue;
    atoms.push_back(CoverAtom{std::get<0>(key), std::get<1>(key), std::get<2>(key), w});
  }
  std::lock_guard<std::mutex> lock(g_atoms_mu);
  g_atoms_cache[{max_w, max_a, k_cap}] = atoms;
  return atoms;
}

// ---------------- connected pairing sums ----------------

namespace {

std::mutex g_conn_mu;
std::map<std::vector<long long>, Integer> g_conn_cache;

Integer z_value(const std::vector<std::pair<SlotVec, int>>& types, const std::vector<int>& count) {
  // slot totals per N value
  std::map<int, long> m;
  for (size_t i = 0; i < types.size(); ++i)
    for (auto& [N, mult] : types[i].first) m[N] += (long)mult * count[i];
  Integer z(1);
  for (auto& [N, tot] : m) {
    if (tot % 2 != 0) return Integer(0);
    z *= odd_double_factorial(tot);
    Integer Np(N);
    for (long i = 0; i < tot / 2; ++i) z *= Np;
  }
  return z;
}

}  // namespace

Integer connected_pairing_sum(const std::vector<std::pair<SlotVec, int>>& vertex_types) {
  std::vector<std::pair<SlotVec, int>> types = vertex_types;
  std::sort(types.begin(), types.end());
  std::vector<long long> key;
  for (auto& [nu, c] : types) {
    key.push_back(-(long long)c - 1);
    for (auto& [N, mult] : nu) key.push_back(((long long)N << 20) | mult);
  }
  {
    std::lock_guard<std::mutex> lock(g_conn_mu);
    auto it = g_conn_cache.find(key);
    if (it != g_conn_cache.end()) return it->second;
  }

  size_t T = types.size();
  std::vector<int> full(T);
  int p = 0;
  for (size_t i = 0; i < T; ++i) {
    full[i] = types[i].second;
    p += full[i];
  }

  Integer result(0);
  if (p == 1) {
    result = z_value(types, full);
  } else if (T > 0) {
    // mixed-radix state space over per-type counts
    std::vector<int> radix(T);
    long long S = 1;
    for (size_t i = 0; i < T; ++i) {
      radix[i] = full[i] + 1;
      S *= radix[i];
    }
    auto decode = [&](long long s) {
      std::vector<int> v(T);
      for (size_t i = 0; i < T; ++i) {
        v[i] = (int)(s % radix[i]);
        s /= radix[i];
      }
      return v;
    };
    auto encode = [&](const std::vector<int>& v) {
      long long s = 0;
      for (size_t i = T; i-- > 0;) s = s * radix[i] + v[i];
      return s;
    };
    std::vector<Integer> z(S), conn(S);
    for (long long s = 0; s < S; ++s) z[s] = z_value(types, decode(s));
    // states processed by increasing vertex count so conn of proper
    // sub-multisets is always available
    std::vector<long long> order;
    for (long long s = 1; s < S; ++s) order.push_back(s);
    auto total_of = [&](long long s) {
      int tot = 0;
      for (int c : decode(s)) tot += c;
      return tot;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](long long a, long long b) { return total_of(a) < total_of(b); });
    for (long long s : order) {
      std::vector<int> sv = decode(s);
      size_t anchor = 0;
      while (sv[anchor] == 0) ++anchor;
      int total = 0;
      for (int c : sv) total += c;
      if (total == 1) {
        conn[s] = z[s];
        continue;
      }
      Integer acc = z[s];
      // subtract components through the anchor vertex
      std::vector<int> t(T, 0);
      std::function<void(size_t)> walk = [&](size_t i) {
        if (i == T) {
          int ttotal = 0;
          for (int c : t) ttotal += c;
          if (t[anchor] < 1 || ttotal == total) return;
          Integer ways(1);
          for (size_t j = 0; j < T; ++j) {
            long n0 = sv[j] - (j == anchor ? 1 : 0);
            long k0 = t[j] - (j == anchor ? 1 : 0);
            ways *= binomial(n0, k0);
          }
          std::vector<int> rest(T);
          for (size_t j = 0; j < T; ++j) rest[j] = sv[j] - t[j];
          acc -= ways * conn[encode(t)] * z[encode(rest)];
          return;
        }
        for (t[i] = 0; t[i] <= sv[i]; ++t[i]) walk(i + 1);
        t[i] = 0;
      };
      walk(0);
      conn[s] = acc;
    }
    result = conn[S - 1];
  }

  std::lock_guard<std::mutex> lock(g_conn_mu);
  g_conn_cache.emplace(std::move(key), result);
  return result;
}

// ---------------- direct route ----------------

namespace {

struct Assembly {
  std::vector<std::pair<const CoverAtom*, int>> parts;
};

Rational direct_sum(int W, int n, const DirectOptions& opt,
                    const std::function<void(const Assembly&, const Rational&, const Integer&)>* audit) {
  std::vector<CoverAtom> atoms = cover_atoms(W, n, opt.k_cap);
  // slotless atoms only form single-vertex assemblies (any second vertex would
  // leave them disconnected)
  std::vector<const CoverAtom*> slotless, slotted;
  for (const auto& a : atoms) (a.nu.empty() ? slotless : slotted).push_back(&a);

  Rational total(0);
  for (const CoverAtom* a : slotless) {
    if (a->w == W && a->a == n) {
      total += a->weight;
      if (audit) {
        Assembly as{{{a, 1}}};
        (*audit)(as, a->weight, Integer(1));
      }
    }
  }

  // suffix feasibility for the leg budget: best a/w ratio among remaining atoms
  size_t m = slotted.size();
  std::vector<std::pair<int, int>> best_ratio(m + 1, {0, 1});  // (a, w) maximizing a/w
  for (size_t i = m; i-- > 0;) {
    best_ratio[i] = best_ratio[i + 1];
    auto [ba, bw] = best_ratio[i];
    if ((long)slotted[i]->a * bw > (long)ba * slotted[i]->w)
      best_ratio[i] = {slotted[i]->a, slotted[i]->w};
  }

  Assembly cur;
  std::function<void(size_t, int, int)> rec = [&](size_t idx, int remW, int remA) {
    if (remW == 0) {
      if (remA != 0) return;
      std::vector<std::pair<SlotVec, int>> types;
      types.reserve(cur.parts.size());
      for (auto& [a, c] : cur.parts) types.push_back({a->nu, c});
      Integer conn = connected_pairing_sum(types);
      if (conn == 0) return;
      Rational w(1);
      for (auto& [a, c] : cur.parts) {
        w *= a->weight.pow(c);
        w /= Rational(factorial(c));
      }
      total += w * Rational(conn);
      if (audit) (*audit)(cur, w * Rational(conn), conn);
      return;
    }
    if (idx == m) return;
    auto [ba, bw] = best_ratio[idx];
    if ((long)remA * bw > (long)ba * remW) return;  // legs can no longer fit
    const CoverAtom* a = slotted[idx];
    int cmax = remW / a->w;
    if (a->a > 0) cmax = std::min(cmax, remA / a->a);
    for (int c = cmax; c >= 1; --c) {
      cur.parts.push_back({a, c});
      rec(idx + 1, remW - c * a->w, remA - c * a->a);
      cur.parts.pop_back();
    }
    rec(idx + 1, remW, remA);
  };
  rec(0, W, n);
  return total * Rational(factorial(n));
}

}  // namespace

Rational e_bar_raw(int g, int n, const DirectOptions& opt) {
  if (n < 0 || (n == 0 && g < 2) || (n > 0 && !stable_pair(g, n)))
    throw std::invalid_argument("e_bar_raw: unstable (g,n)");
  return direct_sum(2 * g - 2 + n, n, opt, nullptr);
}

Integer e_bar_direct(int g, int n, const DirectOptions& opt) {
  Rational v = e_bar_raw(g, n, opt);
  if (n == 0) {
    // The n = 0 enumeration counts every cover datum whose orbi-graph is
    // connected, including covers whose total space falls apart into m equal
    // pieces of genus h+1 with m*h = g-1; those contribute with weight 1/m
    // (the log expansion of -sum_h e(Mbar_{h+1}) log(1 - lambda^{2h})).
    for (int m = 2; m <= g - 1; ++m)
      if ((g - 1) % m == 0)
        v -= Rational(e_bar_direct((g - 1) / m + 1, 0, opt)) / Rational(m);
  }
  if (!v.is_integer()) throw consistency_error("e_bar_direct: non-integer value " + v.str());
  return v.to_integer();
}

// ---------------- generating-series route ----------------

WeightedSeries build_Q(int lmax, int ymax) {
  WeightedSeries Q(0, lmax, ymax);
  struct VTerm {
    int dl, dy, slot;
    Rational coeff;
  };
  for (long k = 1; k <= 42L * lmax; ++k) {
    std::vector<long> divs = divisors(k);
    for (long delta : divs) {
      std::vector<VTerm> terms;
      long c1 = c_value(k, 1, delta);
      if (c1 != 0) terms.push_back({(int)k, 1, 0, Rational(c1)});
      for (long mdiv : divs)
        if (mdiv < k) {
          long cm = c_value(k, mdiv, delta);
          if (cm != 0) terms.push_back({(int)(k - mdiv), 0, 0, Rational(cm)});
        }
      Rational T = t_coeff(k, delta);
      if (!T.is_zero()) terms.push_back({(int)k, 0, 0, T});
      for (long r : divs) {
        long cr = c_value(k, r, delta);
        if (cr != 0) terms.push_back({(int)k, 0, (int)r, Rational(cr)});
      }
      Rational phid(euler_phi(delta));
      for (int h = 0; h <= lmax / (2 * (int)k) + 2; ++h) {
        long base = k * (2L * h - 2);
        Rational pref = phid * Rational(Integer(k)).pow(2 * h - 2);
        // multiset recursion over the V-terms; each multiset emitted exactly
        // once when all term multiplicities are decided
        std::function<void(size_t, int, long, int, SlotVec, Rational)> rec =
            [&](size_t ti, int s, long lsum, int ysum, SlotVec slots, Rational cp) {
              if (ti == terms.size()) {
                long w = base + lsum;
                if (w >= 1 && w <= lmax && stable_pair(h, s))
                  Q.add_term(WMonomial{(int)w, ysum, slots}, pref * chi_open(h, s) * cp);
                return;
              }
              // skip current term
              rec(ti + 1, s, lsum, ysum, slots, cp);
              // take current term 1..count times
              const VTerm& t = terms[ti];
              Rational cc = cp;
              SlotVec sl = slots;
              long ls = lsum;
              int ys = ysum;
              for (int cnt = 1;; ++cnt) {
                ls += t.dl;
                ys += t.dy;
                if (base + ls > lmax) break;  // each term has dl >= 1
                if (ys > ymax) break;
                cc *= t.coeff / Rational(cnt);
                if (t.slot != 0) sl = slotvec_merge(sl, SlotVec{{t.slot, 1}});
                rec(ti + 1, s + cnt, ls, ys, sl, cc);
              }
            };
        rec(0, 0, 0, 0, {}, Rational(1));
      }
    }
  }
  return Q;
}

namespace {
std::mutex g_genfun_mu;
std::map<std::pair<int, int>, WeightedSeries> g_genfun_cache;
}  // namespace

WeightedSeries genfun_series(int lmax, int ymax, int jobs) {
  (void)jobs;
  {
    std::lock_guard<std::mutex> lock(g_genfun_mu);
    auto it = g_genfun_cache.find({lmax, ymax});
    if (it != g_genfun_cache.end()) return it->second;
  }
  WeightedSeries Q = build_Q(lmax, ymax);
  // split by maximal slot and integrate the Gaussian slots out from the top
  int rmax = 0;
  for (const auto& [k, v] : Q.terms())
    if (!k.slots.empty()) rmax = std::max(rmax, k.slots.back().first);
  std::map<int, WeightedSeries> groups;
  for (const auto& [k, v] : Q.terms()) {
    int r = k.slots.empty() ? 0 : k.slots.back().first;
    auto it = groups.find(r);
    if (it == groups.end()) it = groups.emplace(r, WeightedSeries(0, lmax, ymax)).first;
    it->second.add_term(k, v);
  }
  WeightedSeries C = WeightedSeries::one(0, lmax, ymax);
  for (int r = rmax; r >= 1; --r) {
    auto it = groups.find(r);
    if (it != groups.end()) C = C * exp_weighted(it->second);
    C = wick_slot(C, r);
  }
  auto it0 = groups.find(0);
  if (it0 != groups.end()) C = C * exp_weighted(it0->second);
  WeightedSeries F = log_weighted(C);
  for (const auto& [k, v] : F.terms()) {
    if (!k.slots.empty()) throw consistency_error("genfun_series: leftover Gaussian slot");
    if ((k.lam - k.y) % 2 != 0)
      throw consistency_error("genfun_series: odd lambda-y parity survived assembly");
  }
  std::lock_guard<std::mutex> lock(g_genfun_mu);
  g_genfun_cache.emplace(std::make_pair(lmax, ymax), F);
  return F;
}

namespace {
constexpr int kDefaultLmax = 12;
constexpr int kDefaultYmax = 8;
}  // namespace

Integer e_bar_genfun(int g, int n, int lmax, int ymax) {
  if (lmax < 0) lmax = kDefaultLmax;
  if (ymax < 0) ymax = kDefaultYmax;
  if (n < 1 || !stable_pair(g, n)) throw std::invalid_argument("e_bar_genfun: needs stable (g,n), n >= 1");
  if (2 * g - 2 + n > lmax || n > ymax)
    throw std::invalid_argument("e_bar_genfun: requested (g,n) exceeds the configured window");
  WeightedSeries F = genfun_series(lmax, ymax);
  Rational v = F.coeff(2 * g - 2 + n, n) * Rational(factorial(n));
  if (!v.is_integer()) throw consistency_error("e_bar_genfun: non-integer extraction " + v.str());
  return v.to_integer();
}

UgLedger u_g_resolve(int upto_g, int lmax) {
  if (lmax < 0) lmax = kDefaultLmax;
  if (2 * upto_g - 2 > lmax) throw std::invalid_argument("u_g_resolve: window too small");
  WeightedSeries F = genfun_series(lmax, kDefaultYmax);
  UgLedger led;
  for (int g = 2; g <= upto_g; ++g) {
    // y^0 column of the series: t_g = sum_{m | g-1} e(Mbar_{(g-1)/m+1}) / m,
    // the 1/m-weighted disconnected-cover convolution; invert recursively.
    Rational t = F.coeff(2 * g - 2, 0);
    Rational e = t;
    for (int m = 2; m <= g - 1; ++m)
      if ((g - 1) % m == 0) e -= Rational(led.e_bar[(g - 1) / m + 1]) / Rational(m);
    if (!e.is_integer())
      throw consistency_error("u_g_resolve: non-integer e(Mbar_g) at g = " + std::to_string(g));
    led.e_bar[g] = e.to_integer();
    // the ledger's u_g is the plain divisor sum of the resolved values
    Integer u(0);
    for (int h = 1; h <= g - 1; ++h)
      if ((g - 1) % h == 0) u += led.e_bar[h + 1];
    led.u[g] = u;
  }
  // cross-check against the direct route
  for (int g = 2; g <= upto_g; ++g) {
    Integer direct = e_bar_direct(g, 0);
    if (direct != led.e_bar[g])
      throw consistency_error("u_g_resolve: direct route disagrees at g = " + std::to_string(g));
  }
  return led;
}

Table2 table2_compute(int jobs, int direct_max_weight) {
  Table2 t;
  t.direct_max_weight = direct_max_weight;
  int rows = Table2::g_hi - Table2::g_lo + 1;
  int cols = Table2::n_hi - Table2::n_lo + 1;
  t.values.assign(rows, std::vector<Integer>(cols, Integer(0)));
  WeightedSeries F = genfun_series(kDefaultLmax, std::max(Table2::n_hi, 6), jobs);
  UgLedger led = u_g_resolve(Table2::g_hi);
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::string err;
  auto work = [&]() {
    try {
      while (true) {
        int cell = next.fetch_add(1);
        if (cell >= rows * cols) break;
        int g = Table2::g_lo + cell / cols;
        int n = Table2::n_lo + cell % cols;
        Integer v;
        if (n == 0) {
          v = led.e_bar.at(g);
        } else {
          v = e_bar_genfun(g, n);
          if (2 * g - 2 + n <= direct_max_weight) {
            Integer dv = e_bar_direct(g, n);
            if (dv != v)
              throw consistency_error("table2: route mismatch at (" + std::to_string(g) + "," +
                                      std::to_string(n) + "): direct " + dv.get_str() +
                                      " vs series " + v.get_str());
          }
        }
        t.values[g - Table2::g_lo][n - Table2::n_lo] = v;
      }
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (err.empty()) err = e.what();
    }
  };
  if (jobs < 1) jobs = (int)std::thread::hardware_concurrency();
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (!err.empty()) throw consistency_error(err);
  return t;
}

std::string cover_data_json(int g, int n) {
  if (n < 0 || (n == 0 && g < 2) || (n > 0 && !stable_pair(g, n)))
    throw std::invalid_argument("cover_data_json: unstable (g,n)");
  int W = 2 * g - 2 + n;
  std::ostringstream os;
  os << "{\"format_version\":1,\"g\":" << g << ",\"n\":" << n << ",\"vertex_data\":[";
  bool first = true;
  for (const auto& v : cover_vertex_data(W, n)) {
    Rational br = cover_vertex_bracket(v);
    if (br.is_zero()) continue;
    if (!first) os << ",";
    first = false;
    os << "{\"h\":" << v.h << ",\"k\":" << v.k << ",\"a\":" << v.a << ",\"b\":" << v.b
       << ",\"c\":" << v.c << ",\"d\":" << v.d << ",\"N\":[";
    for (size_t i = 0; i < v.N.size(); ++i) os << (i ? "," : "") << v.N[i];
    os << "],\"M\":[";
    for (size_t i = 0; i < v.M.size(); ++i) os << (i ? "," : "") << v.M[i];
    os << "],\"weight\":" << v.weight() << ",\"bracket\":\"" << br.str() << "\"}";
  }
  os << "],\"assemblies\":[";
  first = true;
  std::function<void(const Assembly&, const Rational&, const Integer&)> audit =
      [&](const Assembly& as, const Rational& contribution, const Integer& conn) {
        if (!first) os << ",";
        first = false;
        os << "{\"vertices\":[";
        for (size_t i = 0; i < as.parts.size(); ++i) {
          const auto& [atom, cnt] = as.parts[i];
          if (i) os << ",";
          os << "{\"w\":" << atom->w << ",\"a\":" << atom->a << ",\"slots\":[";
          for (size_t j = 0; j < atom->nu.size(); ++j) {
            if (j) os << ",";
            os << "[" << atom->nu[j].first << "," << atom->nu[j].second << "]";
          }
          os << "],\"count\":" << cnt << "}";
        }
        os << "],\"pairing_sum\":" << conn.get_str() << ",\"contribution\":\""
           << contribution.str() << "\"}";
      };
  DirectOptions opt;
  direct_sum(W, n, opt, &audit);
  os << "]}";
  return os.str();
}

}  // namespace mgn
