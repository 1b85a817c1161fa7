#include "mgn/chi.hpp"

#include "mgn/stable_graph.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <unordered_map>

namespace mgn {

bool stable_pair(int g, int n) { return g >= 0 && n >= 0 && n > 2 - 2 * g; }

namespace {
std::mutex g_chi_mu;
std::map<std::pair<int, int>, Rational> g_chi_cache;
}  // namespace

Rational chi_open(int g, int n) {
  if (!stable_pair(g, n)) throw std::invalid_argument("chi_open: unstable (g,n)");
  {
    std::lock_guard<std::mutex> lock(g_chi_mu);
    auto it = g_chi_cache.find({g, n});
    if (it != g_chi_cache.end()) return it->second;
  }
  // (-1)^n (2g-1) B_{2g} (2g+n-3)! / (2g)!
  Rational v = bernoulli(2 * g) * Rational(2 * g - 1);
  v *= Rational(factorial(2 * g + n - 3), factorial(2 * g));
  if (n % 2 != 0) v = -v;
  std::lock_guard<std::mutex> lock(g_chi_mu);
  g_chi_cache.emplace(std::make_pair(g, n), v);
  return v;
}

// ---------------- stratification route ----------------

namespace {

struct VecHash {
  size_t operator()(const std::vector<long long>& v) const {
    size_t h = 1469598103934665603ull;
    for (long long x : v) {
      h ^= (size_t)x + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

Rational chi_bar_fold(int g, int n, int betti_filter, int jobs) {
  if (!stable_pair(g, n)) throw std::invalid_argument("chi_bar: unstable (g,n)");
  // Classes grouped by (vertex (genus, valence) multiset, |Aut|): the stratum
  // value prod chi / |Aut| is constant on each group, so the rational work is
  // deferred to one pass over the groups. Each worker accumulates into its own
  // map; maps are merged afterwards.
  using Map = std::unordered_map<std::vector<long long>, long long, VecHash>;
  static std::atomic<uint64_t> invocation{0};
  const uint64_t inv = ++invocation;
  std::mutex reg_mu;
  std::vector<std::unique_ptr<Map>> maps;
  auto local_map = [&]() -> Map* {
    thread_local uint64_t seen = 0;
    thread_local Map* mine = nullptr;
    if (seen != inv) {
      auto m = std::make_unique<Map>();
      mine = m.get();
      std::lock_guard<std::mutex> lock(reg_mu);
      maps.push_back(std::move(m));
      seen = inv;
    }
    return mine;
  };
  auto fn = [&](const ClassView& view) {
    int p = (int)view.genus.size();
    std::vector<long long> k;
    k.reserve(p + 1);
    for (int v = 0; v < p; ++v) {
      long long deg = view.emat[v][v];  // each loop carries two half-edges
      for (int u = 0; u < p; ++u) deg += view.emat[v][u];
      long long val = (long long)view.legs[v].size() + deg;
      k.push_back(((long long)view.genus[v] << 32) | val);
    }
    std::sort(k.begin(), k.end());
    k.push_back(view.aut_order);
    ++(*local_map())[std::move(k)];
  };
  for_each_stable_graph_class(g, n, betti_filter, fn, jobs);

  Map groups;
  for (auto& m : maps)
    for (auto& [k, count] : *m) groups[k] += count;
  Rational total(0);
  for (const auto& [k, count] : groups) {
    Rational prod(1);
    for (size_t i = 0; i + 1 < k.size(); ++i) {
      int gv = (int)(k[i] >> 32);
      int lv = (int)(k[i] & 0xffffffff);
      prod *= chi_open(gv, lv);
    }
    total += prod * Rational(count, k.back());
  }
  return total;
}

}  // namespace

Rational chi_bar_graphsum(int g, int n, int jobs) { return chi_bar_fold(g, n, kAllBetti, jobs); }

Rational chi_bar_by_betti(int g, int n, int betti, int jobs) {
  if (betti < 0) throw std::invalid_argument("chi_bar_by_betti: betti must be >= 0");
  return chi_bar_fold(g, n, betti, jobs);
}

Rational chi_compact_type(int g, int n, int jobs) { return chi_bar_fold(g, n, 0, jobs); }

// ---------------- generating-series (Wick) route ----------------

BiSeries omega_series(int xmax, int hmax) {
  BiSeries om(xmax, -1, hmax);
  for (int g = 0; g - 1 <= hmax; ++g)
    for (int n = std::max(0, 3 - 2 * g); n <= xmax; ++n)
      om.add_to(n, g - 1, chi_open(g, n) / Rational(factorial(n)));
  return om;
}

namespace {

// Sparse series in (x, w, hbar) truncated by the additive weight
// i + t + 2j <= wcap; every admissible monomial also satisfies 3j >= -(i+t),
// which is exactly what products of stable-range factors can reach. Weight is
// additive, so this truncation is closed under multiplication.
struct TriSeries {
  int xcap, wcap;
  std::map<std::tuple<int, int, int>, Rational> t;  // (i, t, j) -> coeff

  TriSeries(int xc, int wc) : xcap(xc), wcap(wc) {}

  bool keep(int i, int tt, int j) const {
    return i >= 0 && tt >= 0 && i <= xcap && i + tt + 2 * j <= wcap && 3 * j >= -(i + tt);
  }
  void add(int i, int tt, int j, const Rational& c) {
    if (c.is_zero() || !keep(i, tt, j)) return;
    auto kk = std::make_tuple(i, tt, j);
    auto [it, ins] = t.emplace(kk, c);
    if (!ins) {
      it->second += c;
      if (it->second.is_zero()) t.erase(it);
    }
  }
  TriSeries mul(const TriSeries& o) const {
    TriSeries r(xcap, wcap);
    for (const auto& [ka, va] : t)
      for (const auto& [kb, vb] : o.t) {
        int i = std::get<0>(ka) + std::get<0>(kb);
        int tt = std::get<1>(ka) + std::get<1>(kb);
        int j = std::get<2>(ka) + std::get<2>(kb);
        if (i > xcap || i + tt + 2 * j > wcap) continue;
        r.add(i, tt, j, va * vb);
      }
    return r;
  }
  // exp of a series whose every term has weight >= 1
  TriSeries exp() const {
    TriSeries acc(xcap, wcap), term(xcap, wcap);
    acc.add(0, 0, 0, Rational(1));
    term.add(0, 0, 0, Rational(1));
    for (int m = 1; m <= wcap; ++m) {
      term = term.mul(*this);
      for (auto& [k, v] : term.t) v /= Rational(m);
      if (term.t.empty()) break;
      for (const auto& [k, v] : term.t) acc.add(std::get<0>(k), std::get<1>(k), std::get<2>(k), v);
    }
    return acc;
  }
  // log of a series with constant term 1, all other terms weight >= 1
  TriSeries log1() const {
    TriSeries u = *this;
    auto it = u.t.find(std::make_tuple(0, 0, 0));
    if (it == u.t.end() || it->second != Rational(1))
      throw consistency_error("TriSeries::log1: constant term must be 1");
    u.t.erase(it);
    TriSeries acc(xcap, wcap), term(xcap, wcap);
    term.add(0, 0, 0, Rational(1));
    for (int m = 1; m <= wcap; ++m) {
      term = term.mul(u);
      if (term.t.empty()) break;
      Rational s((m % 2 == 1) ? 1 : -1, m);
      for (const auto& [k, v] : term.t) acc.add(std::get<0>(k), std::get<1>(k), std::get<2>(k), v * s);
    }
    return acc;
  }
  // Gaussian moments over w with variance hbar: w^t -> (t-1)!! hbar^{t/2}
  TriSeries moments() const {
    TriSeries r(xcap, wcap);
    for (const auto& [k, v] : t) {
      int tt = std::get<1>(k);
      if (tt % 2 != 0) continue;
      r.add(std::get<0>(k), 0, std::get<2>(k) + tt / 2, v * Rational(odd_double_factorial(tt)));
    }
    return r;
  }
};

std::mutex g_wickF_mu;
std::map<std::pair<int, int>, BiSeries> g_wickF_cache;

}  // namespace

BiSeries wick_free_energy(int xmax, int hmax) {
  {
    std::lock_guard<std::mutex> lock(g_wickF_mu);
    auto it = g_wickF_cache.find({xmax, hmax});
    if (it != g_wickF_cache.end()) return it->second;
  }
  int wcap = xmax + 2 * hmax;  // largest extractable weight 2g-2+n
  if (wcap < 1) wcap = 1;
  // U(x,w,hbar) = Omega(x + w, hbar); each monomial has weight 2g-2+n >= 1
  TriSeries U(xmax, wcap);
  for (int g = 0; 2 * g - 2 <= wcap; ++g) {
    for (int n = std::max(0, 3 - 2 * g); 2 * g - 2 + n <= wcap; ++n) {
      Rational c = chi_open(g, n);
      for (int i = 0; i <= n && i <= xmax; ++i) {
        int tt = n - i;
        U.add(i, tt, g - 1, c / Rational(Integer(factorial(i) * factorial(tt))));
      }
    }
  }
  TriSeries F = U.exp().moments().log1();
  int hmin = -(xmax / 3 + 2);
  BiSeries out(xmax, hmin, hmax);
  for (const auto& [k, v] : F.t) {
    if (std::get<1>(k) != 0) throw consistency_error("wick_free_energy: leftover Gaussian variable");
    if (out.in_window(std::get<0>(k), std::get<2>(k))) out.add_to(std::get<0>(k), std::get<2>(k), v);
  }
  std::lock_guard<std::mutex> lock(g_wickF_mu);
  g_wickF_cache.emplace(std::make_pair(xmax, hmax), out);
  return out;
}

namespace {
constexpr int kDefaultXmax = 10;
constexpr int kDefaultHmax = 6;
}  // namespace

Rational chi_bar_wick(int g, int n, int xmax, int hmax) {
  if (!stable_pair(g, n)) throw std::invalid_argument("chi_bar_wick: unstable (g,n)");
  if (xmax < 0) xmax = kDefaultXmax;
  if (hmax < 0) hmax = kDefaultHmax;
  if (n > xmax || g - 1 > hmax)
    throw std::invalid_argument("chi_bar_wick: requested (g,n) exceeds the configured window");
  BiSeries F = wick_free_energy(xmax, hmax);
  return F.coeff(n, g - 1) * Rational(factorial(n));
}

// ---------------- semiclassical expansion ----------------

namespace {

// Omega_g^{(j)}(y) as a univariate series in y, truncated at y^deg.
Polynomial omega_derivative_poly(int g, int j, int deg) {
  Polynomial p(deg + 1, Rational(0));
  for (int m = 0; m <= deg; ++m) {
    int n = m + j;
    if (!stable_pair(g, n)) continue;
    p[m] = chi_open(g, n) / Rational(factorial(m));
  }
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

}  // namespace

BiSeries ybar_series(int xmax, int hmax) {
  // a y-degree-m term meets x^{m-j} at hbar^j, so the polynomials must extend
  // hmax degrees past the x-window
  std::vector<Polynomial> omega_prime;
  for (int g = 0; g <= hmax; ++g) omega_prime.push_back(omega_derivative_poly(g, 1, xmax + hmax));
  return solve_fixed_point(omega_prime, xmax, hmax);
}

SemiclassicalF semiclassical_F(int xmax, int hmax) {
  // Largest extractable weight 2g-2+n; every vertex insertion carries positive
  // weight, so the weight-capped sparse ring truncates soundly. The pair
  // propagator hbar/(1-G) enters through the moment substitution, which never
  // lowers the weight.
  const int wcap = std::max(1, xmax + 2 * hmax);
  const int hy = wcap / 2 + 2;
  BiSeries ybar = ybar_series(xmax, hy);

  // tree part: -(ybar-x)^2/(2 hbar) + sum_g Omega_g(ybar) hbar^{g-1},
  // computed in a [-1, hmax+1] window so the single downward shift survives
  BiSeries yw = ybar.restricted(xmax, -1, hmax + 1);
  BiSeries d = yw - BiSeries::var_x(xmax, -1, hmax + 1);
  BiSeries tree = (d * d).scaled(Rational(-1, 2)).shifted(0, -1).restricted(xmax, -1, hmax);
  for (int g = 0; g - 1 <= hmax; ++g) {
    Polynomial om = omega_derivative_poly(g, 0, xmax + hmax + 2);
    if (om.empty()) continue;
    tree += poly_compose(om, yw).shifted(0, g - 1).restricted(xmax, -1, hmax);
  }

  // G = sum_g Omega_g''(ybar) hbar^g in a window tall enough for the moment
  // factors below
  BiSeries G(xmax, 0, hy);
  for (int g = 0; g <= hy; ++g) {
    Polynomial om2 = omega_derivative_poly(g, 2, xmax + hy);
    if (om2.empty()) continue;
    G += poly_compose(om2, ybar.restricted(xmax, 0, hy)).shifted(0, g);
  }
  BiSeries one_minus_G = BiSeries::constant(Rational(1), xmax, 0, hy) - G;
  BiSeries one_loop = log_series(one_minus_G).scaled(Rational(-1, 2)).restricted(xmax, -1, hmax);

  // multi-loop part: log <exp(sum_{k>=3} S_k w^k/k!)> with pair propagator
  // v = hbar/(1-G), assembled in the weight-capped (x, w, hbar) ring
  const int wdeg = wcap + 2;  // an insertion w^k hbar^{>= -1} has weight >= k-2
  TriSeries U(xmax, wcap);
  for (int k = 3; k <= wdeg; ++k) {
    Rational kfinv = Rational(1) / Rational(factorial(k));
    bool any = false;
    for (int g = 0; 2 * g - 2 + k <= wcap + 2; ++g) {
      Polynomial om = omega_derivative_poly(g, k, xmax + hy);
      if (om.empty()) continue;
      BiSeries sk = poly_compose(om, ybar.restricted(xmax, 0, hy));
      for (int i = 0; i <= xmax; ++i)
        for (int j = 0; j <= hy; ++j) {
          const Rational& c = sk.coeff(i, j);
          if (c.is_zero()) continue;
          U.add(i, k, j + g - 1, c * kfinv);
          any = true;
        }
    }
    (void)any;
  }
  TriSeries expectation = U.exp();
  // moment substitution w^t -> (t-1)!! v^{t/2}
  std::vector<BiSeries> vpow;  // v^m
  vpow.push_back(BiSeries::constant(Rational(1), xmax, 0, hy));
  BiSeries v1 = one_minus_G.inverse().shifted(0, 1).restricted(xmax, 0, hy);
  TriSeries momented(xmax, wcap);
  for (const auto& [key, c] : expectation.t) {
    auto [i, t, j] = key;
    if (t % 2 != 0) continue;
    while ((int)vpow.size() <= t / 2) vpow.push_back(vpow.back() * v1);
    const BiSeries& vp = vpow[t / 2];
    Rational base = c * Rational(odd_double_factorial(t));
    for (int iv = 0; iv + i <= xmax; ++iv)
      for (int jv = (t > 0 ? t / 2 : 0); jv <= hy; ++jv) {
        const Rational& cv = vp.coeff(iv, jv);
        if (cv.is_zero()) continue;
        momented.add(i + iv, 0, j + jv, base * cv);
      }
  }
  TriSeries logm = momented.log1();
  BiSeries multi_loop(xmax, -1, hmax);
  for (const auto& [key, c] : logm.t) {
    auto [i, t, j] = key;
    if (t != 0) throw consistency_error("semiclassical_F: leftover Gaussian variable");
    if (multi_loop.in_window(i, j)) multi_loop.add_to(i, j, c);
  }

  SemiclassicalF out{tree, one_loop, multi_loop, tree + one_loop + multi_loop, ybar};
  return out;
}

// ---------------- closed forms for F_0, F_1, F_2 ----------------

namespace {

Polynomial poly_trunc(Polynomial p, int deg) {
  if ((int)p.size() > deg + 1) p.resize(deg + 1);
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b, int deg) {
  Polynomial r(std::min<size_t>(deg + 1, a.size() + b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size() && i + j <= (size_t)deg; ++j) r[i + j] += a[i] * b[j];
  }
  return poly_trunc(r, deg);
}

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
  Polynomial r = a;
  if (r.size() < b.size()) r.resize(b.size(), Rational(0));
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  while (!r.empty() && r.back().is_zero()) r.pop_back();
  return r;
}

Polynomial poly_scale(Polynomial p, const Rational& c) {
  for (auto& v : p) v *= c;
  return p;
}

// composition q(s) for s with zero constant term
Polynomial poly_comp(const Polynomial& q, const Polynomial& s, int deg) {
  if (!s.empty() && !s[0].is_zero())
    throw std::invalid_argument("poly_comp: inner series needs zero constant term");
  Polynomial acc;
  for (size_t i = q.size(); i-- > 0;) {
    acc = poly_mul(acc, s, deg);
    if (!q[i].is_zero()) acc = poly_add(acc, {q[i]});
  }
  return poly_trunc(acc, deg);
}

Polynomial poly_inverse(const Polynomial& p, int deg) {
  if (p.empty() || p[0].is_zero()) throw std::invalid_argument("poly_inverse: zero constant term");
  Polynomial u = poly_scale(p, Rational(1) / p[0]);
  u[0] = Rational(0);
  u = poly_scale(u, Rational(-1));  // 1/p = 1/p0 * sum u^m
  Polynomial acc = {Rational(1)}, term = {Rational(1)};
  for (int m = 1; m <= deg; ++m) {
    term = poly_mul(term, u, deg);
    if (term.empty()) break;
    acc = poly_add(acc, term);
  }
  return poly_scale(acc, Rational(1) / p[0]);
}

Polynomial poly_log1m(const Polynomial& p, int deg) {
  // log(p) for p with constant term 1
  if (p.empty() || p[0] != Rational(1)) throw std::invalid_argument("poly_log1m: constant term must be 1");
  Polynomial u = p;
  u[0] = Rational(0);
  Polynomial acc, term = {Rational(1)};
  for (int m = 1; m <= deg; ++m) {
    term = poly_mul(term, u, deg);
    if (term.empty()) break;
    acc = poly_add(acc, poly_scale(term, Rational((m % 2 == 1) ? 1 : -1, m)));
  }
  return acc;
}

}  // namespace

ClosedF012 closed_form_F012(int xmax) {
  BiSeries ybar = ybar_series(xmax, 2);
  Polynomial y0 = hbar_row(ybar, 0);
  Polynomial y1 = hbar_row(ybar, 1);

  Polynomial om0 = omega_derivative_poly(0, 0, xmax);
  Polynomial om0p = omega_derivative_poly(0, 1, xmax);
  Polynomial om0pp = omega_derivative_poly(0, 2, xmax);
  Polynomial om1 = omega_derivative_poly(1, 0, xmax);
  Polynomial om1pp = omega_derivative_poly(1, 2, xmax);
  Polynomial om2 = omega_derivative_poly(2, 0, xmax);

  ClosedF012 out;
  Polynomial om0p_at = poly_comp(om0p, y0, xmax);
  out.F0 = poly_add(poly_comp(om0, y0, xmax),
                    poly_scale(poly_mul(om0p_at, om0p_at, xmax), Rational(-1, 2)));

  Polynomial E = poly_comp(om0pp, y0, xmax);  // Omega_0''(y0) = log(1+y0)
  Polynomial oneMinusE = poly_add({Rational(1)}, poly_scale(E, Rational(-1)));
  out.F1 = poly_add(poly_comp(om1, y0, xmax), poly_scale(poly_log1m(oneMinusE, xmax), Rational(-1, 2)));

  // two-loop closed form:
  //   F2 = Omega_2(y0) + (1-E) y1^2/2 + (y1/(1+y0) + Omega_1''(y0)) / (2(1-E))
  //        - 1/(8 (1+y0)^2 (1-E)^2) + 5/(24 (1+y0)^2 (1-E)^3),
  // with E = Omega_0''(y0) = log(1+y0) and y1 = Omega_1'(y0)/(1-E)
  Polynomial y1sq = poly_mul(y1, y1, xmax);
  Polynomial invE = poly_inverse(oneMinusE, xmax);
  Polynomial invE2 = poly_mul(invE, invE, xmax);
  Polynomial invE3 = poly_mul(invE2, invE, xmax);
  Polynomial onePlusY0 = poly_add({Rational(1)}, y0);
  Polynomial invY = poly_inverse(onePlusY0, xmax);
  Polynomial invY2 = poly_mul(invY, invY, xmax);

  Polynomial f2 = poly_comp(om2, y0, xmax);
  f2 = poly_add(f2, poly_scale(poly_mul(oneMinusE, y1sq, xmax), Rational(1, 2)));
  Polynomial bracket = poly_add(poly_mul(y1, invY, xmax), poly_comp(om1pp, y0, xmax));
  f2 = poly_add(f2, poly_scale(poly_mul(bracket, invE, xmax), Rational(1, 2)));
  f2 = poly_add(f2, poly_scale(poly_mul(invE2, invY2, xmax), Rational(-1, 8)));
  f2 = poly_add(f2, poly_scale(poly_mul(invE3, invY2, xmax), Rational(5, 24)));
  out.F2 = f2;
  return out;
}

}  // namespace mgn
