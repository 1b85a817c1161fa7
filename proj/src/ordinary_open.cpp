#include "mgn/ordinary_open.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "mgn/chi.hpp"
#include "mgn/numbers.hpp"

namespace mgn {

bool BranchDatum::satisfies_constraint(int g, int n) const {
  long msum = 0;
  for (int m : M) {
    if (m < 1 || m >= k || k % m != 0) return false;
    msum += m;
  }
  if ((int)M.size() != d || h < 0 || k < 1 || d < 0) return false;
  return 2L * g - 1 + n == (long)k * (2L * h - 1 + n + d) - msum;
}

namespace {

// multisets of values from divs (descending) with given size and sum
void msets(const std::vector<long>& divs, size_t di, int count, long sum, std::vector<int>& cur,
           const std::function<void(const std::vector<int>&)>& out) {
  if (count == 0) {
    if (sum == 0) out(cur);
    return;
  }
  for (size_t i = di; i < divs.size(); ++i) {
    long v = divs[i];
    if (v > sum) continue;
    if (v * count < sum) break;  // descending order: no remaining value can reach
    cur.push_back((int)v);
    msets(divs, i, count - 1, sum - v, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<BranchDatum> branch_data_enumerate(int g, int n, long k_cap) {
  if (n < 0 || 2 * g - 1 + n <= 0) throw std::invalid_argument("branch_data_enumerate: need 2g-1+n > 0");
  const long W = 2L * g - 1 + n;
  std::vector<BranchDatum> out;

  // deficiency bound: sum_r M_r/k <= sum of <= pd/k per point, minimum positive
  // gap 1/6 here (X = 1 admits at most two branch points), so k <= 6W
  const long kcap = (k_cap > 0) ? k_cap : 6 * W;
  for (long k = 1; k <= kcap; ++k) {
    std::vector<long> propdivs;
    for (long d : divisors(k))
      if (d < k) propdivs.push_back(d);
    std::sort(propdivs.rbegin(), propdivs.rend());
    const long pd = propdivs.empty() ? 0 : propdivs.front();
    for (int h = 0; h <= g; ++h) {
      for (int d = 0;; ++d) {
        long X = 2L * h - 1 + n + d;
        long msum = k * X - W;
        if (d == 0) {
          if (msum == 0 && X >= 1) out.push_back(BranchDatum{h, (int)k, 0, {}});
          if (msum >= 0 && pd == 0) break;  // k = 1 admits no branch points
          if (msum > 0) break;              // msum - d*pd only grows with d
          continue;
        }
        if (pd == 0 || msum > (long)d * pd) break;
        if (msum < d) continue;
        std::vector<int> cur;
        msets(propdivs, 0, d, msum, cur, [&](const std::vector<int>& M) {
          BranchDatum b{h, (int)k, d, M};
          std::sort(b.M.begin(), b.M.end());
          if (!b.satisfies_constraint(g, n))
            throw consistency_error("branch_data_enumerate: generated datum fails the constraint");
          out.push_back(b);
        });
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const BranchDatum& a, const BranchDatum& b) {
    return std::tie(a.k, a.h, a.d, a.M) < std::tie(b.k, b.h, b.d, b.M);
  });
  return out;
}

Rational e_open_term(int g, int n, const BranchDatum& b) {
  if (!b.satisfies_constraint(g, n)) throw std::invalid_argument("e_open_term: datum/target mismatch");
  // multiset multiplicity correction: sum over ordered tuples / d! = 1 / prod mult!
  Rational mult(1);
  for (size_t i = 0; i < b.M.size();) {
    size_t j = i;
    while (j < b.M.size() && b.M[j] == b.M[i]) ++j;
    mult *= Rational(factorial((long)(j - i)));
    i = j;
  }
  Rational deltasum(0);
  for (long delta : divisors(b.k)) {
    long mu = moebius(delta);
    if (mu == 0) continue;
    Rational term = Rational(c_value(b.k, 1, delta)).pow(n);
    for (int m : b.M) term *= Rational(c_value(b.k, m, delta));
    deltasum += Rational(mu) * term;
  }
  Rational v = Rational(euler_phi(b.k), b.k) * chi_open(b.h, b.d + 1 + n) / mult;
  v *= Rational(Integer(b.k)).pow(2 * b.h - 1) * deltasum;
  return v;
}

Integer e_open(int g, int n_plus_1) {
  if (n_plus_1 < 1) throw std::invalid_argument("e_open: needs at least one marked point");
  int n = n_plus_1 - 1;
  if (2 * g - 1 + n <= 0) throw std::invalid_argument("e_open: requires 2g-1+n > 0");
  Rational total(0);
  for (const BranchDatum& b : branch_data_enumerate(g, n)) total += e_open_term(g, n, b);
  if (!total.is_integer()) throw consistency_error("e_open: non-integer total " + total.str());
  return total.to_integer();
}

Table1 table1_compute(int jobs) {
  Table1 t;
  int rows = Table1::g_hi - Table1::g_lo + 1;
  int cols = Table1::n_hi - Table1::n_lo + 1;
  t.values.assign(rows, std::vector<Integer>(cols, Integer(0)));
  std::atomic<int> next{0};
  auto work = [&]() {
    while (true) {
      int cell = next.fetch_add(1);
      if (cell >= rows * cols) break;
      int g = Table1::g_lo + cell / cols;
      int n = Table1::n_lo + cell % cols;
      t.values[g - Table1::g_lo][n - Table1::n_lo] = e_open(g, n + 1);
    }
  };
  if (jobs < 1) jobs = (int)std::thread::hardware_concurrency();
  jobs = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < jobs; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return t;
}

}  // namespace mgn
