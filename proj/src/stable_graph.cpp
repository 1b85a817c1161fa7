#include "mgn/stable_graph.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace mgn {

int StableGraph::edge_count() const {
  int paired = 0;
  for (int p : half_pair)
    if (p >= 0) ++paired;
  return paired / 2;
}

std::vector<int> StableGraph::legs_at() const {
  std::vector<int> r(vertex_count(), 0);
  for (int h = 0; h < half_edge_count(); ++h)
    if (half_pair[h] < 0) ++r[half_owner[h]];
  return r;
}

std::vector<int> StableGraph::valence_at() const {
  std::vector<int> r(vertex_count(), 0);
  for (int h = 0; h < half_edge_count(); ++h) ++r[half_owner[h]];
  return r;
}

void StableGraph::validate() const {
  if (n <= 2 - 2 * g || n < 0) throw consistency_error("StableGraph: unstable type (g,n)");
  if (vertex_count() < 1) throw consistency_error("StableGraph: no vertices");
  int H = half_edge_count();
  if ((int)half_pair.size() != H || (int)leg_label.size() != H)
    throw consistency_error("StableGraph: inconsistent half-edge arrays");
  std::vector<bool> seen_label(n + 1, false);
  for (int h = 0; h < H; ++h) {
    if (half_owner[h] < 0 || half_owner[h] >= vertex_count())
      throw consistency_error("StableGraph: half-edge owner out of range");
    if (half_pair[h] < 0) {
      int lab = leg_label[h];
      if (lab < 1 || lab > n || seen_label[lab]) throw consistency_error("StableGraph: bad leg labels");
      seen_label[lab] = true;
    } else {
      int q = half_pair[h];
      if (q < 0 || q >= H || q == h || half_pair[q] != h || leg_label[h] != 0)
        throw consistency_error("StableGraph: pairing is not a fixed-point-free involution");
    }
  }
  for (int lab = 1; lab <= n; ++lab)
    if (!seen_label[lab]) throw consistency_error("StableGraph: missing leg label");
  auto val = valence_at();
  for (int v = 0; v < vertex_count(); ++v) {
    if (genus[v] < 0) throw consistency_error("StableGraph: negative genus label");
    if (2 * genus[v] - 2 + val[v] <= 0) throw consistency_error("StableGraph: unstable vertex");
  }
  int gsum = std::accumulate(genus.begin(), genus.end(), 0);
  if (g != gsum + betti()) throw consistency_error("StableGraph: genus identity violated");
  // connectivity
  std::vector<int> root(vertex_count());
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int v) { return root[v] == v ? v : root[v] = find(root[v]); };
  for (int h = 0; h < H; ++h)
    if (half_pair[h] >= 0) root[find(half_owner[h])] = find(half_owner[half_pair[h]]);
  for (int v = 1; v < vertex_count(); ++v)
    if (find(v) != find(0)) throw consistency_error("StableGraph: disconnected");
}

namespace {

// Per-vertex data extracted once for the color machinery.
struct VertexData {
  int p = 0;
  std::vector<int> genus;
  std::vector<std::vector<int>> legs;  // sorted labels
  std::vector<std::vector<int>> emat;  // multiplicities, loops on diagonal
};

VertexData extract(const StableGraph& G) {
  VertexData d;
  d.p = G.vertex_count();
  d.genus = G.genus;
  d.legs.assign(d.p, {});
  d.emat.assign(d.p, std::vector<int>(d.p, 0));
  for (int h = 0; h < G.half_edge_count(); ++h) {
    if (G.half_pair[h] < 0) {
      d.legs[G.half_owner[h]].push_back(G.leg_label[h]);
    } else if (G.half_pair[h] > h) {
      int a = G.half_owner[h], b = G.half_owner[G.half_pair[h]];
      d.emat[a][b] += 1;
      if (a != b) d.emat[b][a] += 1;
    }
  }
  for (auto& l : d.legs) std::sort(l.begin(), l.end());
  return d;
}

// Canonically renumbered color refinement. Colors start from (genus, legs) and
// are refined by loop count and per-color edge multiplicity profiles until the
// partition stabilizes. Returns per-vertex color ids; ids are order-invariant
// because each round renumbers by sorted key.
std::vector<int> refine_colors(const VertexData& d) {
  std::vector<std::vector<int>> key(d.p);
  for (int v = 0; v < d.p; ++v) {
    key[v] = {d.genus[v], (int)d.legs[v].size()};
    for (int lab : d.legs[v]) key[v].push_back(lab);
  }
  std::vector<int> color(d.p, 0);
  auto renumber = [&]() {
    std::vector<std::vector<int>> sorted = key;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> c(d.p);
    for (int v = 0; v < d.p; ++v)
      c[v] = (int)(std::lower_bound(sorted.begin(), sorted.end(), key[v]) - sorted.begin());
    int classes = (int)sorted.size();
    bool changed = (c != color);
    color = c;
    return std::pair<int, bool>(classes, changed);
  };
  auto [classes, _] = renumber();
  while (true) {
    for (int v = 0; v < d.p; ++v) {
      key[v] = {color[v], d.emat[v][v]};
      std::vector<int> profile(classes, 0);
      for (int u = 0; u < d.p; ++u)
        if (u != v) profile[color[u]] += d.emat[v][u];
      key[v].insert(key[v].end(), profile.begin(), profile.end());
    }
    auto [nc, changed] = renumber();
    classes = nc;
    if (!changed) break;
  }
  return color;
}

// Counts half-edge maps compatible with a fixed vertex bijection sigma:
// bijections of half-edges preserving owners (through sigma), fixing legs
// pointwise and commuting with the edge involution. Counted by explicit
// backtracking over edges.
long long count_halfedge_extensions(const VertexData& d, const std::vector<int>& sigma) {
  // collect edges as (a, b, index within bundle)
  struct Edge {
    int a, b;
  };
  std::vector<Edge> edges;
  for (int a = 0; a < d.p; ++a)
    for (int b = a; b < d.p; ++b)
      for (int m = 0; m < d.emat[a][b]; ++m) edges.push_back({a, b});
  // target bundle usage counters
  std::map<std::pair<int, int>, int> used;
  std::function<long long(size_t)> rec = [&](size_t i) -> long long {
    if (i == edges.size()) return 1;
    auto [a, b] = edges[i];
    int ta = std::min(sigma[a], sigma[b]), tb = std::max(sigma[a], sigma[b]);
    int avail = d.emat[ta][tb] - used[{ta, tb}];
    if (avail <= 0) return 0;
    ++used[{ta, tb}];
    long long sub = rec(i + 1);
    --used[{ta, tb}];
    // each remaining copy of the target bundle is a distinct image; loops also
    // admit the half-edge swap
    long long orient = (a == b) ? 2 : 1;
    return sub * avail * orient;
  };
  return rec(0);
}

// Backtracks over color-preserving vertex bijections; calls out(sigma) for each
// one that preserves the edge matrix.
void for_each_vertex_automorphism(const VertexData& d, const std::vector<int>& color,
                                  const std::function<void(const std::vector<int>&)>& out) {
  std::vector<int> order(d.p);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> sigma(d.p, -1);
  std::vector<bool> taken(d.p, false);
  std::function<void(int)> rec = [&](int i) {
    if (i == d.p) {
      out(sigma);
      return;
    }
    int v = i;
    for (int u = 0; u < d.p; ++u) {
      if (taken[u] || color[u] != color[v]) continue;
      if (d.emat[v][v] != d.emat[u][u]) continue;
      bool ok = true;
      for (int w = 0; w < i && ok; ++w)
        if (d.emat[v][w] != d.emat[u][sigma[w]]) ok = false;
      if (!ok) continue;
      sigma[v] = u;
      taken[u] = true;
      rec(i + 1);
      taken[u] = false;
      sigma[v] = -1;
    }
  };
  rec(0);
}

}  // namespace

long long aut_order(const StableGraph& G) {
  VertexData d = extract(G);
  std::vector<int> color = refine_colors(d);
  long long total = 0;
  for_each_vertex_automorphism(d, color, [&](const std::vector<int>& sigma) {
    total += count_halfedge_extensions(d, sigma);
  });
  return total;
}

std::vector<int> canonical_encoding(const StableGraph& G) {
  VertexData d = extract(G);
  std::vector<int> color = refine_colors(d);
  // vertices sorted by color; ties broken by trying every order within a class
  std::vector<int> base(d.p);
  std::iota(base.begin(), base.end(), 0);
  std::sort(base.begin(), base.end(), [&](int a, int b) { return color[a] < color[b]; });

  std::vector<int> best;
  std::vector<int> perm = base;  // perm[newIndex] = oldVertex
  auto encode = [&]() {
    std::vector<int> e = {d.p, G.n, G.g};
    for (int i = 0; i < d.p; ++i) {
      int v = perm[i];
      e.push_back(d.genus[v]);
      e.push_back((int)d.legs[v].size());
      for (int lab : d.legs[v]) e.push_back(lab);
    }
    for (int i = 0; i < d.p; ++i)
      for (int j = i; j < d.p; ++j) e.push_back(d.emat[perm[i]][perm[j]]);
    return e;
  };
  // enumerate permutations within color classes
  std::function<void(int)> rec = [&](int i) {
    if (i == d.p) {
      std::vector<int> e = encode();
      if (best.empty() || e < best) best = e;
      return;
    }
    int j = i;
    while (j < d.p && color[perm[j]] == color[perm[i]]) ++j;
    std::sort(perm.begin() + i, perm.begin() + j);
    do {
      rec(j);
    } while (std::next_permutation(perm.begin() + i, perm.begin() + j));
  };
  rec(0);
  return best;
}

StableGraph graph_from_class_data(int g, int n, const std::vector<int>& genus,
                                  const std::vector<std::vector<int>>& legs,
                                  const std::vector<std::vector<int>>& emat) {
  StableGraph G;
  G.g = g;
  G.n = n;
  G.genus = genus;
  int p = (int)genus.size();
  // legs first (per vertex, ascending label), then edge half-edges bundle by bundle
  for (int v = 0; v < p; ++v)
    for (int lab : legs[v]) {
      G.half_owner.push_back(v);
      G.half_pair.push_back(-1);
      G.leg_label.push_back(lab);
    }
  for (int a = 0; a < p; ++a)
    for (int b = a; b < p; ++b)
      for (int m = 0; m < emat[a][b]; ++m) {
        int h1 = (int)G.half_owner.size();
        G.half_owner.push_back(a);
        G.half_pair.push_back(h1 + 1);
        G.leg_label.push_back(0);
        G.half_owner.push_back(b);
        G.half_pair.push_back(h1);
        G.leg_label.push_back(0);
      }
  return G;
}

namespace {

// ---------------- class generator ----------------

struct GenBuffers {
  int g, n, betti_filter, W;
  std::vector<int> maxdeg;
  std::vector<std::vector<int>> legs;  // per vertex (first k have blocks, rest empty)
  std::vector<int> genus;
  std::vector<std::vector<int>> emat;
  std::vector<int> degree;
  std::vector<int> uf;
  int legless_lo = 0;  // first legless vertex index
  const std::function<void(const ClassView&)>* fn = nullptr;
};

// Canonicity rule: among all permutations of legless vertices preserving the
// (non-decreasing) genus labels, the edge matrix must be lexicographically
// minimal in lower-triangle row-major cell order ((i,j), j <= i). The same
// branch-and-bound walk counts the stabilizer. Returns 0 when a strictly
// smaller permutation exists, the stabilizer order otherwise.
long long canonicity_stabilizer(const GenBuffers& B, int p, int k) {
  if (p - k <= 1) return 1;
  bool has_twin = false;
  for (int v = k + 1; v < p && !has_twin; ++v)
    if (B.genus[v] == B.genus[v - 1]) has_twin = true;
  if (!has_twin) return 1;  // no nontrivial genus-preserving permutation

  std::vector<int> perm(p);
  std::vector<bool> used(p, false);
  long long stab = 0;
  bool smaller = false;
  std::function<void(int)> rec = [&](int i) {
    if (smaller) return;
    if (i == p) {
      ++stab;
      return;
    }
    if (i < k) {
      perm[i] = i;
      rec(i + 1);
      return;
    }
    for (int u = k; u < p; ++u) {
      if (used[u] || B.genus[u] != B.genus[i]) continue;
      // compare permuted row i against the original, cells (i, 0..i)
      int cmp = 0;
      for (int j = 0; j <= i && cmp == 0; ++j) {
        int a = B.emat[u][j == i ? u : perm[j]];
        int b = B.emat[i][j];
        if (a != b) cmp = (a < b) ? -1 : 1;
      }
      if (cmp > 0) continue;  // this branch only yields larger matrices
      if (cmp < 0) {
        smaller = true;
        return;
      }
      perm[i] = u;
      used[u] = true;
      rec(i + 1);
      used[u] = false;
      if (smaller) return;
    }
  };
  rec(0);
  return smaller ? 0 : stab;
}

// True when swapping the adjacent equal-genus legless vertices v-1 and v makes
// the candidate smaller in the same lower-triangle cell order, using only the
// cells decided once row v is filled. A canonical matrix is minimal under
// every transposition, so strict decrease prunes soundly; ties stay.
bool swap_decreases(const GenBuffers& B, int p, int v) {
  (void)p;
  auto sw = [&](int a) { return a == v ? v - 1 : (a == v - 1 ? v : a); };
  for (int i = 0; i <= v; ++i)
    for (int j = 0; j <= i; ++j) {
      int a = B.emat[sw(i)][sw(j)];
      int b = B.emat[i][j];
      if (a != b) return a < b;
    }
  return false;
}

bool connected(GenBuffers& B, int p) {
  if (p == 1) return true;
  std::vector<int>& root = B.uf;
  for (int v = 0; v < p; ++v) root[v] = v;
  auto find = [&](int v) {
    while (root[v] != v) v = root[v] = root[root[v]];
    return v;
  };
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      if (B.emat[a][b] > 0) root[find(a)] = find(b);
  for (int v = 1; v < p; ++v)
    if (find(v) != find(0)) return false;
  return true;
}

void emit(GenBuffers& B, int p, int k, int betti) {
  long long stab = canonicity_stabilizer(B, p, k);
  if (stab == 0) return;
  long long aut = stab;
  for (int a = 0; a < p; ++a) {
    for (int m = 2; m <= B.emat[a][a]; ++m) aut *= m;  // loop bundle permutations
    for (int m = 0; m < B.emat[a][a]; ++m) aut *= 2;   // loop half-edge swaps
    for (int b = a + 1; b < p; ++b)
      for (int m = 2; m <= B.emat[a][b]; ++m) aut *= m;  // parallel edge permutations
  }
  ClassView view{B.genus, B.legs, B.emat, aut, betti};
  (*B.fn)(view);
}

// recursion over upper-triangle cells (v,u), u >= v, row-major
void fill_matrix(GenBuffers& B, int p, int k, int betti, int v, int u, int budget,
                 const std::vector<int>& need) {
  if (v == p) {
    if (budget == 0 && connected(B, p)) emit(B, p, k, betti);
    return;
  }
  // weight bound: every remaining edge supplies two half-edge endpoints
  int deficit = 0;
  for (int w = v; w < p; ++w) deficit += std::max(0, need[w] - B.degree[w]);
  if (deficit > 2 * budget) return;

  if (u == p) {
    if (B.degree[v] < need[v]) return;
    if (v > B.legless_lo && B.genus[v] == B.genus[v - 1] && swap_decreases(B, p, v)) return;
    fill_matrix(B, p, k, betti, v + 1, v + 1, budget, need);
    return;
  }
  int mcap = budget;
  if (u == v) mcap = std::min(mcap, (B.maxdeg[v] - B.degree[v]) / 2);
  else mcap = std::min({mcap, B.maxdeg[v] - B.degree[v], B.maxdeg[u] - B.degree[u]});
  for (int m = 0; m <= mcap; ++m) {
    B.emat[v][u] = m;
    B.emat[u][v] = m;
    int dv = (u == v) ? 2 * m : m;
    B.degree[v] += dv;
    if (u != v) B.degree[u] += m;
    fill_matrix(B, p, k, betti, v, u + 1, budget - m, need);
    B.degree[v] -= dv;
    if (u != v) B.degree[u] -= m;
  }
  B.emat[v][u] = 0;
  B.emat[u][v] = 0;
}

void enumerate_for_legs(GenBuffers& B, int p, int k, int gsum_select) {
  // genus assignment: legged free, legless non-decreasing; then edge matrices
  std::vector<int> need(p, 0);
  std::function<void(int, int)> genus_rec = [&](int v, int gsum) {
    if (v == p) {
      if (gsum_select >= 0 && gsum != gsum_select) return;
      int h1 = B.g - gsum;
      if (h1 < 0) return;
      if (B.betti_filter != kAllBetti && h1 != B.betti_filter) return;
      int e = h1 + p - 1;
      int need_sum = 0;
      for (int w = 0; w < p; ++w) {
        int legs = (int)B.legs[w].size();
        need[w] = std::max(0, 3 - 2 * B.genus[w] - legs);
        if (p >= 2) need[w] = std::max(need[w], 1);
        need_sum += need[w];
      }
      int slack = 2 * e - need_sum;
      if (slack < 0) return;
      B.maxdeg.assign(p, 0);
      for (int w = 0; w < p; ++w) B.maxdeg[w] = need[w] + slack;
      for (auto& row : B.emat) std::fill(row.begin(), row.end(), 0);
      B.degree.assign(p, 0);
      fill_matrix(B, p, k, h1, 0, 0, e, need);
      return;
    }
    int lo = 0;
    if (v > k && v > 0 && v - 1 >= k) lo = B.genus[v - 1];  // legless sorted non-decreasing
    for (int gv = lo; gsum + gv <= B.g; ++gv) {
      B.genus[v] = gv;
      genus_rec(v + 1, gsum + gv);
    }
  };
  genus_rec(0, 0);
}

void run_task(int g, int n, int betti_filter, const std::vector<std::vector<int>>& blocks, int p,
              int gsum_select, const std::function<void(const ClassView&)>& fn) {
  int k = (int)blocks.size();
  GenBuffers B;
  B.g = g;
  B.n = n;
  B.betti_filter = betti_filter;
  B.W = 2 * g - 2 + n;
  B.fn = &fn;
  B.legs.assign(p, {});
  for (int i = 0; i < k; ++i) B.legs[i] = blocks[i];
  B.genus.assign(p, 0);
  B.emat.assign(p, std::vector<int>(p, 0));
  B.degree.assign(p, 0);
  B.uf.assign(p, 0);
  B.legless_lo = k;
  enumerate_for_legs(B, p, k, gsum_select);
}

void partitions_rec(int n, int item, std::vector<std::vector<int>>& blocks,
                    const std::function<void(const std::vector<std::vector<int>>&)>& out) {
  if (item > n) {
    out(blocks);
    return;
  }
  for (size_t b = 0; b < blocks.size(); ++b) {
    blocks[b].push_back(item);
    partitions_rec(n, item + 1, blocks, out);
    blocks[b].pop_back();
  }
  blocks.push_back({item});
  partitions_rec(n, item + 1, blocks, out);
  blocks.pop_back();
}

}  // namespace

void for_each_stable_graph_class(int g, int n, int betti_filter,
                                 const std::function<void(const ClassView&)>& fn, int jobs) {
  if (g < 0 || n < 0 || n <= 2 - 2 * g)
    throw std::invalid_argument("for_each_stable_graph_class: unstable (g,n)");
  int W = 2 * g - 2 + n;

  // task list: (leg partition, vertex count, genus-sum slice)
  struct Task {
    std::vector<std::vector<int>> blocks;
    int p;
    int gsum;
  };
  std::vector<Task> tasks;
  auto add_tasks = [&](const std::vector<std::vector<int>>& blocks) {
    int k = (int)blocks.size();
    for (int p = std::max(k, 1); p <= W; ++p) {
      if (n == 0) {
        for (int gs = 0; gs <= g; ++gs) tasks.push_back({blocks, p, gs});
      } else {
        tasks.push_back({blocks, p, -1});
      }
    }
  };
  if (n == 0) {
    add_tasks({});
  } else {
    std::vector<std::vector<int>> blocks;
    partitions_rec(n, 1, blocks, add_tasks);
  }

  if (jobs < 1) jobs = (int)std::thread::hardware_concurrency();
  jobs = std::max(1, std::min<int>(jobs, (int)tasks.size()));
  if (jobs == 1) {
    for (auto& t : tasks) run_task(g, n, betti_filter, t.blocks, t.p, t.gsum, fn);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&]() {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        run_task(g, n, betti_filter, tasks[i].blocks, tasks[i].p, tasks[i].gsum, fn);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<GraphClass> enumerate_stable_graphs(int g, int n, int betti_filter) {
  std::vector<GraphClass> out;
  std::mutex mu;
  for_each_stable_graph_class(
      g, n, betti_filter,
      [&](const ClassView& view) {
        StableGraph G = graph_from_class_data(g, n, view.genus, view.legs, view.emat);
        G.validate();
        long long aut = aut_order(G);
        if (aut != view.aut_order)
          throw consistency_error("enumerate_stable_graphs: automorphism count mismatch");
        std::lock_guard<std::mutex> lock(mu);
        out.push_back(GraphClass{std::move(G), aut, view.betti});
      },
      1);
  std::sort(out.begin(), out.end(), [](const GraphClass& a, const GraphClass& b) {
    return canonical_encoding(a.canonical) < canonical_encoding(b.canonical);
  });
  return out;
}

std::vector<Pairing> enumerate_pairings(const std::vector<int>& slot_owner, bool require_connected) {
  size_t m = slot_owner.size();
  if (m % 2 != 0) throw std::invalid_argument("enumerate_pairings: odd slot count");
  std::vector<Pairing> out;
  Pairing cur;
  std::vector<bool> used(m, false);
  std::function<void()> rec = [&]() {
    size_t first = 0;
    while (first < m && used[first]) ++first;
    if (first == m) {
      if (require_connected) {
        int p = 0;
        for (int v : slot_owner) p = std::max(p, v + 1);
        if (p > 0) {
          std::vector<int> root(p);
          std::iota(root.begin(), root.end(), 0);
          std::function<int(int)> find = [&](int v) { return root[v] == v ? v : root[v] = find(root[v]); };
          for (auto& [a, b] : cur) root[find(slot_owner[a])] = find(slot_owner[b]);
          for (int v = 1; v < p; ++v)
            if (find(v) != find(0)) return;
        }
      }
      out.push_back(cur);
      return;
    }
    used[first] = true;
    for (size_t j = first + 1; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      cur.push_back({(int)first, (int)j});
      rec();
      cur.pop_back();
      used[j] = false;
    }
    used[first] = false;
  };
  rec();
  return out;
}

std::string graph_catalog_json(int g, int n, int betti_filter) {
  auto classes = enumerate_stable_graphs(g, n, betti_filter);
  std::ostringstream os;
  os << "{\"format_version\":1,\"g\":" << g << ",\"n\":" << n << ",\"classes\":[";
  for (size_t i = 0; i < classes.size(); ++i) {
    const StableGraph& G = classes[i].canonical;
    if (i) os << ",";
    os << "{\"genus_labels\":[";
    for (int v = 0; v < G.vertex_count(); ++v) os << (v ? "," : "") << G.genus[v];
    os << "],\"edges\":[";
    bool first = true;
    for (int h = 0; h < G.half_edge_count(); ++h)
      if (G.half_pair[h] > h) {
        if (!first) os << ",";
        first = false;
        os << "[" << h << "," << G.half_pair[h] << "]";
      }
    os << "],\"leg_labels\":[";
    first = true;
    for (int h = 0; h < G.half_edge_count(); ++h)
      if (G.half_pair[h] < 0) {
        if (!first) os << ",";
        first = false;
        os << "[" << h << "," << G.leg_label[h] << "]";
      }
    os << "],\"aut_order\":" << classes[i].aut_order << ",\"betti\":" << classes[i].betti << "}";
  }
  os << "]}";
  return os.str();
}

}  // namespace mgn
