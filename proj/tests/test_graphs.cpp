#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "mgn/stable_graph.hpp"

using namespace mgn;

namespace {

// shuffle half-edge indices and vertex order of a graph
StableGraph relabel(const StableGraph& G, std::mt19937& rng) {
  int H = G.half_edge_count();
  int p = G.vertex_count();
  std::vector<int> hperm(H), vperm(p);
  std::iota(hperm.begin(), hperm.end(), 0);
  std::iota(vperm.begin(), vperm.end(), 0);
  std::shuffle(hperm.begin(), hperm.end(), rng);
  std::shuffle(vperm.begin(), vperm.end(), rng);
  StableGraph R;
  R.g = G.g;
  R.n = G.n;
  R.genus.resize(p);
  for (int v = 0; v < p; ++v) R.genus[vperm[v]] = G.genus[v];
  R.half_owner.assign(H, 0);
  R.half_pair.assign(H, -1);
  R.leg_label.assign(H, 0);
  for (int h = 0; h < H; ++h) {
    R.half_owner[hperm[h]] = vperm[G.half_owner[h]];
    R.half_pair[hperm[h]] = G.half_pair[h] < 0 ? -1 : hperm[G.half_pair[h]];
    R.leg_label[hperm[h]] = G.leg_label[h];
  }
  return R;
}

// exhaustive generator with ordered vertices and no canonicity filtering:
// independent completeness check for the production enumerator
void brute_force_classes(int g, int n, std::map<std::vector<int>, int>& out) {
  int W = 2 * g - 2 + n;
  for (int p = 1; p <= W; ++p) {
    std::vector<int> genus(p), legto(n);
    std::vector<std::vector<int>> emat(p, std::vector<int>(p, 0));
    std::function<void(int)> edges_rec;
    std::function<void(int, int)> genus_rec = [&](int v, int sum) {
      if (v == p) {
        int h1 = g - sum;
        if (h1 < 0) return;
        int e = h1 + p - 1;
        // legs: every assignment of labelled legs to vertices
        std::function<void(int)> legs_rec = [&](int i) {
          if (i == n) {
            // edge multiset over cells
            std::vector<std::pair<int, int>> cells;
            for (int a = 0; a < p; ++a)
              for (int b = a; b < p; ++b) cells.push_back({a, b});
            std::function<void(size_t, int)> cell_rec = [&](size_t ci, int left) {
              if (left == 0) {
                // stability + connectivity via StableGraph::validate
                std::vector<std::vector<int>> legs(p);
                for (int l = 0; l < n; ++l) legs[legto[l]].push_back(l + 1);
                StableGraph G = graph_from_class_data(g, n, genus, legs, emat);
                try {
                  G.validate();
                } catch (const consistency_error&) {
                  return;
                }
                ++out[canonical_encoding(G)];
                return;
              }
              if (ci == cells.size()) return;
              cell_rec(ci + 1, left);
              auto [a, b] = cells[ci];
              emat[a][b] += 1;
              if (a != b) emat[b][a] += 1;
              cell_rec(ci, left - 1);
              emat[a][b] -= 1;
              if (a != b) emat[b][a] -= 1;
            };
            cell_rec(0, e);
            return;
          }
          for (int v2 = 0; v2 < p; ++v2) {
            legto[i] = v2;
            legs_rec(i + 1);
          }
        };
        legs_rec(0);
        return;
      }
      for (int gv = 0; sum + gv <= g; ++gv) {
        genus[v] = gv;
        genus_rec(v + 1, sum + gv);
      }
    };
    genus_rec(0, 0);
  }
}

}  // namespace

TEST_CASE("class counts for the anchor types") {
  CHECK(enumerate_stable_graphs(0, 3).size() == 1);
  CHECK(enumerate_stable_graphs(1, 1).size() == 2);
  CHECK(enumerate_stable_graphs(2, 0).size() == 7);
  CHECK_THROWS_AS(enumerate_stable_graphs(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_stable_graphs(1, 0), std::invalid_argument);
}

TEST_CASE("the seven strata of the genus-2 compactification") {
  auto classes = enumerate_stable_graphs(2, 0);
  // multiset of (sorted genus labels, edge count, |Aut|)
  std::multiset<std::tuple<std::vector<int>, int, long long>> got;
  for (const auto& c : classes) {
    std::vector<int> gs = c.canonical.genus;
    std::sort(gs.begin(), gs.end());
    got.insert({gs, c.canonical.edge_count(), c.aut_order});
  }
  std::multiset<std::tuple<std::vector<int>, int, long long>> expect = {
      {{2}, 0, 1},        // smooth
      {{1}, 1, 2},        // genus-1 vertex with a loop
      {{0}, 2, 8},        // two loops
      {{1, 1}, 1, 2},     // two elliptic components
      {{0, 1}, 2, 2},     // elliptic joined to a nodal rational
      {{0, 0}, 3, 8},     // two nodal rationals joined
      {{0, 0}, 3, 12},    // theta graph
  };
  CHECK(got == expect);
}

TEST_CASE("aut_order examples") {
  // single vertex, no edges
  auto pt = enumerate_stable_graphs(0, 3)[0];
  CHECK(pt.aut_order == 1);
  // genus-0 vertex with one loop and one leg
  for (const auto& c : enumerate_stable_graphs(1, 1))
    if (c.canonical.edge_count() == 1) CHECK(c.aut_order == 2);
  // theta graph: 2 x 3! = 12, seen in the genus-2 list above
}

TEST_CASE("canonical encoding and aut are relabeling invariants") {
  std::mt19937 rng(99);
  for (auto [g, n] : std::vector<std::pair<int, int>>{{1, 1}, {2, 0}, {1, 2}, {0, 5}, {2, 1}}) {
    for (const auto& c : enumerate_stable_graphs(g, n)) {
      auto enc = canonical_encoding(c.canonical);
      for (int trial = 0; trial < 200; ++trial) {
        StableGraph R = relabel(c.canonical, rng);
        R.validate();
        REQUIRE(canonical_encoding(R) == enc);
        REQUIRE(aut_order(R) == c.aut_order);
      }
    }
  }
}

TEST_CASE("production enumerator matches the brute-force generator") {
  for (auto [g, n] : std::vector<std::pair<int, int>>{
           {0, 3}, {0, 4}, {0, 5}, {0, 6}, {1, 1}, {1, 2}, {1, 3}, {2, 0}, {2, 1}, {2, 2}, {3, 0}}) {
    std::map<std::vector<int>, int> brute;
    brute_force_classes(g, n, brute);
    auto classes = enumerate_stable_graphs(g, n);
    REQUIRE(classes.size() == brute.size());
    std::set<std::vector<int>> prod;
    for (const auto& c : classes) prod.insert(canonical_encoding(c.canonical));
    std::set<std::vector<int>> bf;
    for (const auto& [enc, cnt] : brute) bf.insert(enc);
    REQUIRE(prod == bf);
  }
}

TEST_CASE("pairing enumeration") {
  CHECK(enumerate_pairings({0, 0, 0, 0}, false).size() == 3);
  CHECK(enumerate_pairings({0, 1}, true).size() == 1);
  // two slots on each of two vertices: the all-loops matching is disconnected
  CHECK(enumerate_pairings({0, 0, 1, 1}, true).size() == 2);
  CHECK(enumerate_pairings({0, 0, 1, 1}, false).size() == 3);
  CHECK_THROWS_AS(enumerate_pairings({0, 0, 0}, false), std::invalid_argument);
}

TEST_CASE("graph invariants hold on every enumerated class") {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}, {4, 0}}) {
    for (const auto& c : enumerate_stable_graphs(g, n)) {
      c.canonical.validate();
      CHECK(c.betti == c.canonical.betti());
      CHECK(c.aut_order >= 1);
    }
  }
}

TEST_CASE("catalog JSON is stable and well formed") {
  std::string a = graph_catalog_json(1, 1);
  std::string b = graph_catalog_json(1, 1);
  CHECK(a == b);
  CHECK(a.find("\"format_version\":1") != std::string::npos);
  CHECK(a.find("\"aut_order\":2") != std::string::npos);
  std::string trees = graph_catalog_json(2, 0, 0);
  CHECK(trees.find("\"betti\":0") != std::string::npos);
  CHECK(trees.find("\"betti\":1") == std::string::npos);
}

TEST_CASE("validate rejects broken graphs") {
  StableGraph G;
  G.g = 1;
  G.n = 1;
  G.genus = {1};
  G.half_owner = {0};
  G.half_pair = {-1};
  G.leg_label = {1};
  CHECK_NOTHROW(G.validate());
  StableGraph bad = G;
  bad.leg_label = {2};  // label out of range
  CHECK_THROWS_AS(bad.validate(), consistency_error);
  bad = G;
  bad.genus = {0};  // unstable vertex and broken genus identity
  CHECK_THROWS_AS(bad.validate(), consistency_error);
}
