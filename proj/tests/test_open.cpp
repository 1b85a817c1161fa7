#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "mgn/chi.hpp"
#include "mgn/numbers.hpp"
#include "mgn/ordinary_open.hpp"

using namespace mgn;

TEST_CASE("branch data for the once-punctured torus") {
  auto data = branch_data_enumerate(1, 0);
  std::set<int> ks;
  for (const auto& b : data) {
    CHECK(b.satisfies_constraint(1, 0));
    ks.insert(b.k);
  }
  CHECK(ks == std::set<int>{1, 2, 3, 4, 6});  // the elliptic automorphism orders
  auto has = [&](int h, int k, std::vector<int> M) {
    for (const auto& b : data)
      if (b.h == h && b.k == k && b.M == M) return true;
    return false;
  };
  CHECK(has(1, 1, {}));
  CHECK(has(0, 2, {1, 1, 1}));
  CHECK(has(0, 3, {1, 1}));
  CHECK(has(0, 4, {1, 2}));
  CHECK(has(0, 6, {2, 3}));
}

TEST_CASE("identity datum present and carries exactly chi") {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {3, 1}, {2, 3}, {0, 4}}) {
    auto data = branch_data_enumerate(g, n);
    int identity = 0;
    Rational k1sum(0);
    for (const auto& b : data) {
      if (b.k == 1) {
        ++identity;
        CHECK(b.h == g);
        CHECK(b.d == 0);
      }
      if (b.k == 1) k1sum += e_open_term(g, n, b);
    }
    CHECK(identity == 1);
    // the trivial-cover sector alone contributes chi(M_g^{n+1}); everything
    // else lives on k >= 2
    CHECK(k1sum == chi_open(g, n + 1));
  }
}

TEST_CASE("hyperelliptic datum for genus two") {
  auto data = branch_data_enumerate(2, 0);
  bool found = false;
  for (const auto& b : data)
    if (b.h == 0 && b.k == 2 && b.d == 5 && b.M == std::vector<int>{1, 1, 1, 1, 1}) found = true;
  CHECK(found);
}

TEST_CASE("widening the cyclic-order bound adds no data") {
  for (auto [g, n] : std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {3, 0}, {2, 2}, {4, 1}, {6, 0}}) {
    auto base = branch_data_enumerate(g, n);
    auto wide = branch_data_enumerate(g, n, 9 * (2L * g - 1 + n));  // bound * 1.5
    REQUIRE(base.size() == wide.size());
  }
}

TEST_CASE("ordinary euler characteristic of open moduli") {
  CHECK(e_open(1, 1) == Integer(1));
  CHECK(e_open(3, 2) == Integer(8));
  CHECK(e_open(4, 2) == Integer(-2));
  CHECK(e_open(3, 9) == Integer(-79200));
  CHECK(Rational(e_open(3, 9)) == chi_open(3, 9));
  CHECK_THROWS_AS(e_open(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(e_open(1, 0), std::invalid_argument);
}

TEST_CASE("one-point closed-surface values are regression locked") {
  // e(M_g^1): the formula's n = 0 specialization, frozen at first computation
  const Integer expect[] = {Integer(1), Integer(2), Integer(6), Integer(2), Integer(6),
                            Integer(8)};
  for (int g = 1; g <= 6; ++g) REQUIRE(e_open(g, 1) == expect[g - 1]);
}

TEST_CASE("stable range agreement") {
  // a smooth curve with >= 2g+3 marked points is automorphism free
  for (int g = 0; g <= 3; ++g)
    for (int n = std::max(2 * g + 2, 3 - 2 * g); n <= 2 * g + 5; ++n)
      REQUIRE(Rational(e_open(g, n + 1)) == chi_open(g, n + 1));
}

TEST_CASE("integrality across a sweep") {
  for (int g = 0; g <= 5; ++g)
    for (int n = std::max(0, 1 - 2 * g + 1); n <= 5; ++n) {
      if (2 * g - 1 + n <= 0) continue;
      CHECK_NOTHROW(e_open(g, n + 1));  // non-integer totals throw inside
    }
}

TEST_CASE("table 1 spot cells") {
  Table1 t = table1_compute(2);
  CHECK(t.values[10 - 3][1 - 1] == Integer(-1994));
  CHECK(t.values[9 - 3][8 - 1] == Integer(-90553767840));
  CHECK(t.values[5 - 3][3 - 1] == Integer(92));
}
