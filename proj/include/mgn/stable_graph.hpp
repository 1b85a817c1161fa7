#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mgn/numbers.hpp"
#include "mgn/rational.hpp"

namespace mgn {

/// A stable graph of type (g, n): genus-labelled vertices, half-edges paired
/// into edges by a fixed-point-free involution on the non-leg half-edges, and
/// legs labelled bijectively by 1..n.
struct StableGraph {
  int g = 0;
  int n = 0;
  std::vector<int> genus;       // per vertex
  std::vector<int> half_owner;  // half-edge index -> vertex
  std::vector<int> half_pair;   // half-edge index -> partner, or -1 for a leg
  std::vector<int> leg_label;   // half-edge index -> 1..n for legs, 0 otherwise

  int vertex_count() const { return (int)genus.size(); }
  int half_edge_count() const { return (int)half_owner.size(); }
  int edge_count() const;
  int betti() const { return 1 - vertex_count() + edge_count(); }
  std::vector<int> legs_at() const;      // per-vertex leg count
  std::vector<int> valence_at() const;   // per-vertex half-edge count l(v)

  /// Checks every defining invariant (stability, genus identity, connectivity,
  /// leg bijection); throws consistency_error on violation.
  void validate() const;
};

/// An isomorphism class: canonical representative plus the exact automorphism
/// group order. Isomorphisms fix legs pointwise, preserve genus labels and
/// commute with the edge involution.
struct GraphClass {
  StableGraph canonical;
  long long aut_order = 1;
  int betti = 0;
};

/// Exact |Aut(G)| counted at the half-edge level: color-refined vertex
/// bijections extended to half-edge maps commuting with the pairing.
long long aut_order(const StableGraph& G);

/// Canonical encoding; two graphs are isomorphic iff their encodings agree.
std::vector<int> canonical_encoding(const StableGraph& G);

constexpr int kAllBetti = -1;

/// All isomorphism classes of stable graphs of type (g, n), sorted by canonical
/// encoding; optionally restricted to classes with h^1(G) equal to betti_filter.
std::vector<GraphClass> enumerate_stable_graphs(int g, int n, int betti_filter = kAllBetti);

/// Lightweight view of one class during streaming enumeration. Vertices are in
/// generator-canonical order; emat is the symmetric edge-multiplicity matrix
/// with loop counts on the diagonal.
struct ClassView {
  const std::vector<int>& genus;
  const std::vector<std::vector<int>>& legs;  // sorted labels per vertex
  const std::vector<std::vector<int>>& emat;
  long long aut_order;
  int betti;
};

/// Streams every isomorphism class exactly once without materializing the list;
/// jobs controls worker threads (values < 1 mean hardware concurrency). The
/// callback must be thread-safe when jobs != 1.
void for_each_stable_graph_class(int g, int n, int betti_filter,
                                 const std::function<void(const ClassView&)>& fn, int jobs = 1);

/// Builds a StableGraph from generator-canonical class data.
StableGraph graph_from_class_data(int g, int n, const std::vector<int>& genus,
                                  const std::vector<std::vector<int>>& legs,
                                  const std::vector<std::vector<int>>& emat);

using Pairing = std::vector<std::pair<int, int>>;

/// All perfect matchings on the given slots (slot_owner maps slot -> vertex);
/// with require_connected, only those whose quotient multigraph on the owning
/// vertices is connected. Rejects odd slot counts.
std::vector<Pairing> enumerate_pairings(const std::vector<int>& slot_owner, bool require_connected);

/// One JSON object per class (genus_labels, edges as half-edge index pairs,
/// leg_labels, aut_order, betti), stable order, with a format version field.
std::string graph_catalog_json(int g, int n, int betti_filter = kAllBetti);

}  // namespace mgn
