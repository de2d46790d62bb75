#pragma once

#include <span>
#include <vector>

#include "rsforge/nof.hpp"

namespace rsforge::construct {

// The graph G_S on V_A + V_B. A-part edges are the (k-1)-sets formed by the
// first k-1 coordinates of an entry; cross edges replace one of those
// vertices with the entry's B coordinate. Edges are canonical: sorted vertex
// ids, A ids and B ids in separate spaces (rendered A:<i> and B:<j>).
struct LayeredGraph {
  int k = 3;
  i64 n_A = 0;
  i64 n_B = 0;
  // sorted unique; k-1 distinct A ids, or a single id for a k=3 self loop
  std::vector<std::vector<i64>> a_edges;
  std::vector<i64> layer_of;  // parallel to a_edges: the unique z
  // k-2 sorted A ids followed by the B id; sorted unique
  std::vector<std::vector<i64>> cross_edges;
  // k > 3 entries whose first k-1 coordinates repeat a vertex. They carry no
  // A-part edge; their set-collapsed cross edges are kept.
  std::vector<std::vector<i64>> degenerate_entries;

  bool has_cross(std::span<const i64> a_part, i64 z) const;
};

LayeredGraph build_graph(const nof::EntrySet& s);

struct Layer {
  i64 z = 0;
  std::vector<std::vector<i64>> edges;
};

// Nonempty layers F_z / E'_z in ascending z order. Together they partition
// the A-part edges; a duplicated edge signals a non-sub-permutation source.
std::vector<Layer> partition_layers(const LayeredGraph& g);

// The selector H on [2^t] x [n]. Vertices are encoded alpha*n + x; edges are
// (k-1)-sets, plus optional singletons for k=3 which let self loops survive
// the blow-up.
struct CliqueTemplate {
  int k = 3;
  int t = 0;
  i64 n = 0;
  std::vector<std::vector<i64>> edges;  // sorted unique
  Rat declared_density{0};
  bool kk_free_checked = false;
  bool kk_free = false;

  i64 vertex_count() const { return (i64{1} << t) * n; }
  bool contains(const std::vector<i64>& sorted_vertices) const;
};

// k = 3 built-in: complete bipartite between the alpha < 2^{t-1} and the
// alpha >= 2^{t-1} vertex classes; density exactly 1/4.
CliqueTemplate default_template(int k, int t, i64 n);
// Every (k-1)-subset (and for k=3 every singleton): the t=0 identity
// selector. Not K_k-free; useful as a verification device only.
CliqueTemplate full_template(int k, int t, i64 n, i64 cap = default_cap());
// Exhaustive K_k scan over edge-plus-vertex extensions; sets the kk_free
// flags when the candidate count fits the cap, otherwise leaves the template
// unchecked (warning flag stays down).
void check_template(CliqueTemplate& tmpl, i64 candidate_cap = 100000);

// The blown-up graph on E'_{S^t}: an A-part edge per (entry, alpha-vector)
// whose blown vertex set the template contains, and that tuple's cross
// edges. Cross edges carry no template condition of their own.
struct ProductGraph {
  int k = 3;
  int t = 0;
  i64 n_A = 0;
  i64 n_B = 0;
  std::vector<std::vector<i64>> a_edges;
  std::vector<std::vector<i64>> cross_edges;

  bool has_cross(std::span<const i64> a_part, i64 z) const;
};

ProductGraph build_product(const nof::EntrySet& s, int t, const CliqueTemplate& tmpl,
                           i64 cap = default_cap());

}  // namespace rsforge::construct
