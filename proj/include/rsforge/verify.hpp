#pragma once

#include <map>
#include <string>
#include <vector>

#include "rsforge/construct.hpp"
#include "rsforge/functions.hpp"

namespace rsforge::verify {

inline constexpr int kMaxCounterexamples = 32;

// One invariant check. `passed` holds exactly when `counterexamples` is
// empty; the bounded list keeps the first 32 violations in canonical order
// and metrics["violations"] keeps the full count. Exact rationals in metrics
// render as "num/den".
struct VerificationReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> counterexamples;
  std::map<std::string, std::string> metrics;
};

// Layer by layer: no two edges of one layer share k-2 or more vertices
// (k = 3: a matching, where self loops count as matched vertices), and no
// edge of another layer has all its vertices inside the layer's support.
VerificationReport check_induced_steiner_partition(const construct::LayeredGraph& g);

// Enumerates every K_k with k-1 vertices in the A part and one in the B part
// and compares the census with S as unordered A-parts (k > 3 degenerate
// entries are excluded; k = 3 loop entries stay). Per-edge clique counts are
// reported as min/max metrics.
VerificationReport cross_clique_census(const construct::LayeredGraph& g,
                                       const nof::EntrySet& s, int threads = 1);

// Counts clique membership for every product edge and asserts each lies in
// at least 1 and at most 2^t cliques. Edge density against the 1/4 selector
// target is reported, not asserted.
VerificationReport check_product_bounds(const construct::ProductGraph& pg,
                                        int threads = 1);

// Exact histogram of ||x-y||^2 over all q^{2d} pairs, checked against the
// tail bound 2 exp(-2 t^2 / (d q^4)) at every integer t in [0, d q^2].
// Reports the mass p of the interval containing the mean.
VerificationReport check_concentration(int q, int d, i64 r_sq,
                                       i64 cap = default_cap(), int threads = 1);

// Instance-level inequalities: N against its lattice box bound, the layer
// count against N (or N' = N * 2^gamma once augmented), plus the derived
// quantities p = |S|/n^{k-1} and (N'/n)^2.
VerificationReport bound_report(const fns::FunctionSpec& f, int gamma,
                                i64 entry_count, i64 layer_count, bool augmented);

bool all_passed(const std::vector<VerificationReport>& reports);

}  // namespace rsforge::verify
