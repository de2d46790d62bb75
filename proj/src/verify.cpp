#include "rsforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsforge/lattice.hpp"

namespace rsforge::verify {

namespace {

// Comparing an exact rational tail against exp() output; the slack only
// absorbs libm rounding, never a real violation.
constexpr double kTailSlack = 1e-12;

void note(VerificationReport& r, i64& total, std::string msg) {
  r.passed = false;
  ++total;
  if (static_cast<int>(r.counterexamples.size()) < kMaxCounterexamples)
    r.counterexamples.push_back(std::move(msg));
}

std::string rat_str(const Rat& v) {
  return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
}

std::string dbl_str(double v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

std::string a_edge_str(const std::vector<i64>& e) {
  std::string s = "{";
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += "A:" + std::to_string(e[i]);
  }
  return s + "}";
}

// Vertex list whose final id lives in the B part (cross edges, cliques).
std::string clique_str(const std::vector<i64>& c) {
  std::string s = "{";
  for (size_t i = 0; i + 1 < c.size(); ++i) s += "A:" + std::to_string(c[i]) + ",";
  return s + "B:" + std::to_string(c.back()) + "}";
}

int overlap(const std::vector<i64>& a, const std::vector<i64>& b) {
  int count = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else
      ++count, ++i, ++j;
  }
  return count;
}

// The size-(k-2) subsets of a sorted A-edge: with z appended they are the
// cross edges a K_k through this edge must contain. A full edge yields k-1
// probes, a k=3 self loop exactly one.
std::vector<std::vector<i64>> cross_probes(const std::vector<i64>& edge, int k) {
  std::vector<std::vector<i64>> out;
  for (size_t skip = 0; skip <= edge.size(); ++skip) {
    std::vector<i64> probe;
    for (size_t i = 0; i < edge.size(); ++i)
      if (i != skip) probe.push_back(edge[i]);
    if (static_cast<int>(probe.size()) == k - 2) out.push_back(std::move(probe));
  }
  return out;
}

}  // namespace

VerificationReport check_induced_steiner_partition(const construct::LayeredGraph& g) {
  VerificationReport r;
  r.name = "induced_steiner_partition";
  auto layers = construct::partition_layers(g);
  i64 violations = 0;

  // Steiner: within a layer no two edges share k-2 vertices. For k = 3 this
  // is the matching condition, with self loops occupying their vertex.
  for (const auto& layer : layers) {
    for (size_t i = 0; i < layer.edges.size(); ++i)
      for (size_t j = i + 1; j < layer.edges.size(); ++j) {
        int ov = overlap(layer.edges[i], layer.edges[j]);
        if (ov >= g.k - 2)
          note(r, violations,
               "layer B:" + std::to_string(layer.z) + ": " + a_edge_str(layer.edges[i]) +
                   " and " + a_edge_str(layer.edges[j]) + " share " + std::to_string(ov) +
                   " vertices");
      }
  }

  // Induced: an edge of another layer may not lie inside this layer's
  // vertex support.
  std::vector<std::vector<i64>> support(layers.size());
  for (size_t li = 0; li < layers.size(); ++li) {
    for (const auto& e : layers[li].edges)
      support[li].insert(support[li].end(), e.begin(), e.end());
    std::sort(support[li].begin(), support[li].end());
    support[li].erase(std::unique(support[li].begin(), support[li].end()), support[li].end());
  }
  for (size_t li = 0; li < layers.size(); ++li)
    for (size_t mi = 0; mi < layers.size(); ++mi) {
      if (mi == li) continue;
      for (const auto& e : layers[mi].edges) {
        bool inside = std::all_of(e.begin(), e.end(), [&](i64 v) {
          return std::binary_search(support[li].begin(), support[li].end(), v);
        });
        if (inside)
          note(r, violations,
               "layer B:" + std::to_string(layers[li].z) + ": edge " + a_edge_str(e) +
                   " of layer B:" + std::to_string(layers[mi].z) +
                   " lies inside the layer support");
      }
    }

  r.metrics["layers"] = std::to_string(layers.size());
  r.metrics["a_edges"] = std::to_string(g.a_edges.size());
  r.metrics["violations"] = std::to_string(violations);
  return r;
}

VerificationReport cross_clique_census(const construct::LayeredGraph& g,
                                       const nof::EntrySet& s, int threads) {
  if (s.k != g.k) throw ParameterError("census: entry set arity does not match the graph");
  VerificationReport r;
  r.name = "cross_clique_census";

  // What the graph should report back: entries as unordered A-parts plus the
  // B vertex. k > 3 degenerate entries carry no K_k and are left out.
  std::vector<std::vector<i64>> expected;
  for (const auto& e : s.entries) {
    std::vector<i64> c(e.begin(), e.end() - 1);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (g.k > 3 && static_cast<int>(c.size()) != g.k - 1) continue;
    c.push_back(e.back());
    expected.push_back(std::move(c));
  }
  std::sort(expected.begin(), expected.end());
  expected.erase(std::unique(expected.begin(), expected.end()), expected.end());

  struct Chunk {
    std::vector<std::vector<i64>> cliques;
    std::vector<i64> counts;
  };
  i64 edges = static_cast<i64>(g.a_edges.size());
  auto chunks = run_chunked<Chunk>(edges, threads, [&](i64 b, i64 e) {
    Chunk c;
    c.counts.assign(static_cast<size_t>(e - b), 0);
    for (i64 i = b; i < e; ++i) {
      const auto& edge = g.a_edges[static_cast<size_t>(i)];
      auto probes = cross_probes(edge, g.k);
      for (i64 z = 0; z < g.n_B; ++z) {
        bool all = true;
        for (const auto& p : probes)
          if (!g.has_cross(p, z)) {
            all = false;
            break;
          }
        if (!all) continue;
        ++c.counts[static_cast<size_t>(i - b)];
        auto clique = edge;
        clique.push_back(z);
        c.cliques.push_back(std::move(clique));
      }
    }
    return c;
  });

  std::vector<std::vector<i64>> census;
  std::vector<i64> per_edge;
  per_edge.reserve(static_cast<size_t>(edges));
  for (auto& c : chunks) {
    for (auto& cl : c.cliques) census.push_back(std::move(cl));
    per_edge.insert(per_edge.end(), c.counts.begin(), c.counts.end());
  }
  std::sort(census.begin(), census.end());

  i64 violations = 0;
  std::vector<std::vector<i64>> spurious, missing;
  std::set_difference(census.begin(), census.end(), expected.begin(), expected.end(),
                      std::back_inserter(spurious));
  std::set_difference(expected.begin(), expected.end(), census.begin(), census.end(),
                      std::back_inserter(missing));
  for (const auto& c : spurious)
    note(r, violations, "clique " + clique_str(c) + " has no entry in S");
  for (const auto& c : missing)
    note(r, violations, "entry " + clique_str(c) + " spans no clique");

  i64 cmin = 0, cmax = 0;
  if (!per_edge.empty()) {
    cmin = *std::min_element(per_edge.begin(), per_edge.end());
    cmax = *std::max_element(per_edge.begin(), per_edge.end());
  }
  r.metrics["cliques"] = std::to_string(census.size());
  r.metrics["expected"] = std::to_string(expected.size());
  r.metrics["degenerate_entries"] = std::to_string(g.degenerate_entries.size());
  r.metrics["edge_clique_min"] = std::to_string(cmin);
  r.metrics["edge_clique_max"] = std::to_string(cmax);
  r.metrics["violations"] = std::to_string(violations);
  return r;
}

VerificationReport check_product_bounds(const construct::ProductGraph& pg, int threads) {
  VerificationReport r;
  r.name = "product_bounds";
  const i64 bound = i64{1} << pg.t;

  struct Chunk {
    std::vector<i64> a_counts;
    std::vector<i64> cross_counts;
    i64 cliques = 0;
  };
  i64 edges = static_cast<i64>(pg.a_edges.size());
  auto chunks = run_chunked<Chunk>(edges, threads, [&](i64 b, i64 e) {
    Chunk c;
    c.a_counts.assign(static_cast<size_t>(e - b), 0);
    c.cross_counts.assign(pg.cross_edges.size(), 0);
    std::vector<i64> key;
    for (i64 i = b; i < e; ++i) {
      const auto& edge = pg.a_edges[static_cast<size_t>(i)];
      auto probes = cross_probes(edge, pg.k);
      std::vector<size_t> at(probes.size());
      for (i64 z = 0; z < pg.n_B; ++z) {
        bool all = true;
        for (size_t pi = 0; pi < probes.size() && all; ++pi) {
          key = probes[pi];
          key.push_back(z);
          auto it = std::lower_bound(pg.cross_edges.begin(), pg.cross_edges.end(), key);
          if (it == pg.cross_edges.end() || *it != key)
            all = false;
          else
            at[pi] = static_cast<size_t>(it - pg.cross_edges.begin());
        }
        if (!all) continue;
        ++c.cliques;
        ++c.a_counts[static_cast<size_t>(i - b)];
        for (size_t pi = 0; pi < probes.size(); ++pi) ++c.cross_counts[at[pi]];
      }
    }
    return c;
  });

  std::vector<i64> a_counts;
  a_counts.reserve(static_cast<size_t>(edges));
  std::vector<i64> cross_counts(pg.cross_edges.size(), 0);
  i64 cliques = 0;
  for (auto& c : chunks) {
    a_counts.insert(a_counts.end(), c.a_counts.begin(), c.a_counts.end());
    for (size_t i = 0; i < cross_counts.size(); ++i) cross_counts[i] += c.cross_counts[i];
    cliques += c.cliques;
  }

  i64 violations = 0;
  i64 emin = 0, emax = 0;
  bool first = true;
  auto tally = [&](i64 count) {
    if (first) {
      emin = emax = count;
      first = false;
    } else {
      emin = std::min(emin, count);
      emax = std::max(emax, count);
    }
  };
  for (size_t i = 0; i < a_counts.size(); ++i) {
    tally(a_counts[i]);
    if (a_counts[i] < 1 || a_counts[i] > bound)
      note(r, violations,
           "a-edge " + a_edge_str(pg.a_edges[i]) + " lies in " + std::to_string(a_counts[i]) +
               " cliques, outside [1, " + std::to_string(bound) + "]");
  }
  for (size_t i = 0; i < cross_counts.size(); ++i) {
    tally(cross_counts[i]);
    if (cross_counts[i] < 1 || cross_counts[i] > bound)
      note(r, violations,
           "cross edge " + clique_str(pg.cross_edges[i]) + " lies in " +
               std::to_string(cross_counts[i]) + " cliques, outside [1, " +
               std::to_string(bound) + "]");
  }

  const i64 vertex_count = pg.n_A + pg.n_B;
  const i64 edge_count = static_cast<i64>(pg.a_edges.size() + pg.cross_edges.size());
  r.metrics["cliques"] = std::to_string(cliques);
  r.metrics["bound"] = std::to_string(bound);
  r.metrics["edge_min"] = std::to_string(emin);
  r.metrics["edge_max"] = std::to_string(emax);
  r.metrics["a_edges"] = std::to_string(pg.a_edges.size());
  r.metrics["cross_edges"] = std::to_string(pg.cross_edges.size());
  r.metrics["vertices"] = std::to_string(vertex_count);
  if (vertex_count > 0) {
    r.metrics["density"] = rat_str(Rat(edge_count, vertex_count * vertex_count));
    r.metrics["density_target"] = rat_str(Rat(pg.n_A * pg.n_A, 4 * vertex_count * vertex_count));
  }
  r.metrics["violations"] = std::to_string(violations);
  return r;
}

VerificationReport check_concentration(int q, int d, i64 r_sq, i64 cap, int threads) {
  if (q < 2 || d < 1) throw ParameterError("concentration: need q >= 2 and d >= 1");
  auto part = lattice::build_interval_partition(q, d, r_sq);
  const i64 n = ipow(q, d);
  require_cap(n * n, cap, "concentration pair enumeration");

  VerificationReport r;
  r.name = "concentration";
  const i64 range = static_cast<i64>(d) * (q - 1) * (q - 1);
  auto chunks = run_chunked<std::vector<i64>>(n, threads, [&](i64 b, i64 e) {
    std::vector<i64> hist(static_cast<size_t>(range) + 1, 0);
    for (i64 xi = b; xi < e; ++xi) {
      auto x = lattice::Point::from_index(xi, q, d);
      for (i64 yi = 0; yi < n; ++yi)
        ++hist[static_cast<size_t>(lattice::sq_dist(x, lattice::Point::from_index(yi, q, d)))];
    }
    return hist;
  });
  std::vector<i64> hist(static_cast<size_t>(range) + 1, 0);
  for (auto& h : chunks)
    for (size_t i = 0; i < hist.size(); ++i) hist[i] += h[i];

  const i64 pairs = n * n;
  const Rat mu = lattice::mean_sq_dist(q, d);
  i64 weighted = 0;
  for (size_t v = 0; v < hist.size(); ++v) weighted += static_cast<i64>(v) * hist[v];

  i64 violations = 0;
  const double denom = static_cast<double>(d) * static_cast<double>(ipow(q, 4));
  const i64 t_max = static_cast<i64>(d) * q * q;
  for (i64 t = 0; t <= t_max; ++t) {
    i64 tail = 0;
    for (size_t v = 0; v < hist.size(); ++v)
      if (boost::abs(Rat(static_cast<i64>(v)) - mu) >= Rat(t)) tail += hist[v];
    double empirical = boost::rational_cast<double>(Rat(tail, pairs));
    double allowed = 2.0 * std::exp(-2.0 * static_cast<double>(t * t) / denom);
    if (empirical > allowed + kTailSlack)
      note(r, violations,
           "t=" + std::to_string(t) + ": tail " + rat_str(Rat(tail, pairs)) + " = " +
               dbl_str(empirical) + " exceeds the bound " + dbl_str(allowed));
  }

  i64 mu_mass = 0;
  for (size_t v = 0; v < hist.size(); ++v)
    if (part.index_of(Rat(static_cast<i64>(v))) == part.mu_index()) mu_mass += hist[v];

  r.metrics["pairs"] = std::to_string(pairs);
  r.metrics["mean"] = rat_str(Rat(weighted, pairs));
  r.metrics["p"] = rat_str(Rat(mu_mass, pairs));
  r.metrics["mu_mass_pairs"] = std::to_string(mu_mass);
  r.metrics["t_max"] = std::to_string(t_max);
  r.metrics["violations"] = std::to_string(violations);
  return r;
}

VerificationReport bound_report(const fns::FunctionSpec& f, int gamma, i64 entry_count,
                                i64 layer_count, bool augmented) {
  if (gamma < 0 || gamma > 32) throw ParameterError("bound_report: gamma out of range");
  if (entry_count < 0 || layer_count < 0)
    throw ParameterError("bound_report: counts must be non-negative");
  VerificationReport r;
  r.name = "bounds";
  const i64 n = f.n(), N = f.N();
  const int k = f.k(), q = f.q(), d = f.d();
  const i64 n_prime = N * (i64{1} << gamma);
  // (2q)^d is the three-player midpoint-set bound; the general form scales
  // with the player count.
  const i64 n_bound = (k == 3) ? ipow(2 * q, d) : ipow(static_cast<i64>(k) * q, d);
  const i64 layer_bound = augmented ? n_prime : N;

  i64 violations = 0;
  if (N > n_bound)
    note(r, violations,
         "N=" + std::to_string(N) + " exceeds the lattice box bound " + std::to_string(n_bound));
  if (layer_count > layer_bound)
    note(r, violations, "layer count " + std::to_string(layer_count) + " exceeds " +
                            (augmented ? "N'=" : "N=") + std::to_string(layer_bound));

  Rat h(n_prime, n);
  r.metrics["p"] = rat_str(Rat(entry_count, ipow(n, k - 1)));
  r.metrics["gamma"] = std::to_string(gamma);
  r.metrics["N"] = std::to_string(N);
  r.metrics["N_prime"] = std::to_string(n_prime);
  r.metrics["N_bound"] = std::to_string(n_bound);
  r.metrics["layers"] = std::to_string(layer_count);
  r.metrics["layer_bound"] = std::to_string(layer_bound);
  r.metrics["h_bound"] = rat_str(h * h);
  r.metrics["violations"] = std::to_string(violations);
  return r;
}

bool all_passed(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

}  // namespace rsforge::verify
