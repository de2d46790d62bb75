#include "rsforge/construct.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace rsforge::construct {

namespace {

bool cross_lookup(const std::vector<std::vector<i64>>& cross, std::span<const i64> a_part,
                  i64 z) {
  std::vector<i64> probe(a_part.begin(), a_part.end());
  std::sort(probe.begin(), probe.end());
  probe.push_back(z);
  return std::binary_search(cross.begin(), cross.end(), probe);
}

void canonicalize(std::vector<std::vector<i64>>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

std::string edge_str(const std::vector<i64>& e) {
  std::string s = "{";
  for (size_t i = 0; i < e.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(e[i]);
  }
  return s + "}";
}

}  // namespace

bool LayeredGraph::has_cross(std::span<const i64> a_part, i64 z) const {
  return cross_lookup(cross_edges, a_part, z);
}

bool ProductGraph::has_cross(std::span<const i64> a_part, i64 z) const {
  return cross_lookup(cross_edges, a_part, z);
}

LayeredGraph build_graph(const nof::EntrySet& s) {
  int k = s.k;
  if (k < 3) throw ParameterError("build_graph: k >= 3 required");
  if (static_cast<int>(s.dims.size()) != k) throw ParameterError("build_graph: bad dims");
  for (int i = 1; i + 1 < k; ++i)
    if (s.dims[i] != s.dims[0])
      throw ParameterError("build_graph: the first k-1 axes must share one vertex set");
  if (!nof::check_symmetric(s)) throw ContractError("build_graph: entry set is not symmetric");

  LayeredGraph g;
  g.k = k;
  g.n_A = s.dims[0];
  g.n_B = s.dims[k - 1];

  std::map<std::vector<i64>, i64> layer;
  for (const auto& e : s.entries) {
    std::vector<i64> a(e.begin(), e.end() - 1);
    i64 z = e.back();
    std::sort(a.begin(), a.end());
    std::vector<i64> uniq(a);
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    std::vector<i64> a_edge;
    if (k == 3)
      a_edge = uniq;  // a repeated pair is the self loop {x}
    else if (static_cast<int>(uniq.size()) == k - 1)
      a_edge = uniq;
    else
      g.degenerate_entries.push_back(e);

    if (!a_edge.empty()) {
      auto [it, inserted] = layer.emplace(a_edge, z);
      if (!inserted && it->second != z)
        throw ContractError("build_graph: layer conflict on edge " + edge_str(a_edge) +
                            ": z=" + std::to_string(it->second) + " and z=" +
                            std::to_string(z) + " (source is not a sub-permutation)");
    }

    // cross edges: the (k-1)-subsets of the collapsed vertex set containing
    // z, i.e. the (k-2)-subsets of uniq with z appended
    for (size_t skip = 0; skip <= uniq.size(); ++skip) {
      std::vector<i64> cross;
      for (size_t i = 0; i < uniq.size(); ++i)
        if (i != skip) cross.push_back(uniq[i]);
      if (static_cast<int>(cross.size()) != k - 2) continue;
      cross.push_back(z);
      g.cross_edges.push_back(std::move(cross));
    }
  }

  for (auto& [edge, z] : layer) {
    g.a_edges.push_back(edge);
    g.layer_of.push_back(z);
  }
  canonicalize(g.cross_edges);
  return g;
}

std::vector<Layer> partition_layers(const LayeredGraph& g) {
  if (g.a_edges.size() != g.layer_of.size())
    throw ParameterError("partition_layers: edge/layer arrays disagree");
  std::map<std::vector<i64>, i64> seen;
  std::map<i64, std::vector<std::vector<i64>>> by_z;
  for (size_t i = 0; i < g.a_edges.size(); ++i) {
    auto [it, inserted] = seen.emplace(g.a_edges[i], g.layer_of[i]);
    if (!inserted)
      throw ContractError("partition_layers: edge " + edge_str(g.a_edges[i]) +
                          " appears twice (source is not a sub-permutation)");
    by_z[g.layer_of[i]].push_back(g.a_edges[i]);
  }
  std::vector<Layer> layers;
  layers.reserve(by_z.size());
  for (auto& [z, edges] : by_z) {
    std::sort(edges.begin(), edges.end());
    layers.push_back(Layer{z, std::move(edges)});
  }
  return layers;
}

bool CliqueTemplate::contains(const std::vector<i64>& sorted_vertices) const {
  return std::binary_search(edges.begin(), edges.end(), sorted_vertices);
}

CliqueTemplate default_template(int k, int t, i64 n) {
  if (k != 3)
    throw ParameterError("default_template: only k = 3 is built in; supply a template file");
  if (t < 1) throw ParameterError("default_template: t >= 1 required");
  if (n < 1) throw ParameterError("default_template: n >= 1 required");
  CliqueTemplate tmpl;
  tmpl.k = k;
  tmpl.t = t;
  tmpl.n = n;
  i64 half = i64{1} << (t - 1);
  for (i64 alpha = 0; alpha < half; ++alpha)
    for (i64 x = 0; x < n; ++x)
      for (i64 beta = half; beta < 2 * half; ++beta)
        for (i64 y = 0; y < n; ++y)
          tmpl.edges.push_back({alpha * n + x, beta * n + y});
  canonicalize(tmpl.edges);
  i64 v = tmpl.vertex_count();
  tmpl.declared_density = Rat(static_cast<i64>(tmpl.edges.size()), v * v);
  tmpl.kk_free_checked = true;
  tmpl.kk_free = true;  // bipartite
  return tmpl;
}

CliqueTemplate full_template(int k, int t, i64 n, i64 cap) {
  if (k < 3) throw ParameterError("full_template: k >= 3 required");
  if (t < 0 || n < 1) throw ParameterError("full_template: bad dimensions");
  CliqueTemplate tmpl;
  tmpl.k = k;
  tmpl.t = t;
  tmpl.n = n;
  i64 v = tmpl.vertex_count();

  i64 count = 1;  // C(v, k-1)
  for (int i = 0; i < k - 1; ++i) count = count * (v - i) / (i + 1);
  require_cap(count, cap, "full_template edges");

  std::vector<i64> pick(k - 1);
  auto rec = [&](auto&& self, int depth, i64 from) -> void {
    if (depth == k - 1) {
      tmpl.edges.emplace_back(pick.begin(), pick.end());
      return;
    }
    for (i64 u = from; u < v; ++u) {
      pick[depth] = u;
      self(self, depth + 1, u + 1);
    }
  };
  rec(rec, 0, 0);
  if (k == 3)
    for (i64 u = 0; u < v; ++u) tmpl.edges.push_back({u});
  canonicalize(tmpl.edges);
  i64 denom = ipow(v, k - 1);
  tmpl.declared_density = Rat(static_cast<i64>(tmpl.edges.size()), denom);
  return tmpl;
}

void check_template(CliqueTemplate& tmpl, i64 candidate_cap) {
  i64 v = tmpl.vertex_count();
  i64 candidates = static_cast<i64>(tmpl.edges.size()) * v;
  if (candidates > candidate_cap) {
    tmpl.kk_free_checked = false;
    return;
  }
  int k = tmpl.k;
  for (const auto& e : tmpl.edges) {
    if (static_cast<int>(e.size()) != k - 1) continue;
    for (i64 u = 0; u < v; ++u) {
      if (std::binary_search(e.begin(), e.end(), u)) continue;
      std::vector<i64> clique(e);
      clique.push_back(u);
      std::sort(clique.begin(), clique.end());
      bool all = true;
      std::vector<i64> sub(k - 1);
      for (int skip = 0; skip < k && all; ++skip) {
        int w = 0;
        for (int i = 0; i < k; ++i)
          if (i != skip) sub[w++] = clique[i];
        all = tmpl.contains(sub);
      }
      if (all) {
        tmpl.kk_free_checked = true;
        tmpl.kk_free = false;
        return;
      }
    }
  }
  tmpl.kk_free_checked = true;
  tmpl.kk_free = true;
}

ProductGraph build_product(const nof::EntrySet& s, int t, const CliqueTemplate& tmpl,
                           i64 cap) {
  int k = s.k;
  if (k < 3 || static_cast<int>(s.dims.size()) != k)
    throw ParameterError("build_product: bad entry set");
  for (int i = 1; i + 1 < k; ++i)
    if (s.dims[i] != s.dims[0])
      throw ParameterError("build_product: the first k-1 axes must share one vertex set");
  if (t < 0 || t > 20) throw ParameterError("build_product: t out of range");
  if (tmpl.k != k || tmpl.t != t || tmpl.n != s.dims[0])
    throw ParameterError("build_product: template vertex count mismatch");

  i64 n = s.dims[0];
  i64 blow = i64{1} << t;
  ProductGraph pg;
  pg.k = k;
  pg.t = t;
  pg.n_A = blow * n;
  pg.n_B = s.dims[k - 1];

  i64 tuples = 1;
  for (int i = 0; i + 1 < k; ++i) {
    tuples *= blow;
    require_cap(tuples, cap, "build_product alpha tuples");
  }
  require_cap(s.size() * tuples, cap, "build_product work");

  std::vector<i64> alpha(k - 1, 0);
  for (const auto& e : s.entries) {
    std::fill(alpha.begin(), alpha.end(), 0);
    while (true) {
      std::vector<i64> blown(k - 1);
      for (int i = 0; i + 1 < k; ++i) blown[i] = alpha[i] * n + e[i];
      std::sort(blown.begin(), blown.end());
      blown.erase(std::unique(blown.begin(), blown.end()), blown.end());
      if (tmpl.contains(blown)) {
        pg.a_edges.push_back(blown);
        for (size_t skip = 0; skip <= blown.size(); ++skip) {
          std::vector<i64> cross;
          for (size_t i = 0; i < blown.size(); ++i)
            if (i != skip) cross.push_back(blown[i]);
          if (static_cast<int>(cross.size()) != k - 2) continue;
          cross.push_back(e[k - 1]);
          pg.cross_edges.push_back(std::move(cross));
        }
      }
      int pos = 0;
      while (pos + 1 < k && ++alpha[pos] == blow) alpha[pos++] = 0;
      if (pos + 1 == k) break;
    }
  }
  canonicalize(pg.a_edges);
  canonicalize(pg.cross_edges);
  return pg;
}

}  // namespace rsforge::construct
