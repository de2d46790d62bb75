#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "rsforge/construct.hpp"
#include "rsforge/functions.hpp"
#include "rsforge/nof.hpp"
#include "rsforge/verify.hpp"

using namespace rsforge;

namespace {

i64 metric(const verify::VerificationReport& r, const std::string& key) {
  return std::stoll(r.metrics.at(key));
}

void check_invariant(const verify::VerificationReport& r) {
  CHECK(r.passed == r.counterexamples.empty());
}

nof::EntrySet mu_set3(i64 r_sq) {
  auto f = fns::FunctionSpec::midpoint(3, 2);
  auto p = nof::Protocol::interval(f, r_sq);
  return nof::transcript_set(p, p.mu_pattern(), nof::Scope::last_player);
}

nof::EntrySet simple_auto_set3() {
  auto f = fns::FunctionSpec::midpoint(3, 2);
  auto p = nof::Protocol::simple(f);
  return nof::transcript_set(p, nof::auto_transcript(p), nof::Scope::last_player);
}

}  // namespace

TEST_CASE("pipeline layers are induced partial Steiner systems") {
  auto g = construct::build_graph(mu_set3(2));
  auto rep = verify::check_induced_steiner_partition(g);
  check_invariant(rep);
  CHECK(rep.passed);
  CHECK(rep.metrics.at("violations") == "0");
  CHECK(metric(rep, "layers") <= 25);
  CHECK(rep.metrics.at("a_edges") == "8");

  auto f4 = fns::FunctionSpec::k_midpoint(4, 2, 2);
  auto p4 = nof::Protocol::kplayer(f4, 4, true);
  auto s4 = nof::transcript_set(p4, p4.mu_pattern(), nof::Scope::last_player);
  auto g4 = construct::build_graph(s4);
  auto rep4 = verify::check_induced_steiner_partition(g4);
  check_invariant(rep4);
  CHECK(rep4.passed);
  CHECK(rep4.metrics.at("a_edges") == "4");
  CHECK(rep4.metrics.at("layers") == "4");
  CHECK(metric(rep4, "layers") <= f4.N());
}

TEST_CASE("layer violations are reported in canonical order") {
  auto s = nof::make_entry_set(
      3, {4, 4, 3}, {{1, 2, 1}, {2, 1, 1}, {1, 3, 2}, {3, 1, 2}, {2, 3, 1}, {3, 2, 1}});
  auto rep = verify::check_induced_steiner_partition(construct::build_graph(s));
  check_invariant(rep);
  CHECK_FALSE(rep.passed);
  CHECK(rep.metrics.at("violations") == "2");
  REQUIRE(rep.counterexamples.size() == 2);
  CHECK(rep.counterexamples[0] == "layer B:1: {A:1,A:2} and {A:2,A:3} share 1 vertices");
  CHECK(rep.counterexamples[1] ==
        "layer B:1: edge {A:1,A:3} of layer B:2 lies inside the layer support");
}

TEST_CASE("an injected edge breaks a clean layer partition") {
  auto g = construct::build_graph(mu_set3(2));
  REQUIRE(verify::check_induced_steiner_partition(g).passed);

  // Give the first edge's layer a companion that reuses one of its vertices.
  auto base = g.a_edges[0];
  i64 partner = -1;
  for (i64 v = 0; v < g.n_A && partner < 0; ++v) {
    if (v == base[0] || v == base[1]) continue;
    std::vector<i64> candidate{std::min(base[0], v), std::max(base[0], v)};
    if (!std::binary_search(g.a_edges.begin(), g.a_edges.end(), candidate)) partner = v;
  }
  REQUIRE(partner >= 0);
  g.a_edges.push_back({std::min(base[0], partner), std::max(base[0], partner)});
  g.layer_of.push_back(g.layer_of[0]);

  auto rep = verify::check_induced_steiner_partition(g);
  check_invariant(rep);
  CHECK_FALSE(rep.passed);
  REQUIRE_FALSE(rep.counterexamples.empty());
  CHECK(rep.counterexamples[0].find("share") != std::string::npos);
}

TEST_CASE("counterexample lists truncate at 32 and keep the full count") {
  std::vector<std::vector<i64>> path;
  for (i64 i = 1; i <= 40; ++i) {
    path.push_back({i, i + 1, 0});
    path.push_back({i + 1, i, 0});
  }
  auto s = nof::make_entry_set(3, {42, 42, 1}, path);
  auto rep = verify::check_induced_steiner_partition(construct::build_graph(s));
  CHECK_FALSE(rep.passed);
  CHECK(rep.counterexamples.size() == 32);
  CHECK(rep.metrics.at("violations") == "39");
}

TEST_CASE("census equals S and pipeline edges complete exactly once") {
  auto two = nof::make_entry_set(3, {6, 6, 6}, {{1, 2, 5}, {2, 1, 5}});
  auto rep2 = verify::cross_clique_census(construct::build_graph(two), two);
  check_invariant(rep2);
  CHECK(rep2.passed);
  CHECK(rep2.metrics.at("cliques") == "1");
  CHECK(rep2.metrics.at("edge_clique_min") == "1");
  CHECK(rep2.metrics.at("edge_clique_max") == "1");

  auto s3 = mu_set3(2);
  auto rep3 = verify::cross_clique_census(construct::build_graph(s3), s3);
  check_invariant(rep3);
  CHECK(rep3.passed);
  CHECK(rep3.metrics.at("cliques") == "8");
  CHECK(rep3.metrics.at("expected") == "8");
  CHECK(rep3.metrics.at("edge_clique_min") == "1");
  CHECK(rep3.metrics.at("edge_clique_max") == "1");
  CHECK(rep3.metrics.at("degenerate_entries") == "0");

  auto f4 = fns::FunctionSpec::k_midpoint(4, 2, 2);
  auto p4 = nof::Protocol::kplayer(f4, 4, true);
  auto s4 = nof::transcript_set(p4, p4.mu_pattern(), nof::Scope::last_player);
  auto g4 = construct::build_graph(s4);
  auto rep4 = verify::cross_clique_census(g4, s4);
  check_invariant(rep4);
  CHECK(rep4.passed);
  CHECK(rep4.metrics.at("cliques") == "4");
  CHECK(rep4.metrics.at("expected") == "4");
  CHECK(rep4.metrics.at("degenerate_entries") == "40");
  CHECK(rep4.metrics.at("edge_clique_min") == "1");
  CHECK(rep4.metrics.at("edge_clique_max") == "1");

  CHECK_THROWS_AS(verify::cross_clique_census(g4, s3), ParameterError);
}

TEST_CASE("a narrow interval leaves only degenerate hypergraph entries") {
  // In the 2x2 grid no three distinct points are pairwise at distance 1, so
  // the tight interval keeps repeated-point tuples only: no hyperedges, an
  // empty census, and every entry logged as degenerate.
  auto f4 = fns::FunctionSpec::k_midpoint(4, 2, 2);
  auto p4 = nof::Protocol::kplayer(f4, 2, true);
  auto s4 = nof::transcript_set(p4, p4.mu_pattern(), nof::Scope::last_player);
  REQUIRE(s4.size() == 28);
  auto g4 = construct::build_graph(s4);
  CHECK(g4.a_edges.empty());
  CHECK(g4.degenerate_entries.size() == 28);
  CHECK_FALSE(g4.cross_edges.empty());

  auto census = verify::cross_clique_census(g4, s4);
  check_invariant(census);
  CHECK(census.passed);
  CHECK(census.metrics.at("cliques") == "0");
  CHECK(census.metrics.at("expected") == "0");
  CHECK(census.metrics.at("edge_clique_min") == "0");

  auto steiner = verify::check_induced_steiner_partition(g4);
  CHECK(steiner.passed);
  CHECK(steiner.metrics.at("layers") == "0");
}

TEST_CASE("a star inflates the census") {
  auto star = nof::make_entry_set(3, {4, 4, 3}, {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}});
  CHECK_FALSE(nof::check_star_free(star).empty());
  auto rep = verify::cross_clique_census(construct::build_graph(star), star);
  check_invariant(rep);
  CHECK_FALSE(rep.passed);
  CHECK(rep.metrics.at("cliques") == "3");
  CHECK(rep.metrics.at("expected") == "2");
  REQUIRE(rep.counterexamples.size() == 1);
  CHECK(rep.counterexamples[0] == "clique {A:1,B:1} has no entry in S");
}

TEST_CASE("product edges stay within the clique bounds") {
  auto s = simple_auto_set3();
  REQUIRE(s.size() == 24);

  for (int t : {1, 2}) {
    auto tmpl = construct::default_template(3, t, 9);
    auto pg = construct::build_product(s, t, tmpl);
    auto rep = verify::check_product_bounds(pg);
    check_invariant(rep);
    CHECK(rep.passed);
    CHECK(rep.metrics.at("bound") == std::to_string(i64{1} << t));
    CHECK(rep.metrics.at("edge_min") == "1");
    // The alpha-halves selector pins the free blow-up coordinate to one half.
    CHECK(rep.metrics.at("edge_max") == std::to_string(i64{1} << (t - 1)));
    if (t == 1) {
      CHECK(rep.metrics.at("density") == "72/1849");
      CHECK(rep.metrics.at("density_target") == "81/1849");
    } else {
      CHECK(rep.metrics.at("density") == "192/3721");
      CHECK(rep.metrics.at("density_target") == "324/3721");
    }
  }

  auto identity = construct::build_product(s, 0, construct::full_template(3, 0, 9));
  auto rep0 = verify::check_product_bounds(identity);
  check_invariant(rep0);
  CHECK(rep0.passed);
  CHECK(rep0.metrics.at("bound") == "1");
  CHECK(rep0.metrics.at("edge_min") == "1");
  CHECK(rep0.metrics.at("edge_max") == "1");
  CHECK(rep0.metrics.at("cliques") == "12");
}

TEST_CASE("a base-split template reaches the 2^t maximum") {
  auto s = simple_auto_set3();
  for (int t : {1, 2}) {
    const i64 blow = i64{1} << t;
    construct::CliqueTemplate tmpl;
    tmpl.k = 3;
    tmpl.t = t;
    tmpl.n = 9;
    for (i64 a = 0; a < blow; ++a)
      for (i64 x = 0; x < 5; ++x)
        for (i64 b = 0; b < blow; ++b)
          for (i64 y = 5; y < 9; ++y) {
            std::vector<i64> e{a * 9 + x, b * 9 + y};
            std::sort(e.begin(), e.end());
            tmpl.edges.push_back(std::move(e));
          }
    std::sort(tmpl.edges.begin(), tmpl.edges.end());
    tmpl.edges.erase(std::unique(tmpl.edges.begin(), tmpl.edges.end()), tmpl.edges.end());
    tmpl.declared_density = Rat(static_cast<i64>(tmpl.edges.size()), blow * 9 * blow * 9);
    construct::check_template(tmpl);
    REQUIRE(tmpl.kk_free_checked);
    REQUIRE(tmpl.kk_free);

    auto pg = construct::build_product(s, t, tmpl);
    auto rep = verify::check_product_bounds(pg);
    check_invariant(rep);
    CHECK(rep.passed);
    CHECK(rep.metrics.at("edge_min") == "1");
    CHECK(rep.metrics.at("edge_max") == std::to_string(blow));
  }
}

TEST_CASE("a stranded cross edge fails the product bound") {
  auto s = simple_auto_set3();
  auto pg = construct::build_product(s, 1, construct::default_template(3, 1, 9));

  // A layer no base entry uses can complete nothing.
  auto g = construct::build_graph(s);
  std::vector<i64> used(g.layer_of);
  std::sort(used.begin(), used.end());
  i64 empty_z = -1;
  for (i64 z = 0; z < g.n_B && empty_z < 0; ++z)
    if (!std::binary_search(used.begin(), used.end(), z)) empty_z = z;
  REQUIRE(empty_z >= 0);

  std::vector<i64> stray{0, empty_z};
  pg.cross_edges.insert(
      std::lower_bound(pg.cross_edges.begin(), pg.cross_edges.end(), stray), stray);
  auto rep = verify::check_product_bounds(pg);
  check_invariant(rep);
  CHECK_FALSE(rep.passed);
  CHECK(rep.metrics.at("edge_min") == "0");
  REQUIRE_FALSE(rep.counterexamples.empty());
  CHECK(rep.counterexamples[0] ==
        "cross edge {A:0,B:" + std::to_string(empty_z) + "} lies in 0 cliques, outside [1, 2]");
}

TEST_CASE("concentration histogram, tails, and the interval mass") {
  auto rep = verify::check_concentration(3, 2, 2);
  check_invariant(rep);
  CHECK(rep.passed);
  CHECK(rep.metrics.at("pairs") == "81");
  CHECK(rep.metrics.at("mean") == "8/3");
  CHECK(rep.metrics.at("p") == "16/81");
  CHECK(rep.metrics.at("mu_mass_pairs") == "16");
  CHECK(rep.metrics.at("t_max") == "18");

  // p * n^2 equals the mean-interval transcript class counted independently.
  CHECK(mu_set3(2).size() == 16);

  auto r21 = verify::check_concentration(2, 1, 1);
  CHECK(r21.passed);
  CHECK(r21.metrics.at("mean") == "1/2");
  CHECK(r21.metrics.at("p") == "1/2");
  CHECK(r21.metrics.at("t_max") == "4");

  auto r42 = verify::check_concentration(4, 2, 4);
  CHECK(r42.passed);
  CHECK(r42.metrics.at("pairs") == "256");
  CHECK(r42.metrics.at("mean") == "5/1");

  CHECK_THROWS_AS(verify::check_concentration(4, 2, 1, 100), ResourceCapError);
  CHECK_THROWS_AS(verify::check_concentration(1, 1, 1), ParameterError);
}

TEST_CASE("bound report inequalities") {
  auto f = fns::FunctionSpec::midpoint(3, 2);
  auto rep = verify::bound_report(f, 2, 24, 24, false);
  check_invariant(rep);
  CHECK(rep.passed);
  CHECK(rep.metrics.at("p") == "8/27");
  CHECK(rep.metrics.at("N") == "25");
  CHECK(rep.metrics.at("N_bound") == "36");
  CHECK(rep.metrics.at("N_prime") == "100");
  CHECK(rep.metrics.at("h_bound") == "10000/81");
  CHECK(rep.metrics.at("layer_bound") == "25");

  auto broken = verify::bound_report(f, 2, 24, 26, false);
  check_invariant(broken);
  CHECK_FALSE(broken.passed);
  CHECK(broken.metrics.at("violations") == "1");
  REQUIRE(broken.counterexamples.size() == 1);
  CHECK(broken.counterexamples[0].find("exceeds") != std::string::npos);

  auto augmented = verify::bound_report(f, 2, 24, 26, true);
  CHECK(augmented.passed);
  CHECK(augmented.metrics.at("layer_bound") == "100");

  auto f4 = fns::FunctionSpec::k_midpoint(4, 2, 2);
  auto rep4 = verify::bound_report(f4, 7, 28, 16, false);
  CHECK(rep4.passed);
  CHECK(rep4.metrics.at("N") == "16");
  CHECK(rep4.metrics.at("N_bound") == "64");

  CHECK_THROWS_AS(verify::bound_report(f, -1, 1, 1, false), ParameterError);
  CHECK_THROWS_AS(verify::bound_report(f, 33, 1, 1, false), ParameterError);
  CHECK_THROWS_AS(verify::bound_report(f, 2, -1, 1, false), ParameterError);
}

TEST_CASE("reports agree across thread counts") {
  auto s = mu_set3(2);
  auto g = construct::build_graph(s);
  auto c1 = verify::cross_clique_census(g, s, 1);
  auto c4 = verify::cross_clique_census(g, s, 4);
  CHECK(c1.passed == c4.passed);
  CHECK(c1.counterexamples == c4.counterexamples);
  CHECK(c1.metrics == c4.metrics);

  auto pg = construct::build_product(simple_auto_set3(), 2, construct::default_template(3, 2, 9));
  auto b1 = verify::check_product_bounds(pg, 1);
  auto b4 = verify::check_product_bounds(pg, 4);
  CHECK(b1.counterexamples == b4.counterexamples);
  CHECK(b1.metrics == b4.metrics);

  auto h1 = verify::check_concentration(3, 2, 2, default_cap(), 1);
  auto h4 = verify::check_concentration(3, 2, 2, default_cap(), 4);
  CHECK(h1.metrics == h4.metrics);

  CHECK(verify::all_passed({c1, b1, h1}));
  CHECK_FALSE(verify::all_passed(
      {c1, verify::bound_report(fns::FunctionSpec::midpoint(3, 2), 2, 24, 26, false)}));
}
