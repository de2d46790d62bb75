// Acceptance gate: one line per criterion, [PASS]/[FAIL], nonzero exit on any
// failure. Tolerances are pinned here: time limits in seconds, everything else
// exact (integer or rational equality, empty violation lists).

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rsforge/construct.hpp"
#include "rsforge/functions.hpp"
#include "rsforge/nof.hpp"
#include "rsforge/verify.hpp"

using namespace rsforge;
namespace fs = std::filesystem;

namespace {

constexpr double kLimitLines = 5.0;        // criterion 1, per run
constexpr double kLimitCorrect = 30.0;     // criterion 2, per run
constexpr double kLimitPipeline = 10.0;    // criterion 4
constexpr double kLimitProduct = 60.0;     // criterion 7
constexpr double kLimitHypergraph = 60.0;  // criterion 8

const std::vector<std::pair<int, int>> kGridPairs = {{2, 1}, {2, 2}, {3, 1}, {3, 2}, {4, 1}};

using Notes = std::vector<std::string>;

void expect(bool cond, const std::string& msg, Notes& notes) {
  if (!cond) notes.push_back(msg);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string tag(int q, int d) { return "(" + std::to_string(q) + "," + std::to_string(d) + ")"; }

std::string rat_str(const Rat& v) {
  return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
}

// --- criterion bodies ------------------------------------------------------

void sub_permutation_suite(Notes& notes) {
  for (auto [q, d] : kGridPairs) {
    auto start = std::chrono::steady_clock::now();
    auto strict = fns::check_lines(fns::FunctionSpec::midpoint(q, d), fns::LineMode::sub);
    expect(fns::all_passed(strict), "midpoint " + tag(q, d) + " fails the strict line check",
           notes);
    auto weak = fns::check_lines(fns::FunctionSpec::cube(q, d), fns::LineMode::weak);
    expect(fns::all_passed(weak), "cube " + tag(q, d) + " fails the weak line check", notes);
    expect(seconds_since(start) < kLimitLines, "line checks " + tag(q, d) + " over time limit",
           notes);
  }
  const std::vector<std::tuple<int, int, int>> kqd = {{4, 2, 1}, {4, 2, 2}, {5, 2, 1}};
  for (auto [k, q, d] : kqd) {
    auto start = std::chrono::steady_clock::now();
    auto strict = fns::check_lines(fns::FunctionSpec::k_midpoint(k, q, d), fns::LineMode::sub);
    expect(fns::all_passed(strict),
           "k_midpoint (" + std::to_string(k) + "," + std::to_string(q) + "," +
               std::to_string(d) + ") fails the strict line check",
           notes);
    expect(seconds_since(start) < kLimitLines, "k-line check over time limit", notes);
  }
}

void protocol_correctness(Notes& notes) {
  auto run = [&](const nof::Protocol& p, const std::string& what) {
    auto start = std::chrono::steady_clock::now();
    auto bad = nof::check_correct(p);
    expect(bad.empty(),
           what + ": " + std::to_string(bad.size()) + " counterexamples reported", notes);
    expect(seconds_since(start) < kLimitCorrect, what + " over time limit", notes);
  };
  for (auto [q, d] : kGridPairs) {
    auto g = fns::FunctionSpec::midpoint(q, d);
    run(nof::Protocol::simple(g), "simple " + tag(q, d));
    for (i64 r_sq : {i64{d}, i64{2 * d}})
      run(nof::Protocol::interval(g, r_sq),
          "interval " + tag(q, d) + " r_sq=" + std::to_string(r_sq));
  }
  auto g4 = fns::FunctionSpec::k_midpoint(4, 2, 2);
  for (i64 r_sq : {i64{2}, i64{4}})
    run(nof::Protocol::kplayer(g4, r_sq, true), "kplayer (4,2,2) r_sq=" + std::to_string(r_sq));
}

void exact_costs(Notes& notes) {
  for (auto [q, d] : kGridPairs) {
    i64 c = nof::cost(nof::Protocol::simple(fns::FunctionSpec::midpoint(q, d)));
    expect(c == 2, "cost(simple " + tag(q, d) + ") = " + std::to_string(c) + ", want 2", notes);
  }
  const std::vector<std::tuple<int, int, int>> kqd = {{4, 2, 1}, {4, 2, 2}, {5, 2, 1}};
  for (auto [k, q, d] : kqd) {
    for (i64 r_sq : {i64{d}, i64{2 * d}}) {
      i64 inner = nof::cost(nof::Protocol::interval(fns::FunctionSpec::midpoint(q, d), r_sq));
      i64 outer =
          nof::cost(nof::Protocol::kplayer(fns::FunctionSpec::k_midpoint(k, q, d), r_sq, true));
      expect(outer == inner + 1,
             "cost(kplayer (" + std::to_string(k) + "," + std::to_string(q) + "," +
                 std::to_string(d) + "), r_sq=" + std::to_string(r_sq) + ") = " +
                 std::to_string(outer) + ", want cost(interval)+1 = " + std::to_string(inner + 1),
             notes);
    }
  }
}

nof::EntrySet pipeline_set3() {
  auto p = nof::Protocol::simple(fns::FunctionSpec::midpoint(3, 2));
  return nof::transcript_set(p, nof::auto_transcript(p), nof::Scope::last_player);
}

void recipe_pipeline(Notes& notes) {
  auto start = std::chrono::steady_clock::now();
  auto s = pipeline_set3();
  expect(nof::check_symmetric(s), "transcript class is not symmetric", notes);
  expect(nof::check_star_free(s).empty(), "transcript class contains a star", notes);
  auto g = construct::build_graph(s);
  auto layers = construct::partition_layers(g);
  expect(static_cast<i64>(layers.size()) <= 25,
         "layer count " + std::to_string(layers.size()) + " exceeds N=25", notes);
  i64 covered = 0;
  for (const auto& l : layers) {
    expect(!l.edges.empty(), "empty layer emitted", notes);
    covered += static_cast<i64>(l.edges.size());
  }
  expect(covered == static_cast<i64>(g.a_edges.size()), "layers do not cover the edge set",
         notes);
  auto rep = verify::check_induced_steiner_partition(g);
  expect(rep.passed, "induced-matching check failed: " +
                         (rep.counterexamples.empty() ? std::string("?") : rep.counterexamples[0]),
         notes);
  expect(seconds_since(start) < kLimitPipeline, "pipeline over time limit", notes);
}

void census_equality(Notes& notes) {
  auto s = pipeline_set3();
  auto g = construct::build_graph(s);
  auto rep = verify::cross_clique_census(g, s);
  expect(rep.passed, "census differs from S on the pipeline instance", notes);
  expect(rep.metrics.at("cliques") == rep.metrics.at("expected"),
         "census size " + rep.metrics.at("cliques") + " != |S| " + rep.metrics.at("expected"),
         notes);

  auto star = nof::make_entry_set(3, {4, 4, 3}, {{2, 1, 1}, {1, 2, 1}, {1, 1, 2}});
  expect(!nof::check_star_free(star).empty(), "synthetic star set reads as star-free", notes);
  auto star_rep = verify::cross_clique_census(construct::build_graph(star), star);
  expect(!star_rep.passed && star_rep.metrics.at("cliques") > star_rep.metrics.at("expected"),
         "star fault injection did not inflate the census", notes);
}

void augmentation(Notes& notes) {
  auto f = fns::FunctionSpec::midpoint(3, 2);
  auto p = nof::Protocol::simple(f);
  auto pattern = nof::auto_transcript(p);
  auto aug = nof::augment(p, pattern);
  expect(aug.n_prime == f.N() * (i64{1} << aug.gamma),
         "N' = " + std::to_string(aug.n_prime) + " != N*2^gamma", notes);
  expect(fns::all_passed(fns::check_lines(*aug.g, fns::LineMode::weak)),
         "augmented function fails the weak line check", notes);
  auto s = nof::transcript_set(p, pattern, nof::Scope::last_player);
  expect(aug.s_prime.size() == s.size(),
         "|S'| = " + std::to_string(aug.s_prime.size()) + " != |S_k(T)| = " +
             std::to_string(s.size()),
         notes);
  auto layers = construct::partition_layers(construct::build_graph(aug.s_prime));
  expect(static_cast<i64>(layers.size()) <= aug.n_prime,
         "augmented layer count exceeds N'", notes);
}

void product_bounds(Notes& notes) {
  auto start = std::chrono::steady_clock::now();
  auto s = pipeline_set3();
  for (int t : {1, 2}) {
    auto tmpl = construct::default_template(3, t, 9);
    expect(tmpl.declared_density == Rat(1, 4),
           "template density " + rat_str(tmpl.declared_density) + " != 1/4 at t=" +
               std::to_string(t),
           notes);
    auto rep = verify::check_product_bounds(construct::build_product(s, t, tmpl));
    expect(rep.passed, "product bounds violated at t=" + std::to_string(t) + ": " +
                           (rep.counterexamples.empty() ? std::string("?")
                                                        : rep.counterexamples[0]),
           notes);
    expect(rep.metrics.at("bound") == std::to_string(i64{1} << t),
           "wrong clique bound at t=" + std::to_string(t), notes);
  }
  expect(seconds_since(start) < kLimitProduct, "product run over time limit", notes);
}

void hypergraph_pipeline(Notes& notes) {
  auto start = std::chrono::steady_clock::now();
  auto p = nof::Protocol::kplayer(fns::FunctionSpec::k_midpoint(4, 2, 2), 4, true);
  auto s = nof::transcript_set(p, p.mu_pattern(), nof::Scope::last_player);
  auto g = construct::build_graph(s);
  expect(!g.a_edges.empty(), "hypergraph pipeline produced no triples", notes);
  auto steiner = verify::check_induced_steiner_partition(g);
  expect(steiner.passed,
         "layers are not induced partial Steiner systems: " +
             (steiner.counterexamples.empty() ? std::string("?") : steiner.counterexamples[0]),
         notes);
  auto layers = construct::partition_layers(g);
  expect(static_cast<i64>(layers.size()) <= p.function().N(),
         "layer count exceeds N=" + std::to_string(p.function().N()), notes);
  auto census = verify::cross_clique_census(g, s);
  expect(census.passed, "K4 census differs from S", notes);
  expect(seconds_since(start) < kLimitHypergraph, "hypergraph run over time limit", notes);
}

void counting_identities(Notes& notes) {
  for (auto [q, d] : kGridPairs) {
    i64 N = fns::FunctionSpec::midpoint(q, d).N();
    expect(N == ipow(2 * q - 1, d),
           "|Z| = " + std::to_string(N) + " != (2q-1)^d at " + tag(q, d), notes);
    expect(N <= ipow(2 * q, d), "|Z| exceeds (2q)^d at " + tag(q, d), notes);
  }
  for (int q : {2, 4}) {
    for (int d : {1, 2}) {
      i64 ones = fns::ones_count(fns::FunctionSpec::cube(q, d));
      i64 bound = ipow(q, d) * ipow(q / 2, d);
      expect(ones >= bound,
             "|f^-1(1)| = " + std::to_string(ones) + " < q^d (q/2)^d = " +
                 std::to_string(bound) + " at " + tag(q, d),
             notes);
    }
  }
}

void concentration(Notes& notes) {
  for (int q : {3, 4}) {
    const int d = 2;
    for (i64 r_sq : {i64{d}, i64{2 * d}}) {
      auto rep = verify::check_concentration(q, d, r_sq);
      expect(rep.passed,
             "tail bound violated at " + tag(q, d) + " r_sq=" + std::to_string(r_sq) + ": " +
                 (rep.counterexamples.empty() ? std::string("?") : rep.counterexamples[0]),
             notes);
      auto g = fns::FunctionSpec::midpoint(q, d);
      auto p = nof::Protocol::interval(g, r_sq);
      auto s3 = nof::transcript_set(p, p.mu_pattern(), nof::Scope::last_player);
      std::string independent = rat_str(Rat(s3.size(), g.n() * g.n()));
      expect(rep.metrics.at("p") == independent,
             "reported p " + rep.metrics.at("p") + " != |S_3(I_r(mu))|/n^2 = " + independent +
                 " at " + tag(q, d) + " r_sq=" + std::to_string(r_sq),
             notes);
    }
  }
}

std::string sha256_file(const fs::path& p, Notes& notes) {
  std::ifstream f(p, std::ios::binary);
  if (!f) {
    notes.push_back("missing artifact " + p.string());
    return "";
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  std::string data = ss.str();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

void determinism(Notes& notes) {
  const char* bin = std::getenv("RSFORGE_BIN");
  if (!bin) {
    notes.push_back("RSFORGE_BIN not set; cannot drive the binary");
    return;
  }
  fs::path base = fs::temp_directory_path() / "rsforge_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  const std::vector<std::string> configs = {
      "construct --q 3 --d 2 --k 3 --protocol simple --transcript auto --t 1",
      "construct --q 2 --d 2 --k 4 --r 2 --protocol kplayer --transcript mu",
  };
  int ci = 0;
  for (const auto& cfg : configs) {
    fs::path a = base / ("run" + std::to_string(ci) + "_a");
    fs::path b = base / ("run" + std::to_string(ci) + "_b");
    ++ci;
    for (const auto& out : {a, b}) {
      std::string cmd = std::string(bin) + " " + cfg + " --out " + out.string() +
                        " >/dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        notes.push_back("constructing '" + cfg + "' failed");
        return;
      }
    }
    for (const auto& entry : fs::directory_iterator(a)) {
      auto name = entry.path().filename();
      auto ha = sha256_file(a / name, notes);
      auto hb = sha256_file(b / name, notes);
      expect(!ha.empty() && ha == hb,
             "artifact " + name.string() + " differs between identical runs of '" + cfg + "'",
             notes);
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Notes&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "line checks across the instance matrix", sub_permutation_suite},
      {2, "protocol correctness on exhaustive domains", protocol_correctness},
      {3, "exact protocol costs", exact_costs},
      {4, "three-player pipeline invariants", recipe_pipeline},
      {5, "cross-triangle census equality and star contrapositive", census_equality},
      {6, "augmentation identities", augmentation},
      {7, "product clique bounds and template density", product_bounds},
      {8, "four-player hypergraph pipeline", hypergraph_pipeline},
      {9, "counting identities", counting_identities},
      {10, "distance concentration tails and interval mass", concentration},
      {11, "byte-identical artifacts across runs", determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Notes notes;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(notes);
    } catch (const std::exception& e) {
      notes.push_back(std::string("exception: ") + e.what());
    }
    double secs = seconds_since(start);
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    if (notes.empty()) {
      std::cout << "[PASS] criterion " << c.id << ": " << c.title << " (" << timing << ")\n";
    } else {
      ++failed;
      std::cout << "[FAIL] criterion " << c.id << ": " << c.title << " (" << timing << ")\n";
      for (const auto& n : notes) std::cout << "       - " << n << "\n";
    }
  }
  if (failed) std::cout << failed << " of " << criteria.size() << " criteria failed\n";
  return failed ? 1 : 0;
}
