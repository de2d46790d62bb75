#include "rsforge/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "rsforge/nof.hpp"

namespace rsforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string rat_str(const Rat& v) {
  return std::to_string(v.numerator()) + "/" + std::to_string(v.denominator());
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw IoError("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write " + p.string());
  f << content;
  f.flush();
  if (!f) throw IoError("cannot write " + p.string());
}

i64 effective_cap(const RunConfig& c) { return c.cap > 0 ? c.cap : default_cap(); }

fns::FunctionSpec make_function(const RunConfig& c) {
  if (c.k == 3) return fns::FunctionSpec::midpoint(c.q, c.d);
  return fns::FunctionSpec::k_midpoint(c.k, c.q, c.d);
}

nof::Protocol make_protocol(const RunConfig& c, const fns::FunctionSpec& f) {
  i64 cap = effective_cap(c);
  if (c.protocol == "simple") return nof::Protocol::simple(f);
  if (c.r < 1) throw ParameterError("protocol '" + c.protocol + "' needs --r >= 1");
  if (c.protocol == "interval") return nof::Protocol::interval(f, c.r * c.r, cap);
  if (c.protocol == "kplayer") return nof::Protocol::kplayer(f, c.r * c.r, true, cap);
  throw ParameterError("unknown protocol '" + c.protocol + "'");
}

std::string pick_pattern(const RunConfig& c, const nof::Protocol& p, i64 cap) {
  if (c.transcript == "auto") return nof::auto_transcript(p, cap, c.threads);
  if (c.transcript == "mu") return p.mu_pattern();
  const std::string prefix = "explicit:";
  if (c.transcript.rfind(prefix, 0) == 0) {
    std::string bits = c.transcript.substr(prefix.size());
    for (char ch : bits)
      if (ch != '0' && ch != '1')
        throw ParameterError("explicit transcript must be a bit string");
    return bits;
  }
  throw ParameterError("unknown transcript mode '" + c.transcript + "'");
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

i64 parse_tagged(const std::string& tok, const std::string& prefix) {
  auto bad = [&] { return IoError("edge list: bad token '" + tok + "'"); };
  if (tok.rfind(prefix, 0) != 0 || tok.size() == prefix.size()) throw bad();
  i64 v = 0;
  for (size_t i = prefix.size(); i < tok.size(); ++i) {
    char ch = tok[i];
    if (ch < '0' || ch > '9' || v > (std::numeric_limits<i64>::max() - 9) / 10) throw bad();
    v = v * 10 + (ch - '0');
  }
  return v;
}

struct Header {
  int k = 0;
  i64 n_A = 0;
  i64 n_B = 0;
};

Header parse_header(const std::string& line) {
  Header h;
  long long na = 0, nb = 0;
  if (std::sscanf(line.c_str(), "# rsforge v1 k=%d nA=%lld nB=%lld", &h.k, &na, &nb) != 3)
    throw IoError("edge list: malformed header");
  if (h.k < 3 || na < 0 || nb < 0) throw IoError("edge list: bad header values");
  h.n_A = na;
  h.n_B = nb;
  return h;
}

std::vector<i64> sorted_a_part(const std::vector<std::string>& toks, size_t count) {
  std::vector<i64> edge;
  edge.reserve(count);
  for (size_t i = 0; i < count; ++i) edge.push_back(parse_tagged(toks[i], "A:"));
  std::sort(edge.begin(), edge.end());
  if (std::adjacent_find(edge.begin(), edge.end()) != edge.end())
    throw IoError("edge list: repeated vertex in an edge");
  return edge;
}

}  // namespace

std::string render_edgelist(const construct::LayeredGraph& g) {
  std::string out = "# rsforge v1 k=" + std::to_string(g.k) + " nA=" + std::to_string(g.n_A) +
                    " nB=" + std::to_string(g.n_B) + "\n";
  for (size_t i = 0; i < g.a_edges.size(); ++i) {
    for (size_t j = 0; j < g.a_edges[i].size(); ++j) {
      if (j) out += ' ';
      out += "A:" + std::to_string(g.a_edges[i][j]);
    }
    out += " z=B:" + std::to_string(g.layer_of[i]) + "\n";
  }
  for (const auto& e : g.cross_edges) {
    for (size_t j = 0; j + 1 < e.size(); ++j) out += "A:" + std::to_string(e[j]) + " ";
    out += "B:" + std::to_string(e.back()) + "\n";
  }
  return out;
}

construct::LayeredGraph parse_edgelist(const std::string& text) {
  std::istringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw IoError("edge list: empty file");
  Header h = parse_header(line);
  construct::LayeredGraph g;
  g.k = h.k;
  g.n_A = h.n_A;
  g.n_B = h.n_B;

  std::vector<std::pair<std::vector<i64>, i64>> layered;
  while (std::getline(ss, line)) {
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.back().rfind("z=B:", 0) == 0) {
      i64 z = parse_tagged(toks.back(), "z=B:");
      auto edge = sorted_a_part(toks, toks.size() - 1);
      bool size_ok =
          static_cast<int>(edge.size()) == g.k - 1 || (g.k == 3 && edge.size() == 1);
      if (!size_ok) throw IoError("edge list: wrong A-part edge size");
      if (edge.back() >= g.n_A || z >= g.n_B) throw IoError("edge list: vertex out of range");
      layered.emplace_back(std::move(edge), z);
    } else {
      if (static_cast<int>(toks.size()) != g.k - 1)
        throw IoError("edge list: wrong cross edge size");
      auto edge = sorted_a_part(toks, toks.size() - 1);
      i64 z = parse_tagged(toks.back(), "B:");
      if ((!edge.empty() && edge.back() >= g.n_A) || z >= g.n_B)
        throw IoError("edge list: vertex out of range");
      edge.push_back(z);
      g.cross_edges.push_back(std::move(edge));
    }
  }
  std::sort(layered.begin(), layered.end());
  for (auto& [edge, z] : layered) {
    g.a_edges.push_back(std::move(edge));
    g.layer_of.push_back(z);
  }
  std::sort(g.cross_edges.begin(), g.cross_edges.end());
  return g;
}

std::string render_product_edgelist(const construct::ProductGraph& pg) {
  std::string out = "# rsforge v1 k=" + std::to_string(pg.k) + " nA=" + std::to_string(pg.n_A) +
                    " nB=" + std::to_string(pg.n_B) + "\n";
  for (const auto& e : pg.a_edges) {
    for (size_t j = 0; j < e.size(); ++j) {
      if (j) out += ' ';
      out += "A:" + std::to_string(e[j]);
    }
    out += "\n";
  }
  for (const auto& e : pg.cross_edges) {
    for (size_t j = 0; j + 1 < e.size(); ++j) out += "A:" + std::to_string(e[j]) + " ";
    out += "B:" + std::to_string(e.back()) + "\n";
  }
  return out;
}

construct::ProductGraph parse_product_edgelist(const std::string& text, int t) {
  if (t < 0 || t > 20) throw ParameterError("product exponent out of range");
  std::istringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw IoError("edge list: empty file");
  Header h = parse_header(line);
  construct::ProductGraph pg;
  pg.k = h.k;
  pg.t = t;
  pg.n_A = h.n_A;
  pg.n_B = h.n_B;

  while (std::getline(ss, line)) {
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.back().rfind("B:", 0) == 0) {
      if (static_cast<int>(toks.size()) != pg.k - 1)
        throw IoError("edge list: wrong cross edge size");
      auto edge = sorted_a_part(toks, toks.size() - 1);
      i64 z = parse_tagged(toks.back(), "B:");
      if ((!edge.empty() && edge.back() >= pg.n_A) || z >= pg.n_B)
        throw IoError("edge list: vertex out of range");
      edge.push_back(z);
      pg.cross_edges.push_back(std::move(edge));
    } else {
      auto edge = sorted_a_part(toks, toks.size());
      bool size_ok =
          static_cast<int>(edge.size()) == pg.k - 1 || (pg.k == 3 && edge.size() == 1);
      if (!size_ok) throw IoError("edge list: wrong A-part edge size");
      if (edge.back() >= pg.n_A) throw IoError("edge list: vertex out of range");
      pg.a_edges.push_back(std::move(edge));
    }
  }
  std::sort(pg.a_edges.begin(), pg.a_edges.end());
  std::sort(pg.cross_edges.begin(), pg.cross_edges.end());
  return pg;
}

std::string render_template(const construct::CliqueTemplate& tmpl) {
  std::string out = std::to_string(tmpl.k) + " " + std::to_string(tmpl.t) + " " +
                    std::to_string(tmpl.n) + "\n";
  for (const auto& e : tmpl.edges) {
    for (size_t j = 0; j < e.size(); ++j) {
      if (j) out += ' ';
      out += std::to_string(e[j] / tmpl.n) + ":" + std::to_string(e[j] % tmpl.n);
    }
    out += "\n";
  }
  return out;
}

construct::CliqueTemplate parse_template(const std::string& text) {
  std::istringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw IoError("template: empty file");
  construct::CliqueTemplate tmpl;
  long long n = 0;
  if (std::sscanf(line.c_str(), "%d %d %lld", &tmpl.k, &tmpl.t, &n) != 3)
    throw IoError("template: malformed header (want 'k t n')");
  tmpl.n = n;
  if (tmpl.k < 3 || tmpl.t < 0 || tmpl.t > 20 || tmpl.n < 1)
    throw IoError("template: bad header values");
  const i64 blow = i64{1} << tmpl.t;

  while (std::getline(ss, line)) {
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    std::vector<i64> edge;
    for (const auto& tok : toks) {
      auto colon = tok.find(':');
      if (colon == std::string::npos) throw IoError("template: bad vertex token '" + tok + "'");
      i64 alpha = parse_tagged("V:" + tok.substr(0, colon), "V:");
      i64 x = parse_tagged("V:" + tok.substr(colon + 1), "V:");
      if (alpha >= blow || x >= tmpl.n)
        throw IoError("template: vertex out of range in '" + tok + "'");
      edge.push_back(alpha * tmpl.n + x);
    }
    std::sort(edge.begin(), edge.end());
    if (std::adjacent_find(edge.begin(), edge.end()) != edge.end())
      throw IoError("template: repeated vertex in an edge");
    bool size_ok =
        static_cast<int>(edge.size()) == tmpl.k - 1 || (tmpl.k == 3 && edge.size() == 1);
    if (!size_ok) throw IoError("template: wrong edge size");
    tmpl.edges.push_back(std::move(edge));
  }
  std::sort(tmpl.edges.begin(), tmpl.edges.end());
  tmpl.edges.erase(std::unique(tmpl.edges.begin(), tmpl.edges.end()), tmpl.edges.end());
  tmpl.declared_density =
      Rat(static_cast<i64>(tmpl.edges.size()), ipow(blow * tmpl.n, tmpl.k - 1));
  return tmpl;
}

std::string report_json(const verify::VerificationReport& r) {
  json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["counterexamples"] = r.counterexamples;
  j["metrics"] = r.metrics;
  return j.dump();
}

namespace {

json config_json(const RunConfig& c) {
  json j;
  j["q"] = c.q;
  j["d"] = c.d;
  j["k"] = c.k;
  j["r"] = c.r;
  j["protocol"] = c.protocol;
  j["transcript"] = c.transcript;
  j["t"] = c.t;
  j["template"] = c.template_path;
  return j;
}

// Re-reads the manifest, re-hashes its embedded config, and adopts the
// construction fields; execution knobs stay with the invocation.
RunConfig load_manifest(const RunConfig& invocation) {
  std::string text = read_file(fs::path(invocation.out) / "manifest.json");
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::exception&) {
    throw ManifestError("manifest is not valid json");
  }
  RunConfig c = invocation;
  try {
    std::string stored = manifest.at("config_hash").get<std::string>();
    json cfg = manifest.at("config");
    if (sha256_hex(cfg.dump()) != stored)
      throw ManifestError("manifest hash does not match its config");
    c.q = cfg.at("q").get<int>();
    c.d = cfg.at("d").get<int>();
    c.k = cfg.at("k").get<int>();
    c.r = cfg.at("r").get<i64>();
    c.protocol = cfg.at("protocol").get<std::string>();
    c.transcript = cfg.at("transcript").get<std::string>();
    c.t = cfg.at("t").get<int>();
    c.template_path = cfg.at("template").get<std::string>();
  } catch (const json::exception&) {
    throw ManifestError("manifest missing required fields");
  }
  return c;
}

json build_stats(const RunConfig& c, const fns::FunctionSpec& f, i64 gamma, i64 entry_count,
                 i64 layer_count, i64 max_clique) {
  json s;
  s["q"] = c.q;
  s["d"] = c.d;
  s["k"] = c.k;
  s["r"] = c.r;
  s["protocol"] = c.protocol;
  s["gamma"] = gamma;
  s["N"] = f.N();
  s["Nprime"] = f.N() * (i64{1} << gamma);
  s["p"] = rat_str(Rat(entry_count, ipow(f.n(), c.k - 1)));
  s["layers"] = layer_count;
  s["max_clique_per_edge"] = max_clique;
  json bounds;
  bounds["N_le_2q_pow_d"] = f.N() <= ipow(2 * c.q, c.d);
  Rat h(f.N() * (i64{1} << gamma), f.n());
  bounds["h_bound"] = rat_str(h * h);
  s["bounds"] = bounds;
  return s;
}

construct::CliqueTemplate load_template(const RunConfig& c, i64 n) {
  if (!c.template_path.empty()) {
    auto tmpl = parse_template(read_file(c.template_path));
    if (tmpl.k != c.k || tmpl.t != c.t || tmpl.n != n)
      throw ParameterError("template header does not match the run configuration");
    return tmpl;
  }
  if (c.t == 0) return construct::full_template(c.k, 0, n, effective_cap(c));
  return construct::default_template(c.k, c.t, n);
}

struct Pipeline {
  fns::FunctionSpec f;
  nof::Protocol p;
  std::string pattern;
  nof::EntrySet s;
};

Pipeline run_pipeline(const RunConfig& c) {
  i64 cap = effective_cap(c);
  auto f = make_function(c);
  auto p = make_protocol(c, f);
  auto pattern = pick_pattern(c, p, cap);
  auto s = nof::transcript_set(p, pattern, nof::Scope::last_player, cap, c.threads);
  return Pipeline{std::move(f), std::move(p), std::move(pattern), std::move(s)};
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {"steiner", "census", "bounds", "concentration",
                                                 "product"};
  return names;
}

bool wants(const RunConfig& c, const std::string& name) {
  if (c.checks.empty()) return true;
  return std::find(c.checks.begin(), c.checks.end(), name) != c.checks.end();
}

}  // namespace

int cmd_construct(const RunConfig& c) {
  i64 cap = effective_cap(c);
  auto pl = run_pipeline(c);
  if (!nof::check_symmetric(pl.s))
    throw ContractError("transcript class is not symmetric under A-coordinate swaps");
  auto g = construct::build_graph(pl.s);
  auto layers = construct::partition_layers(g);
  i64 gamma = nof::cost(pl.p, cap, c.threads);
  auto census = verify::cross_clique_census(g, pl.s, c.threads);
  i64 max_clique = std::stoll(census.metrics.at("edge_clique_max"));

  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec || !fs::is_directory(c.out))
    throw IoError("cannot create output directory " + c.out);
  fs::path out(c.out);

  write_file(out / "graph.edgelist", render_edgelist(g));

  json layer_doc;
  layer_doc["layers"] = json::array();
  for (const auto& l : layers) {
    json item;
    item["z"] = l.z;
    item["edges"] = l.edges;
    layer_doc["layers"].push_back(item);
  }
  write_file(out / "layers.json", layer_doc.dump(2) + "\n");

  auto stats = build_stats(c, pl.f, gamma, static_cast<i64>(pl.s.size()),
                           static_cast<i64>(layers.size()), max_clique);
  write_file(out / "stats.json", stats.dump(2) + "\n");

  if (c.t >= 0) {
    auto tmpl = load_template(c, pl.f.n());
    construct::check_template(tmpl);
    if (tmpl.kk_free_checked && !tmpl.kk_free)
      std::cerr << "warning: template contains a K_" << c.k << "\n";
    else if (!tmpl.kk_free_checked)
      std::cerr << "warning: template too large for the clique scan\n";
    auto pg = construct::build_product(pl.s, c.t, tmpl, cap);
    write_file(out / "product.edgelist", render_product_edgelist(pg));
  }

  json manifest;
  json cfg = config_json(c);
  manifest["config"] = cfg;
  manifest["config_hash"] = sha256_hex(cfg.dump());
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

int cmd_verify(const RunConfig& c) {
  for (const auto& name : c.checks)
    if (std::find(known_checks().begin(), known_checks().end(), name) == known_checks().end())
      throw ParameterError("unknown check '" + name + "'");

  RunConfig mc = load_manifest(c);
  i64 cap = effective_cap(mc);
  auto pl = run_pipeline(mc);
  auto g = parse_edgelist(read_file(fs::path(mc.out) / "graph.edgelist"));
  if (g.k != mc.k) throw ManifestError("edge list header disagrees with the manifest");
  if (wants(mc, "product") && !mc.checks.empty() && mc.t < 0)
    throw ParameterError("product check requires artifacts built with --t");

  std::vector<verify::VerificationReport> reports;
  if (wants(mc, "steiner")) reports.push_back(verify::check_induced_steiner_partition(g));
  if (wants(mc, "census")) reports.push_back(verify::cross_clique_census(g, pl.s, mc.threads));
  if (wants(mc, "bounds")) {
    i64 gamma = nof::cost(pl.p, cap, mc.threads);
    auto layers = construct::partition_layers(g);
    reports.push_back(verify::bound_report(pl.f, static_cast<int>(gamma),
                                           static_cast<i64>(pl.s.size()),
                                           static_cast<i64>(layers.size()), false));
  }
  if (wants(mc, "concentration"))
    reports.push_back(verify::check_concentration(mc.q, mc.d, mc.r * mc.r, cap, mc.threads));
  if (mc.t >= 0 && wants(mc, "product")) {
    auto pg = parse_product_edgelist(read_file(fs::path(mc.out) / "product.edgelist"), mc.t);
    reports.push_back(verify::check_product_bounds(pg, mc.threads));
  }

  for (const auto& rep : reports) std::cout << report_json(rep) << "\n";
  return verify::all_passed(reports) ? 0 : 1;
}

int cmd_export(const RunConfig& c) {
  RunConfig mc = load_manifest(c);
  fs::path out(mc.out);
  auto g = parse_edgelist(read_file(out / "graph.edgelist"));
  if (mc.format == "edgelist") {
    write_file(out / "export.edgelist", render_edgelist(g));
    return 0;
  }
  if (mc.format == "json") {
    i64 cap = effective_cap(mc);
    auto pl = run_pipeline(mc);
    auto layers = construct::partition_layers(g);
    i64 gamma = nof::cost(pl.p, cap, mc.threads);
    auto census = verify::cross_clique_census(g, pl.s, mc.threads);
    auto stats = build_stats(mc, pl.f, gamma, static_cast<i64>(pl.s.size()),
                             static_cast<i64>(layers.size()),
                             std::stoll(census.metrics.at("edge_clique_max")));
    write_file(out / "export.json", stats.dump(2) + "\n");
    return 0;
  }
  throw ParameterError("unknown export format '" + mc.format + "'");
}

int run(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"transcript-class graph construction and brute-force verification"};
  app.require_subcommand(1);
  auto* con = app.add_subcommand("construct", "build graph artifacts from a protocol run");
  auto* ver = app.add_subcommand("verify", "re-check artifacts against the invariant suite");
  auto* exp = app.add_subcommand("export", "re-serialise artifacts bit-exactly");
  for (auto* sub : {con, ver, exp}) {
    sub->add_option("--q", c.q, "grid side length");
    sub->add_option("--d", c.d, "grid dimension");
    sub->add_option("--k", c.k, "number of players");
    sub->add_option("--r", c.r, "interval length parameter (squared internally)");
    sub->add_option("--protocol", c.protocol, "simple | interval | kplayer");
    sub->add_option("--transcript", c.transcript, "auto | mu | explicit:<bits>");
    sub->add_option("--t", c.t, "product blow-up exponent");
    sub->add_option("--template", c.template_path, "selector template file");
    sub->add_option("--cap", c.cap, "enumeration cap (0 = RSFORGE_CAP or default)");
    sub->add_option("--threads", c.threads, "worker threads");
    sub->add_option("--out", c.out, "artifact directory");
    sub->add_option("--format", c.format, "export format: edgelist | json");
  }
  ver->add_option("--check", c.checks, "run only the named checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (con->parsed()) return cmd_construct(c);
    if (ver->parsed()) return cmd_verify(c);
    return cmd_export(c);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
}

}  // namespace rsforge::cli
