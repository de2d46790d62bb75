#pragma once

#include <string>
#include <vector>

#include "rsforge/construct.hpp"
#include "rsforge/verify.hpp"

namespace rsforge::cli {

// Everything that shapes artifacts plus the execution knobs. The construct
// fields (q..template_path) are hashed into the manifest; cap, threads, out,
// format, and checks only steer a run.
struct RunConfig {
  int q = 3;
  int d = 2;
  int k = 3;
  i64 r = 1;  // interval length parameter; the partition uses r*r
  std::string protocol = "simple";    // simple | interval | kplayer
  std::string transcript = "auto";    // auto | mu | explicit:<bits>
  int t = -1;                         // product exponent; negative = no product
  std::string template_path;          // optional selector file
  i64 cap = 0;                        // 0 = RSFORGE_CAP or built-in default
  int threads = 1;
  std::string out = "out";
  std::string format = "edgelist";    // export: edgelist | json
  std::vector<std::string> checks;    // verify subset; empty = all applicable
};

// Artifact formats. Renderers produce the exact bytes written to disk;
// parsers re-canonicalise edge order so hand-edited files still reach the
// invariant checks.
std::string render_edgelist(const construct::LayeredGraph& g);
construct::LayeredGraph parse_edgelist(const std::string& text);
std::string render_product_edgelist(const construct::ProductGraph& pg);
construct::ProductGraph parse_product_edgelist(const std::string& text, int t);
std::string render_template(const construct::CliqueTemplate& tmpl);
construct::CliqueTemplate parse_template(const std::string& text);
std::string report_json(const verify::VerificationReport& r);

int cmd_construct(const RunConfig& c);
int cmd_verify(const RunConfig& c);
int cmd_export(const RunConfig& c);

// Binary entry point: parses flags, dispatches the subcommand, and maps
// failures to the exit table (1 check failure, 2 parameter, 3 resource cap,
// 4 contract violation, 5 manifest mismatch, 6 artifact io).
int run(int argc, const char* const* argv);

}  // namespace rsforge::cli
