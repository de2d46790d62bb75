#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsforge/functions.hpp"
#include "rsforge/lattice.hpp"

namespace rsforge::nof {

// One board message. Fixed width per protocol step: width = ceil(log2 of the
// step's alphabet). Zero-width messages mark steps skipped after an early
// rejection; they contribute no bits.
struct Message {
  int player = 0;  // 1-based; player k is the last player
  int width = 0;
  std::uint64_t value = 0;

  std::string bits() const { return to_bits(value, width); }
};

class Transcript {
 public:
  void append(int player, int width, std::uint64_t value);
  const std::vector<Message>& messages() const { return messages_; }
  std::string board_bits() const;
  // T_k: the last player's bits, in writing order.
  std::string last_part(int k) const;
  // Bits written by players 1..k-1 (the protocol's cost on this input).
  i64 charged_bits(int k) const;
  std::string charged_part(int k) const;

 private:
  std::vector<Message> messages_;
};

enum class ProtocolKind { simple, interval, kplayer };

// A one-sided NOF protocol bound to a concrete function family instance.
// Player i sees every input except x_i; the last player's messages depend
// only on x_1..x_{k-1} and are conceptually written first, so they are never
// charged. The kplayer form reduces k > 3 inputs to the 3-player interval
// protocol and can carry an extra last-player symmetrization bit.
class Protocol {
 public:
  static Protocol simple(const fns::FunctionSpec& f);
  static Protocol interval(const fns::FunctionSpec& f, i64 r_sq, i64 cap = default_cap());
  static Protocol kplayer(const fns::FunctionSpec& f, i64 r_sq, bool symmetrize,
                          i64 cap = default_cap());
  // Interval protocol with a caller-supplied coloring. Meant for fault
  // probes: a coloring that merges points at squared distance < 4 r_sq
  // breaks the final equality test, which check_correct then surfaces.
  static Protocol interval_with_coloring(const fns::FunctionSpec& f, i64 r_sq,
                                         lattice::Coloring coloring);

  ProtocolKind kind() const { return kind_; }
  int k() const { return f_.k(); }
  const fns::FunctionSpec& function() const { return f_; }
  const lattice::IntervalPartition* partition() const {
    return partition_ ? &*partition_ : nullptr;
  }
  const lattice::Coloring* coloring() const { return coloring_ ? &*coloring_ : nullptr; }
  bool symmetrize() const { return symmetrize_; }

  struct RunResult {
    Transcript transcript;
    int output = 0;
  };
  RunResult run(std::span<const i64> input) const;

  // Last-player pattern selecting the mean interval (plus the symmetrization
  // bit when enabled). Defined for interval and kplayer protocols.
  std::string mu_pattern() const;

 private:
  Protocol(ProtocolKind kind, fns::FunctionSpec f);
  void run_inner3(const lattice::Point& x, const lattice::Point& y,
                  const lattice::Point& z2, int px, int py, Transcript& t, int& out) const;

  ProtocolKind kind_;
  fns::FunctionSpec f_;
  std::optional<lattice::IntervalPartition> partition_;
  std::optional<lattice::Coloring> coloring_;
  bool symmetrize_ = false;
  int dist_width_ = 0;   // simple step 1
  int index_width_ = 0;  // interval index field
  int color_width_ = 0;  // color field incl. out-of-grid sentinel
};

// Exact protocol cost: max over all inputs of bits written by the first k-1
// players.
i64 cost(const Protocol& p, i64 cap = default_cap(), int threads = 1);

struct Violation {
  std::vector<i64> input;
  int expected = 0;
  int got = 0;
};

// Exhaustive comparison of protocol output against the bound function.
std::vector<Violation> check_correct(const Protocol& p, i64 cap = default_cap(),
                                     int threads = 1, int max_report = 32);

enum class Scope { last_player, full };
enum class Provenance { last_player_transcript, full_transcript, synthetic };

struct EntrySet {
  int k = 0;
  std::vector<i64> dims;
  std::vector<std::vector<i64>> entries;  // sorted lexicographically
  Provenance provenance = Provenance::synthetic;

  bool contains(std::span<const i64> e) const;
  i64 size() const { return static_cast<i64>(entries.size()); }
};

EntrySet make_entry_set(int k, std::vector<i64> dims,
                        std::vector<std::vector<i64>> entries);

// S(T): inputs with f = 1 whose transcript (last-player part or full board)
// equals the pattern.
EntrySet transcript_set(const Protocol& p, const std::string& pattern, Scope scope,
                        i64 cap = default_cap(), int threads = 1);

// The last-player pattern maximising |S_k(T)|, lexicographically smallest on
// ties.
std::string auto_transcript(const Protocol& p, i64 cap = default_cap(), int threads = 1);

// Closure under permutations of the first k-1 coordinates.
bool check_symmetric(const EntrySet& s);

struct Star {
  std::vector<i64> center;
  std::vector<std::vector<i64>> entries;  // entry i differs from center exactly at axis i
};

// Searches for stars: k entries, the i-th agreeing with a common center
// everywhere except axis i. Cylinder intersections of weak sub-permutations
// never contain one.
std::vector<Star> check_star_free(const EntrySet& s, i64 cap = default_cap(),
                                  int max_report = 32);

// g(x_1..x_{k-1}, (x_k, T)) = 1 iff f(x_1..x_k) = 1 and T is the charged
// transcript of the protocol on that input; the last axis has size N * 2^gamma
// with index x_k * 2^gamma + T.
class AugmentedFunction final : public fns::Function {
 public:
  AugmentedFunction(Protocol p, i64 gamma);
  int arity() const override;
  std::vector<i64> dims() const override;
  bool evaluate(std::span<const i64> idx) const override;
  i64 gamma() const { return gamma_; }
  const Protocol& protocol() const { return p_; }

 private:
  Protocol p_;
  i64 gamma_;
};

struct Augmentation {
  std::shared_ptr<AugmentedFunction> g;
  EntrySet s_prime;
  i64 gamma = 0;
  i64 n_prime = 0;  // N * 2^gamma
};

// Applies the one-extra-bit-per-player reduction: every entry of S_k(t_k)
// maps to an entry of S' over the widened last axis, so |S'| = |S_k(t_k)|.
Augmentation augment(const Protocol& p, const std::string& t_k_pattern,
                     i64 cap = default_cap(), int threads = 1);

}  // namespace rsforge::nof
