#include "rsforge/nof.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace rsforge::nof {

namespace {

void decode_flat(i64 flat, const std::vector<i64>& dims, std::vector<i64>& idx) {
  for (size_t j = 0; j < dims.size(); ++j) {
    idx[j] = flat % dims[j];
    flat /= dims[j];
  }
}

struct VecHash {
  size_t operator()(const std::vector<i64>& v) const {
    size_t h = 1469598103934665603ull;
    for (i64 x : v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::uint64_t charged_value_padded(const Transcript& t, int k, i64 gamma) {
  std::uint64_t v = 0;
  i64 width = 0;
  for (const auto& m : t.messages()) {
    if (m.player == k) continue;
    v = (v << m.width) | m.value;
    width += m.width;
  }
  if (width > gamma) throw ContractError("augmentation: transcript exceeds gamma bits");
  return v << (gamma - width);
}

}  // namespace

void Transcript::append(int player, int width, std::uint64_t value) {
  if (width < 0 || width > 63) throw ParameterError("message width out of range");
  if (width < 64 && value >= (std::uint64_t{1} << width))
    throw ParameterError("message value does not fit its width");
  messages_.push_back(Message{player, width, value});
}

std::string Transcript::board_bits() const {
  std::string s;
  for (const auto& m : messages_) s += m.bits();
  return s;
}

std::string Transcript::last_part(int k) const {
  std::string s;
  for (const auto& m : messages_)
    if (m.player == k) s += m.bits();
  return s;
}

std::string Transcript::charged_part(int k) const {
  std::string s;
  for (const auto& m : messages_)
    if (m.player != k) s += m.bits();
  return s;
}

i64 Transcript::charged_bits(int k) const {
  i64 total = 0;
  for (const auto& m : messages_)
    if (m.player != k) total += m.width;
  return total;
}

Protocol::Protocol(ProtocolKind kind, fns::FunctionSpec f) : kind_(kind), f_(std::move(f)) {}

Protocol Protocol::simple(const fns::FunctionSpec& f) {
  if (f.k() != 3) throw ParameterError("simple protocol: k = 3 required");
  Protocol p(ProtocolKind::simple, f);
  i64 maxdist = i64{f.d()} * (f.q() - 1) * (f.q() - 1);
  p.dist_width_ = ceil_log2(maxdist + 1);
  return p;
}

Protocol Protocol::interval(const fns::FunctionSpec& f, i64 r_sq, i64 cap) {
  if (f.k() != 3) throw ParameterError("interval protocol: k = 3 required");
  Protocol p(ProtocolKind::interval, f);
  p.partition_.emplace(f.q(), f.d(), r_sq);
  // The coloring must separate any two grid points the accept path can
  // confuse; those sit at squared distance < r_sq, and the agreed graph uses
  // squared threshold (2r)^2 = 4 r_sq.
  p.coloring_ = lattice::greedy_coloring(f.q(), f.d(), 4 * r_sq, cap);
  p.index_width_ = ceil_log2(p.partition_->count());
  p.color_width_ = ceil_log2(p.coloring_->color_count + 1);  // +1: out-of-grid sentinel
  return p;
}

Protocol Protocol::interval_with_coloring(const fns::FunctionSpec& f, i64 r_sq,
                                          lattice::Coloring coloring) {
  if (f.k() != 3) throw ParameterError("interval protocol: k = 3 required");
  if (coloring.q != f.q() || coloring.d != f.d())
    throw ParameterError("interval protocol: coloring grid mismatch");
  Protocol p(ProtocolKind::interval, f);
  p.partition_.emplace(f.q(), f.d(), r_sq);
  p.coloring_ = std::move(coloring);
  p.index_width_ = ceil_log2(p.partition_->count());
  p.color_width_ = ceil_log2(p.coloring_->color_count + 1);
  return p;
}

Protocol Protocol::kplayer(const fns::FunctionSpec& f, i64 r_sq, bool symmetrize, i64 cap) {
  if (f.k() <= 3) throw ParameterError("kplayer protocol: k > 3 required");
  Protocol p(ProtocolKind::kplayer, f);
  p.partition_.emplace(f.q(), f.d(), r_sq);
  p.coloring_ = lattice::greedy_coloring(f.q(), f.d(), 4 * r_sq, cap);
  p.index_width_ = ceil_log2(p.partition_->count());
  p.color_width_ = ceil_log2(p.coloring_->color_count + 1);
  p.symmetrize_ = symmetrize;
  return p;
}

void Protocol::run_inner3(const lattice::Point& x, const lattice::Point& y,
                          const lattice::Point& z2, int px, int py, Transcript& t,
                          int& out) const {
  const auto& part = *partition_;
  i64 gxy = part.grid_index(Rat(lattice::sq_dist(x, y)));
  bool bit_y = gxy == part.grid_index(Rat(lattice::sq_dist(x.times(2), z2)));
  t.append(py, 1, bit_y);
  bool bit_x = gxy == part.grid_index(Rat(lattice::sq_dist(y.times(2), z2)));
  t.append(px, 1, bit_x);
  if (!bit_y || !bit_x) {
    t.append(px, 0, 0);
    t.append(py, 0, 0);
    out = 0;
    return;
  }
  // the point 2z - y, which equals x exactly when x + y = 2z
  int q = f_.q(), d = f_.d();
  std::vector<int> u(d);
  bool in_grid = true;
  for (int j = 0; j < d; ++j) {
    u[j] = z2.coords()[j] - y.coords()[j];
    if (u[j] < 1 || u[j] > q) in_grid = false;
  }
  std::uint64_t color = coloring_->color_count;  // sentinel
  if (in_grid) color = coloring_->color_of(lattice::Point::plain(u, q));
  t.append(px, color_width_, color);
  bool bit_g = in_grid && static_cast<int>(color) == coloring_->color_of(x);
  t.append(py, 1, bit_g);
  out = bit_g;
}

Protocol::RunResult Protocol::run(std::span<const i64> input) const {
  int k = f_.k();
  if (static_cast<int>(input.size()) != k)
    throw ParameterError("run: expected " + std::to_string(k) + " inputs");
  RunResult res;
  Transcript& t = res.transcript;

  if (kind_ == ProtocolKind::simple) {
    auto x = f_.a_point(input[0]), y = f_.a_point(input[1]);
    auto z2 = f_.b_scaled(input[2]);
    i64 v = lattice::sq_dist(x, y);
    t.append(3, dist_width_, static_cast<std::uint64_t>(v));
    // 4||x-z||^2 in doubled coordinates is ||2x - 2z||^2
    bool bit_y = (lattice::sq_dist(x.times(2), z2) == v);
    t.append(2, 1, bit_y);
    bool bit_x = (lattice::sq_dist(y.times(2), z2) == v);
    t.append(1, 1, bit_x);
    res.output = bit_y && bit_x;
    return res;
  }

  if (kind_ == ProtocolKind::interval) {
    auto x = f_.a_point(input[0]), y = f_.a_point(input[1]);
    auto z2 = f_.b_scaled(input[2]);
    i64 v = lattice::sq_dist(x, y);
    t.append(3, index_width_, static_cast<std::uint64_t>(partition_->index_of(Rat(v))));
    run_inner3(x, y, z2, 1, 2, t, res.output);
    return res;
  }

  // kplayer
  int q = f_.q(), d = f_.d();
  std::vector<lattice::Point> a;
  a.reserve(k - 1);
  for (int i = 0; i + 1 < k; ++i) a.push_back(f_.a_point(input[i]));
  auto s = f_.b_point(input[k - 1]);  // (k-1)-scaled

  // player 1 tests whether (k-1)x_k - x_3 - ... - x_{k-1} is twice a midpoint
  std::vector<int> w(d);
  bool member = true;
  for (int j = 0; j < d; ++j) {
    int acc = s.coords()[j];
    for (int i = 2; i + 1 < k; ++i) acc -= a[i].coords()[j];
    w[j] = acc;
    if (acc < 2 || acc > 2 * q) member = false;
  }
  t.append(1, 1, member);
  t.append(k, index_width_,
           static_cast<std::uint64_t>(partition_->index_of(Rat(lattice::sq_dist(a[0], a[1])))));
  if (member) {
    auto z2 = lattice::Point::scaled(w, q, 2);
    run_inner3(a[0], a[1], z2, 1, 2, t, res.output);
  } else {
    t.append(2, 0, 0);
    t.append(1, 0, 0);
    t.append(1, 0, 0);
    t.append(2, 0, 0);
    res.output = 0;
  }
  if (symmetrize_) {
    bool sym = true;
    int mu_idx = partition_->mu_index();
    for (int i = 0; i + 1 < k && sym; ++i)
      for (int j = i + 1; j + 1 < k && sym; ++j)
        if (partition_->index_of(Rat(lattice::sq_dist(a[i], a[j]))) != mu_idx) sym = false;
    t.append(k, 1, sym);
  }
  return res;
}

std::string Protocol::mu_pattern() const {
  if (!partition_) throw ParameterError("mu transcript: protocol has no interval partition");
  std::string s = to_bits(partition_->mu_index(), index_width_);
  if (kind_ == ProtocolKind::kplayer && symmetrize_) s += '1';
  return s;
}

i64 cost(const Protocol& p, i64 cap, int threads) {
  const auto dims = p.function().dims();
  i64 domain = p.function().domain_size();
  require_cap(domain, cap, "cost domain");
  int k = p.k();
  auto maxima = run_chunked<i64>(domain, threads, [&](i64 begin, i64 end) {
    std::vector<i64> idx(dims.size());
    i64 best = 0;
    for (i64 flat = begin; flat < end; ++flat) {
      decode_flat(flat, dims, idx);
      best = std::max(best, p.run(idx).transcript.charged_bits(k));
    }
    return best;
  });
  i64 best = 0;
  for (i64 m : maxima) best = std::max(best, m);
  return best;
}

std::vector<Violation> check_correct(const Protocol& p, i64 cap, int threads, int max_report) {
  const auto dims = p.function().dims();
  i64 domain = p.function().domain_size();
  require_cap(domain, cap, "check_correct domain");
  auto chunks = run_chunked<std::vector<Violation>>(domain, threads, [&](i64 begin, i64 end) {
    std::vector<i64> idx(dims.size());
    std::vector<Violation> out;
    for (i64 flat = begin; flat < end; ++flat) {
      if (static_cast<int>(out.size()) >= max_report) break;
      decode_flat(flat, dims, idx);
      int expected = p.function().evaluate(idx) ? 1 : 0;
      int got = p.run(idx).output;
      if (expected != got) out.push_back(Violation{idx, expected, got});
    }
    return out;
  });
  std::vector<Violation> all;
  for (auto& c : chunks)
    for (auto& v : c) {
      if (static_cast<int>(all.size()) >= max_report) return all;
      all.push_back(std::move(v));
    }
  return all;
}

bool EntrySet::contains(std::span<const i64> e) const {
  std::vector<i64> v(e.begin(), e.end());
  return std::binary_search(entries.begin(), entries.end(), v);
}

EntrySet make_entry_set(int k, std::vector<i64> dims, std::vector<std::vector<i64>> entries) {
  if (k < 2 || static_cast<int>(dims.size()) != k)
    throw ParameterError("entry set: dims must have length k");
  for (const auto& e : entries) {
    if (static_cast<int>(e.size()) != k) throw ParameterError("entry set: entry of wrong arity");
    for (int j = 0; j < k; ++j)
      if (e[j] < 0 || e[j] >= dims[j]) throw ParameterError("entry set: entry out of range");
  }
  std::sort(entries.begin(), entries.end());
  entries.erase(std::unique(entries.begin(), entries.end()), entries.end());
  EntrySet s;
  s.k = k;
  s.dims = std::move(dims);
  s.entries = std::move(entries);
  s.provenance = Provenance::synthetic;
  return s;
}

EntrySet transcript_set(const Protocol& p, const std::string& pattern, Scope scope, i64 cap,
                        int threads) {
  for (char c : pattern)
    if (c != '0' && c != '1') throw ParameterError("transcript pattern must be binary");
  const auto dims = p.function().dims();
  i64 domain = p.function().domain_size();
  require_cap(domain, cap, "transcript_set domain");
  int k = p.k();
  auto chunks =
      run_chunked<std::vector<std::vector<i64>>>(domain, threads, [&](i64 begin, i64 end) {
        std::vector<i64> idx(dims.size());
        std::vector<std::vector<i64>> out;
        for (i64 flat = begin; flat < end; ++flat) {
          decode_flat(flat, dims, idx);
          if (!p.function().evaluate(idx)) continue;
          auto run = p.run(idx);
          const std::string got = scope == Scope::last_player
                                      ? run.transcript.last_part(k)
                                      : run.transcript.board_bits();
          if (got == pattern) out.push_back(idx);
        }
        return out;
      });
  EntrySet s;
  s.k = k;
  s.dims = dims;
  s.provenance = scope == Scope::last_player ? Provenance::last_player_transcript
                                             : Provenance::full_transcript;
  for (auto& c : chunks)
    for (auto& e : c) s.entries.push_back(std::move(e));
  std::sort(s.entries.begin(), s.entries.end());
  return s;
}

std::string auto_transcript(const Protocol& p, i64 cap, int threads) {
  const auto dims = p.function().dims();
  i64 domain = p.function().domain_size();
  require_cap(domain, cap, "auto_transcript domain");
  int k = p.k();
  using Hist = std::map<std::string, i64>;
  auto chunks = run_chunked<Hist>(domain, threads, [&](i64 begin, i64 end) {
    std::vector<i64> idx(dims.size());
    Hist h;
    for (i64 flat = begin; flat < end; ++flat) {
      decode_flat(flat, dims, idx);
      if (!p.function().evaluate(idx)) continue;
      ++h[p.run(idx).transcript.last_part(k)];
    }
    return h;
  });
  Hist total;
  for (const auto& c : chunks)
    for (const auto& [pat, n] : c) total[pat] += n;
  if (total.empty()) throw ContractError("auto transcript: function has no 1-entries");
  std::string best;
  i64 best_count = -1;
  for (const auto& [pat, n] : total)
    if (n > best_count) best = pat, best_count = n;  // ordered map: first max is lex-least
  return best;
}

bool check_symmetric(const EntrySet& s) {
  for (const auto& e : s.entries)
    for (int i = 0; i + 2 < s.k; ++i)
      for (int j = i + 1; j + 1 < s.k; ++j) {
        std::vector<i64> t(e);
        std::swap(t[i], t[j]);
        if (!std::binary_search(s.entries.begin(), s.entries.end(), t)) return false;
      }
  return true;
}

std::vector<Star> check_star_free(const EntrySet& s, i64 cap, int max_report) {
  std::vector<Star> found;
  if (s.entries.empty()) return found;
  int k = s.k;
  i64 domain = 1;
  for (i64 d : s.dims) domain *= d;
  require_cap(domain, cap, "star search domain");

  // per axis: off-axis projection -> values present on that line
  std::vector<std::unordered_map<std::vector<i64>, std::vector<i64>, VecHash>> lines(k);
  for (const auto& e : s.entries)
    for (int i = 0; i < k; ++i) {
      std::vector<i64> key(e);
      key[i] = -1;
      lines[i][key].push_back(e[i]);
    }

  std::vector<i64> center(k), key(k);
  for (i64 flat = 0; flat < domain; ++flat) {
    decode_flat(flat, s.dims, center);
    Star star;
    star.center = center;
    bool complete = true;
    for (int i = 0; i < k && complete; ++i) {
      key = center;
      key[i] = -1;
      auto it = lines[i].find(key);
      complete = false;
      if (it != lines[i].end()) {
        for (i64 v : it->second)
          if (v != center[i]) {
            auto witness = center;
            witness[i] = v;
            star.entries.push_back(std::move(witness));
            complete = true;
            break;
          }
      }
    }
    if (complete) {
      found.push_back(std::move(star));
      if (static_cast<int>(found.size()) >= max_report) break;
    }
  }
  return found;
}

AugmentedFunction::AugmentedFunction(Protocol p, i64 gamma) : p_(std::move(p)), gamma_(gamma) {
  if (gamma < 0 || gamma > 32) throw ParameterError("augmentation: gamma out of range");
}

int AugmentedFunction::arity() const { return p_.function().k(); }

std::vector<i64> AugmentedFunction::dims() const {
  auto d = p_.function().dims();
  d.back() *= i64{1} << gamma_;
  return d;
}

bool AugmentedFunction::evaluate(std::span<const i64> idx) const {
  int k = arity();
  if (static_cast<int>(idx.size()) != k) throw ParameterError("evaluate: wrong arity");
  i64 block = i64{1} << gamma_;
  i64 wide = idx[k - 1];
  if (wide < 0 || wide >= p_.function().N() * block)
    throw ParameterError("evaluate: index out of range");
  std::vector<i64> base(idx.begin(), idx.end());
  base[k - 1] = wide / block;
  std::uint64_t bits = static_cast<std::uint64_t>(wide % block);
  if (!p_.function().evaluate(base)) return false;
  auto run = p_.run(base);
  return charged_value_padded(run.transcript, k, gamma_) == bits;
}

Augmentation augment(const Protocol& p, const std::string& t_k_pattern, i64 cap, int threads) {
  Augmentation out;
  out.gamma = cost(p, cap, threads);
  out.g = std::make_shared<AugmentedFunction>(p, out.gamma);
  EntrySet s = transcript_set(p, t_k_pattern, Scope::last_player, cap, threads);
  int k = p.k();
  i64 block = i64{1} << out.gamma;
  out.n_prime = p.function().N() * block;
  EntrySet sp;
  sp.k = k;
  sp.dims = out.g->dims();
  sp.provenance = Provenance::full_transcript;
  sp.entries.reserve(s.entries.size());
  for (const auto& e : s.entries) {
    auto run = p.run(e);
    std::vector<i64> w(e);
    w[k - 1] = e[k - 1] * block +
               static_cast<i64>(charged_value_padded(run.transcript, k, out.gamma));
    sp.entries.push_back(std::move(w));
  }
  std::sort(sp.entries.begin(), sp.entries.end());
  out.s_prime = std::move(sp);
  return out;
}

}  // namespace rsforge::nof
