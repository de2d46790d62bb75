#include "rsforge/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace rsforge {

i64 default_cap() {
  if (const char* env = std::getenv("RSFORGE_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<i64>(v);
    throw ParameterError("RSFORGE_CAP must be a positive integer");
  }
  return kDefaultEnumerationCap;
}

int ceil_log2(i64 alphabet) {
  if (alphabet < 1) throw ParameterError("alphabet size must be positive");
  int w = 0;
  while ((i64{1} << w) < alphabet) ++w;
  return w;
}

std::string to_bits(std::uint64_t value, int width) {
  std::string s(width, '0');
  for (int i = 0; i < width; ++i)
    if (value >> (width - 1 - i) & 1) s[i] = '1';
  return s;
}

i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace rsforge

namespace rsforge::lattice {

Point::Point(std::vector<int> coords, int q, int m)
    : coords_(std::move(coords)), q_(q), scale_(m) {}

Point Point::plain(std::vector<int> coords, int q) {
  return scaled(std::move(coords), q, 1);
}

Point Point::scaled(std::vector<int> coords, int q, int m) {
  if (q < 2) throw ParameterError("q must be at least 2");
  if (m < 1) throw ParameterError("scale must be at least 1");
  if (coords.empty()) throw ParameterError("point needs at least one coordinate");
  for (int c : coords)
    if (c < m || c > m * q)
      throw ParameterError("coordinate " + std::to_string(c) + " outside [" +
                           std::to_string(m) + ", " + std::to_string(m * q) + "]");
  return Point(std::move(coords), q, m);
}

i64 Point::box_size(int q, int d, int m) {
  return ipow(i64{m} * (q - 1) + 1, d);
}

Point Point::from_index(i64 index, int q, int d) {
  return scaled_from_index(index, q, d, 1);
}

Point Point::scaled_from_index(i64 index, int q, int d, int m) {
  if (d < 1) throw ParameterError("d must be at least 1");
  i64 radix = i64{m} * (q - 1) + 1;
  if (index < 0 || index >= ipow(radix, d))
    throw ParameterError("point index out of range");
  std::vector<int> coords(d);
  for (int i = 0; i < d; ++i) {
    coords[i] = static_cast<int>(index % radix) + m;
    index /= radix;
  }
  return scaled(std::move(coords), q, m);
}

i64 Point::index() const {
  i64 radix = i64{scale_} * (q_ - 1) + 1;
  i64 idx = 0;
  for (int i = d() - 1; i >= 0; --i) idx = idx * radix + (coords_[i] - scale_);
  return idx;
}

Point Point::times(int factor) const {
  if (factor < 1) throw ParameterError("scale factor must be at least 1");
  std::vector<int> c(coords_);
  for (int& v : c) v *= factor;
  return Point(std::move(c), q_, scale_ * factor);
}

i64 sq_dist(const Point& x, const Point& y) {
  if (x.q() != y.q() || x.d() != y.d())
    throw ParameterError("sq_dist: mismatched lattice parameters");
  if (x.scale() != y.scale())
    throw ParameterError("sq_dist: mixing scaled and plain points");
  i64 s = 0;
  for (int i = 0; i < x.d(); ++i) {
    i64 t = x.coords()[i] - y.coords()[i];
    s += t * t;
  }
  return s;
}

Rat mean_sq_dist(int q, int d) {
  if (q < 2 || d < 1) throw ParameterError("mean_sq_dist: q >= 2 and d >= 1 required");
  return Rat(i64{d} * (i64{q} * q - 1), 6);
}

IntervalPartition::IntervalPartition(int q, int d, i64 r_sq) : q_(q), d_(d), r_sq_(r_sq) {
  if (q < 2 || d < 1) throw ParameterError("interval partition: q >= 2 and d >= 1 required");
  range_max_ = i64{d} * q * q;
  if (r_sq < 1 || r_sq > range_max_)
    throw ParameterError("interval partition: need 1 <= r_sq <= d*q^2");
  anchor_ = mean_sq_dist(q, d) - Rat(r_sq, 2);
  j0_ = rat_floor((Rat(0) - anchor_) / Rat(r_sq));
  Rat top = (Rat(range_max_) - anchor_) / Rat(r_sq);
  i64 j1 = rat_floor(top);
  if (top.denominator() == 1) --j1;  // range_max on a boundary: closes the last interval
  count_ = static_cast<int>(j1 - j0_ + 1);
  mu_index_ = index_of(mean_sq_dist(q, d));
}

i64 IntervalPartition::grid_index(const Rat& v) const {
  if (v < Rat(0)) throw ParameterError("grid_index: negative value");
  return rat_floor((v - anchor_) / Rat(r_sq_)) - j0_;
}

int IntervalPartition::index_of(const Rat& v) const {
  if (v < Rat(0) || v > Rat(range_max_))
    throw ParameterError("interval_index: value outside [0, d*q^2]");
  i64 idx = grid_index(v);
  if (idx >= count_) idx = count_ - 1;  // v == range_max sitting on a boundary
  return static_cast<int>(idx);
}

std::pair<Rat, Rat> IntervalPartition::logical_bounds(int index) const {
  if (index < 0 || index >= count_) throw ParameterError("interval index out of range");
  Rat lo = anchor_ + Rat((j0_ + index) * r_sq_);
  return {lo, lo + Rat(r_sq_)};
}

std::pair<Rat, Rat> IntervalPartition::bounds(int index) const {
  auto [lo, hi] = logical_bounds(index);
  if (lo < Rat(0)) lo = Rat(0);
  if (hi > Rat(range_max_)) hi = Rat(range_max_);
  return {lo, hi};
}

IntervalPartition build_interval_partition(int q, int d, i64 r_sq) {
  return IntervalPartition(q, d, r_sq);
}

int Coloring::color_of(const Point& p) const {
  if (p.q() != q || p.d() != d || p.scale() != 1)
    throw ParameterError("color_of: point not in the colored lattice");
  return colors[p.index()];
}

Coloring greedy_coloring(int q, int d, i64 threshold, i64 cap) {
  if (q < 2 || d < 1) throw ParameterError("greedy_coloring: q >= 2 and d >= 1 required");
  if (threshold < 0) throw ParameterError("greedy_coloring: negative threshold");
  i64 n = ipow(q, d);
  require_cap(n, cap, "greedy_coloring vertices");
  require_cap(n * n, cap, "greedy_coloring pair scan");

  // Vertices in lexicographic coordinate order: first coordinate most
  // significant. Decoding the loop counter big-endian gives exactly that.
  std::vector<Point> order;
  order.reserve(n);
  for (i64 v = 0; v < n; ++v) {
    std::vector<int> coords(d);
    i64 rem = v;
    for (int i = d - 1; i >= 0; --i) {
      coords[i] = static_cast<int>(rem % q) + 1;
      rem /= q;
    }
    order.push_back(Point::plain(std::move(coords), q));
  }

  Coloring col;
  col.q = q;
  col.d = d;
  col.threshold = threshold;
  col.colors.assign(n, -1);
  int max_color = -1;
  std::vector<char> used;
  for (i64 i = 0; i < n; ++i) {
    used.assign(max_color + 2, 0);
    for (i64 j = 0; j < i; ++j) {
      i64 dist = sq_dist(order[i], order[j]);
      if (dist > 0 && dist <= threshold) used[col.colors[order[j].index()]] = 1;
    }
    int c = 0;
    while (used[c]) ++c;
    col.colors[order[i].index()] = c;
    if (c > max_color) max_color = c;
  }
  col.color_count = max_color + 1;
  return col;
}

double ball_point_bound(int d, double r) {
  if (d < 2 || d % 2 != 0) throw ParameterError("ball_point_bound: d must be even and positive");
  if (r < 0) throw ParameterError("ball_point_bound: negative radius");
  int half = d / 2;
  double fact = 1.0;
  for (int i = 2; i <= half; ++i) fact *= i;
  return std::pow(std::acos(-1.0), half) * std::pow(r + 0.5, d) / fact;
}

}  // namespace rsforge::lattice
