#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rsforge/common.hpp"

namespace rsforge::lattice {

// A point of [q]^d, or an m-scaled integer representative of a midpoint-set
// element when scale() > 1 (coordinates then live in [m, m*q]). Scale 2 is
// the doubled representation: doubled coordinates of (x+y)/2 are x+y.
class Point {
 public:
  static Point plain(std::vector<int> coords, int q);
  static Point scaled(std::vector<int> coords, int q, int m);
  static Point from_index(i64 index, int q, int d);
  static Point scaled_from_index(i64 index, int q, int d, int m);

  int q() const { return q_; }
  int d() const { return static_cast<int>(coords_.size()); }
  int scale() const { return scale_; }
  bool is_doubled() const { return scale_ == 2; }
  std::span<const int> coords() const { return coords_; }

  // Canonical index: mixed-radix little-endian encoding of (coords - lo) in
  // base (radix), where lo = scale and radix = scale*(q-1) + 1. For plain
  // points this is (coords - 1) base q.
  i64 index() const;
  static i64 box_size(int q, int d, int m);

  // Same geometric point, coordinates multiplied by `factor` (plain -> doubled
  // via times(2)). Scales compose.
  Point times(int factor) const;

  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  Point(std::vector<int> coords, int q, int m);
  std::vector<int> coords_;
  int q_;
  int scale_;
};

// Squared Euclidean distance. Both points must share q, d and scale; mixing
// scales is rejected because the integers would not be commensurable.
i64 sq_dist(const Point& x, const Point& y);

// Exact mean of ||x-y||^2 over independent uniform x, y in [q]^d: d(q^2-1)/6.
Rat mean_sq_dist(int q, int d);

// Partition of [0, dq^2] into half-open intervals of length r_sq, translated
// so the interval containing mu = mean_sq_dist(q, d) has exact midpoint mu.
// The two boundary intervals are clipped to the range; the final interval is
// closed at dq^2 so membership covers the whole range.
class IntervalPartition {
 public:
  IntervalPartition(int q, int d, i64 r_sq);

  int q() const { return q_; }
  int d() const { return d_; }
  i64 range_max() const { return range_max_; }
  i64 length() const { return r_sq_; }
  // Left endpoint of mu's (unclipped) interval; all boundaries sit at
  // offset() + j*length() for integer j.
  Rat offset() const { return anchor_; }
  int count() const { return count_; }

  // Index of the interval containing v, counted from the left; v must lie in
  // [0, range_max].
  int index_of(const Rat& v) const;
  int mu_index() const { return mu_index_; }

  // Grid cell of v on the unclipped boundary grid, normalised so that cell 0
  // is the interval containing 0. Defined for any v >= 0 (values past
  // range_max keep counting upward); used for equal-interval comparisons of
  // quantities that may exceed the range.
  i64 grid_index(const Rat& v) const;

  // Interval bounds [lo, hi) on the unclipped grid / clipped to the range.
  std::pair<Rat, Rat> logical_bounds(int index) const;
  std::pair<Rat, Rat> bounds(int index) const;

 private:
  int q_, d_;
  i64 r_sq_, range_max_;
  Rat anchor_;  // mu - r_sq/2
  i64 j0_;      // raw grid cell containing 0
  int count_;
  int mu_index_;
};

IntervalPartition build_interval_partition(int q, int d, i64 r_sq);

// Proper coloring of the graph on [q]^d joining points at squared distance
// <= threshold (and > 0; loops are not edges). Produced greedily in
// lexicographic coordinate order with the smallest free color, so the result
// is deterministic and uses at most maxdeg+1 colors.
struct Coloring {
  int q = 0;
  int d = 0;
  i64 threshold = 0;
  int color_count = 0;
  std::vector<int> colors;  // by canonical point index

  int color_of(const Point& p) const;
};

Coloring greedy_coloring(int q, int d, i64 threshold, i64 cap = default_cap());

// Volume bound pi^{d/2} (r + 1/2)^d / (d/2)! on the number of integer points
// in a Euclidean ball of radius r; d must be even.
double ball_point_bound(int d, double r);

}  // namespace rsforge::lattice
