#pragma once

#include <memory>
#include <span>
#include <vector>

#include "rsforge/common.hpp"
#include "rsforge/lattice.hpp"

namespace rsforge::fns {

// An enumerable k-ary 0/1 function on indexed finite axes. Axis i has
// dims()[i] values addressed 0..dims()[i]-1 in canonical order.
class Function {
 public:
  virtual ~Function() = default;
  virtual int arity() const = 0;
  virtual std::vector<i64> dims() const = 0;
  virtual bool evaluate(std::span<const i64> idx) const = 0;

  i64 domain_size() const;
};

enum class Family { cube, midpoint, kmidpoint };

// The three concrete families. All test the same linear identity
// x_1 + ... + x_{k-1} = (k-1) x_k over coordinates:
//   cube      f_{q,d}:   k = 3, x_3 ranges over [q]^d itself
//   midpoint  g_{q,d}:   k = 3, x_3 ranges over Z_{2,q,d}
//   kmidpoint g_{k,q,d}: k > 3, x_k ranges over Z_{k-1,q,d}
// Midpoint-set elements are stored m-scaled (m = k-1), so the identity is
// checked in exact integer arithmetic.
class FunctionSpec final : public Function {
 public:
  static FunctionSpec cube(int q, int d);
  static FunctionSpec midpoint(int q, int d);
  static FunctionSpec k_midpoint(int k, int q, int d);

  Family family() const { return family_; }
  int k() const { return k_; }
  int q() const { return q_; }
  int d() const { return d_; }
  int scale() const { return k_ - 1; }  // m of the B-side representative
  i64 n() const { return n_; }          // q^d
  i64 N() const { return N_; }          // size of the last axis

  int arity() const override { return k_; }
  std::vector<i64> dims() const override;
  bool evaluate(std::span<const i64> idx) const override;

  lattice::Point a_point(i64 index) const;
  // B-side point in its native representation (plain for cube, m-scaled for
  // the midpoint families).
  lattice::Point b_point(i64 index) const;
  // B-side point as an m-scaled representative in all families (cube points
  // are doubled), the form protocol arithmetic consumes.
  lattice::Point b_scaled(i64 index) const;

 private:
  FunctionSpec(Family family, int k, int q, int d);
  Family family_;
  int k_, q_, d_;
  i64 n_, N_;
};

// Z_{m,q,d} as m-scaled lattice points in canonical index order. Sums of m
// values from [1,q] realise every integer in [m, mq] coordinatewise, so the
// set is the full box [m, mq]^d; the expected size is (m(q-1)+1)^d.
std::vector<lattice::Point> enumerate_Z(int m, int q, int d, i64 cap = default_cap());

enum class LineMode { weak, sub };

struct LineViolation {
  int dimension;            // 1-based axis of the free coordinate
  std::vector<i64> fixed;   // full index tuple with -1 at the free axis
  i64 ones;
};

struct LineReport {
  int dimension;
  i64 lines = 0;
  i64 violating = 0;
  bool passed = true;
  std::vector<LineViolation> violations;  // truncated
};

inline constexpr int kMaxReportedViolations = 32;

// Axis-parallel line check. weak: every line carries at most one 1-entry.
// sub: additionally every dimension-k line carries exactly one.
std::vector<LineReport> check_lines(const Function& f, LineMode mode,
                                    i64 cap = default_cap());

bool all_passed(const std::vector<LineReport>& reports);

i64 ones_count(const Function& f, i64 cap = default_cap());

}  // namespace rsforge::fns
