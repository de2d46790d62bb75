#include "rsforge/functions.hpp"

#include <string>

namespace rsforge::fns {

i64 Function::domain_size() const {
  i64 total = 1;
  for (i64 d : dims()) total *= d;
  return total;
}

FunctionSpec::FunctionSpec(Family family, int k, int q, int d)
    : family_(family), k_(k), q_(q), d_(d) {
  if (q < 2) throw ParameterError("function family: q must be at least 2");
  if (d < 1) throw ParameterError("function family: d must be at least 1");
  if (k > 16) throw ParameterError("function family: k capped at 16");
  n_ = ipow(q, d);
  N_ = family == Family::cube ? n_ : lattice::Point::box_size(q, d, k_ - 1);
}

FunctionSpec FunctionSpec::cube(int q, int d) { return FunctionSpec(Family::cube, 3, q, d); }

FunctionSpec FunctionSpec::midpoint(int q, int d) {
  return FunctionSpec(Family::midpoint, 3, q, d);
}

FunctionSpec FunctionSpec::k_midpoint(int k, int q, int d) {
  if (k < 4) throw ParameterError("k_midpoint: k must exceed 3");
  return FunctionSpec(Family::kmidpoint, k, q, d);
}

std::vector<i64> FunctionSpec::dims() const {
  std::vector<i64> v(k_ - 1, n_);
  v.push_back(N_);
  return v;
}

bool FunctionSpec::evaluate(std::span<const i64> idx) const {
  if (static_cast<int>(idx.size()) != k_)
    throw ParameterError("evaluate: expected " + std::to_string(k_) + " arguments");
  for (int i = 0; i + 1 < k_; ++i)
    if (idx[i] < 0 || idx[i] >= n_) throw ParameterError("evaluate: index out of range");
  if (idx[k_ - 1] < 0 || idx[k_ - 1] >= N_)
    throw ParameterError("evaluate: index out of range");

  int m = k_ - 1;
  i64 radix = family_ == Family::cube ? q_ : i64{m} * (q_ - 1) + 1;
  i64 rem[16];
  for (int i = 0; i + 1 < k_; ++i) rem[i] = idx[i];
  i64 remb = idx[k_ - 1];
  for (int j = 0; j < d_; ++j) {
    i64 sum = 0;
    for (int i = 0; i + 1 < k_; ++i) {
      sum += rem[i] % q_ + 1;
      rem[i] /= q_;
    }
    i64 b = remb % radix;
    remb /= radix;
    // native B digit -> m-scaled coordinate
    i64 scaled = family_ == Family::cube ? 2 * (b + 1) : b + m;
    if (sum != scaled) return false;
  }
  return true;
}

lattice::Point FunctionSpec::a_point(i64 index) const {
  return lattice::Point::from_index(index, q_, d_);
}

lattice::Point FunctionSpec::b_point(i64 index) const {
  if (family_ == Family::cube) return lattice::Point::from_index(index, q_, d_);
  return lattice::Point::scaled_from_index(index, q_, d_, k_ - 1);
}

lattice::Point FunctionSpec::b_scaled(i64 index) const {
  if (family_ == Family::cube) return b_point(index).times(2);
  return b_point(index);
}

std::vector<lattice::Point> enumerate_Z(int m, int q, int d, i64 cap) {
  if (m < 1) throw ParameterError("enumerate_Z: m must be at least 1");
  if (q < 2 || d < 1) throw ParameterError("enumerate_Z: q >= 2 and d >= 1 required");
  i64 size = lattice::Point::box_size(q, d, m);
  require_cap(size, cap, "enumerate_Z");
  std::vector<lattice::Point> out;
  out.reserve(size);
  for (i64 i = 0; i < size; ++i) out.push_back(lattice::Point::scaled_from_index(i, q, d, m));
  return out;
}

std::vector<LineReport> check_lines(const Function& f, LineMode mode, i64 cap) {
  int k = f.arity();
  auto dims = f.dims();
  i64 domain = f.domain_size();
  require_cap(domain, cap, "check_lines domain");

  std::vector<LineReport> reports;
  std::vector<i64> idx(k);
  for (int dim = 0; dim < k; ++dim) {
    LineReport rep;
    rep.dimension = dim + 1;
    i64 outer = domain / dims[dim];
    rep.lines = outer;
    for (i64 o = 0; o < outer; ++o) {
      i64 rem = o;
      for (int j = 0; j < k; ++j) {
        if (j == dim) continue;
        idx[j] = rem % dims[j];
        rem /= dims[j];
      }
      i64 ones = 0;
      for (i64 v = 0; v < dims[dim]; ++v) {
        idx[dim] = v;
        if (f.evaluate(idx)) ++ones;
      }
      bool bad = ones > 1;
      if (mode == LineMode::sub && dim == k - 1 && ones != 1) bad = true;
      if (bad) {
        ++rep.violating;
        rep.passed = false;
        if (static_cast<int>(rep.violations.size()) < kMaxReportedViolations) {
          LineViolation lv;
          lv.dimension = dim + 1;
          lv.fixed = idx;
          lv.fixed[dim] = -1;
          lv.ones = ones;
          rep.violations.push_back(std::move(lv));
        }
      }
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

bool all_passed(const std::vector<LineReport>& reports) {
  for (const auto& r : reports)
    if (!r.passed) return false;
  return true;
}

i64 ones_count(const Function& f, i64 cap) {
  i64 domain = f.domain_size();
  require_cap(domain, cap, "ones_count domain");
  auto dims = f.dims();
  int k = f.arity();
  std::vector<i64> idx(k, 0);
  i64 count = 0;
  for (i64 flat = 0; flat < domain; ++flat) {
    i64 rem = flat;
    for (int j = 0; j < k; ++j) {
      idx[j] = rem % dims[j];
      rem /= dims[j];
    }
    if (f.evaluate(idx)) ++count;
  }
  return count;
}

}  // namespace rsforge::fns
