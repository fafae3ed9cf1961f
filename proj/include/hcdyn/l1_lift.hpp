#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hcdyn/core_map.hpp"
#include "hcdyn/fixed_points.hpp"

namespace hcdyn {

/// Finite prefix of a positive summable weight sequence.
/// l1() sums entries 1, 3, 5, ... and l2() sums entries 2, 4, 6, ... (1-based).
class WeightSeq {
 public:
  explicit WeightSeq(std::vector<double> lambda);

  /// Rejects unequal parity sums (relative 1e-12).
  static WeightSeq balanced(std::vector<double> lambda);
  /// lambda_j proportional to r^j, each parity class rescaled to sum to l.
  static WeightSeq geometric(double r, std::size_t n, double l);

  const std::vector<double>& lambda() const noexcept { return lambda_; }
  std::size_t size() const noexcept { return lambda_.size(); }
  double l1() const noexcept { return l1_; }
  double l2() const noexcept { return l2_; }
  double norm() const noexcept { return l1_ + l2_; }

 private:
  std::vector<double> lambda_;
  double l1_ = 0.0;
  double l2_ = 0.0;
};

class TruncatedVector {
 public:
  explicit TruncatedVector(std::vector<double> entries);

  const std::vector<double>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double norm() const noexcept;

 private:
  std::vector<double> entries_;
};

Point2 project_to_plane(const std::vector<double>& entries) noexcept;
Point2 project_to_plane(const TruncatedVector& x) noexcept;

/// Planar parameters matching the weights: (theta, L1, L2).
Params lift_params(double theta, const WeightSeq& w);

TruncatedVector apply_f(const Params& p, const WeightSeq& w, const TruncatedVector& x);

/// ((a/L1) l_1, (b/L2) l_2, (a/L1) l_3, ...). Zero entries are allowed here.
std::vector<double> lift_limit(const Params& p, const WeightSeq& w, Point2 ab);

struct LiftedFixedPoint {
  std::string name;  // P1 .. P7
  Family family;     // planar fixed point it projects to
  TruncatedVector vector;
};

std::vector<LiftedFixedPoint> lifted_fixed_points(const Params& p, const WeightSeq& w);

bool norm_preservation_check(const Params& p, const WeightSeq& w, const TruncatedVector& x,
                             std::size_t steps);

/// Relative semi-conjugacy defect of project(F(x)) against W(project(x)).
double semiconjugacy_residual(const Params& p, const WeightSeq& w, const TruncatedVector& x);

}  // namespace hcdyn
