#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "greedy/errors.hpp"

namespace greedy {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Empirical norm threshold below which a column counts as degenerate.
constexpr double kDegenerateNormTol = 1e-12;

/// Raw observations: n rows of K regressors plus the response.
struct RawDesign {
  Matrix x;
  Vector y;
};

/// Design rescaled so every column has unit empirical norm,
/// (1/n) sum_i x[i,k]^2 = 1. `scale` holds the per-column divisors and
/// `offset` the per-column shifts (zero unless `centered`).
struct StandardizedDesign {
  Matrix x_std;
  Vector scale;
  Vector offset;
  Vector y;
  bool centered = false;
};

inline void validate_raw(const RawDesign& raw) {
  if (raw.x.rows() < 1 || raw.x.cols() < 1)
    throw Error("design must have at least one row and one column");
  if (raw.y.size() != raw.x.rows())
    throw DimensionMismatch("response length does not match row count");
  if (!raw.x.allFinite() || !raw.y.allFinite())
    throw Error("design contains non-finite entries");
}

/// Rescales each regressor to unit empirical norm, optionally removing
/// the column mean first. The paper's convention is center = false.
inline StandardizedDesign standardize(const RawDesign& raw, bool center = false) {
  validate_raw(raw);
  const Eigen::Index n = raw.x.rows();
  const Eigen::Index k_cols = raw.x.cols();

  StandardizedDesign out;
  out.centered = center;
  out.offset = center ? Vector(raw.x.colwise().mean()) : Vector(Vector::Zero(k_cols));
  out.x_std = raw.x.rowwise() - out.offset.transpose();
  out.scale.resize(k_cols);
  for (Eigen::Index k = 0; k < k_cols; ++k) {
    const double norm_n = std::sqrt(out.x_std.col(k).squaredNorm() / static_cast<double>(n));
    if (norm_n < kDegenerateNormTol) throw DegenerateColumn(static_cast<int>(k));
    out.scale[k] = norm_n;
    out.x_std.col(k) /= norm_n;
  }
  out.y = raw.y;
  return out;
}

/// Applies externally fixed scales/offsets instead of computing them from
/// this batch. Streaming callers must standardize every batch with one
/// shared scale vector before merging sufficient statistics.
inline StandardizedDesign standardize_with(const RawDesign& raw, const Vector& scale,
                                           const Vector& offset = Vector()) {
  validate_raw(raw);
  const Eigen::Index k_cols = raw.x.cols();
  if (scale.size() != k_cols)
    throw DimensionMismatch("scale length does not match column count");
  for (Eigen::Index k = 0; k < k_cols; ++k)
    if (!(scale[k] > 0.0)) throw Error("scales must be positive");

  StandardizedDesign out;
  out.centered = offset.size() > 0;
  out.offset = out.centered ? offset : Vector(Vector::Zero(k_cols));
  if (out.offset.size() != k_cols)
    throw DimensionMismatch("offset length does not match column count");
  out.x_std = raw.x.rowwise() - out.offset.transpose();
  out.x_std.array().rowwise() /= scale.transpose().array();
  out.scale = scale;
  out.y = raw.y;
  return out;
}

/// Sufficient statistics of a (standardized) sample: C = X'Y/n,
/// D = X'X/n, and |Y|_n^2. Mergeable across batches by weighted
/// summation, so fits never need the n-space data.
struct SuffStats {
  Vector c;
  Matrix d;
  long long n = 0;
  double sy2 = 0.0;
  /// Scales the statistics were built under; empty means unit scales.
  /// Merging refuses batches standardized under different scales.
  Vector scale;

  int num_regressors() const { return static_cast<int>(c.size()); }
};

inline SuffStats suffstats_from(const StandardizedDesign& design) {
  const double n = static_cast<double>(design.x_std.rows());
  SuffStats s;
  s.c = design.x_std.transpose() * design.y / n;
  s.d = design.x_std.transpose() * design.x_std / n;
  s.n = design.x_std.rows();
  s.sy2 = design.y.squaredNorm() / n;
  s.scale = design.scale;
  return s;
}

/// Pools two batches: the result equals suffstats_from over the
/// concatenated samples when both batches share one scale vector.
inline SuffStats suffstats_merge(const SuffStats& a, const SuffStats& b) {
  if (a.num_regressors() != b.num_regressors())
    throw DimensionMismatch("suffstats_merge: regressor counts differ");
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  if (a.scale.size() > 0 && b.scale.size() > 0 &&
      !(a.scale.array() == b.scale.array()).all())
    throw Error("suffstats_merge: batches were standardized under different scales; "
                "fix one scale vector before batching");
  const double wa = static_cast<double>(a.n) / static_cast<double>(a.n + b.n);
  const double wb = 1.0 - wa;
  SuffStats out;
  out.c = wa * a.c + wb * b.c;
  out.d = wa * a.d + wb * b.d;
  out.n = a.n + b.n;
  out.sy2 = wa * a.sy2 + wb * b.sy2;
  out.scale = a.scale.size() > 0 ? a.scale : b.scale;
  return out;
}

/// Largest deviation of diag(D) from 1. Batches standardized under fixed
/// external scales drift from unit norm; this reports the drift.
inline double diag_deviation(const SuffStats& stats) {
  return (stats.d.diagonal().array() - 1.0).abs().maxCoeff();
}

/// rho_{m,n}: the minimum eigenvalue of D restricted to any m regressors,
/// by exhaustive enumeration of all C(K, m) subsets. Desk-scale only;
/// refuses when the subset count exceeds `subset_cap`.
inline double restricted_eigenvalue(const SuffStats& stats, int m,
                                    std::uint64_t subset_cap = 1000000) {
  const int k_count = stats.num_regressors();
  if (m < 1 || m > k_count)
    throw Error("restricted_eigenvalue: m must lie in [1, K]");

  // C(K, m) built incrementally; each partial value C(K-m+i, i) is integral
  // and monotone in i, so the cap check can bail out early.
  std::uint64_t subsets = 1;
  for (int i = 1; i <= m; ++i) {
    subsets = subsets * static_cast<std::uint64_t>(k_count - m + i) /
              static_cast<std::uint64_t>(i);
    if (subsets > subset_cap)
      throw CombinatorialBlowup("restricted_eigenvalue: C(K, m) exceeds cap");
  }

  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  Matrix sub(m, m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver;
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) sub(i, j) = stats.d(idx[i], idx[j]);
    solver.compute(sub, Eigen::EigenvaluesOnly);
    best = std::min(best, solver.eigenvalues()(0));

    // next lexicographic subset
    int i = m - 1;
    while (i >= 0 && idx[i] == k_count - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best < 0.0 ? 0.0 : best;
}

}  // namespace greedy
