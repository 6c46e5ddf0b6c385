#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "greedy/design.hpp"
#include "greedy/errors.hpp"

namespace greedy {

enum class Algorithm { PGA, OGA, RGA, CGA, FWA };
enum class WeightRule { Fixed, LineSearch };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::PGA: return "PGA";
    case Algorithm::OGA: return "OGA";
    case Algorithm::RGA: return "RGA";
    case Algorithm::CGA: return "CGA";
    case Algorithm::FWA: return "FWA";
  }
  return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
  if (name == "PGA" || name == "pga") return Algorithm::PGA;
  if (name == "OGA" || name == "oga") return Algorithm::OGA;
  if (name == "RGA" || name == "rga") return Algorithm::RGA;
  if (name == "CGA" || name == "cga") return Algorithm::CGA;
  if (name == "FWA" || name == "fwa") return Algorithm::FWA;
  throw Error("unknown algorithm: " + name);
}

struct AlgoConfig {
  Algorithm algorithm = Algorithm::PGA;
  /// Iteration budget m.
  int m_max = 100;
  /// PGA shrinkage; controls the degree of greediness.
  double nu = 0.1;
  /// Coefficient budget for CGA (per-step clip) and FWA (vertex size).
  double b_bar = 1.0;
  /// Weight rule for RGA/CGA/FWA: fixed 1/j resp. 2/(1+j), or an exact
  /// per-step line search.
  WeightRule weights = WeightRule::Fixed;
  /// Unit-simplex forecast-combination variant of CGA/FWA.
  bool simplex = false;
  /// Early stop once the selection criterion falls below this value.
  double corr_tol = 1e-12;
  /// OGA collinearity guard on the Cholesky pivot of the selected Gram.
  double proj_tol = 1e-10;
  /// Reproduce the vectorized RGA exactly as printed (extra 1/j factor on
  /// the new coefficient) instead of the convex-combination recursion.
  bool figure5_literal_rga = false;
};

inline void validate(const AlgoConfig& cfg) {
  if (cfg.m_max < 1) throw Error("m_max must be positive");
  if (!(cfg.nu > 0.0) || cfg.nu > 1.0) throw Error("nu must lie in (0, 1]");
  const bool budgeted = cfg.algorithm == Algorithm::CGA || cfg.algorithm == Algorithm::FWA;
  if (budgeted && !(cfg.b_bar > 0.0)) throw Error("b_bar must be positive for CGA/FWA");
  if (cfg.simplex && !budgeted) throw Error("the simplex variant exists only for CGA/FWA");
  if (cfg.weights == WeightRule::LineSearch &&
      (cfg.algorithm == Algorithm::PGA || cfg.algorithm == Algorithm::OGA))
    throw Error("line-search weights apply to RGA/CGA/FWA only");
  if (cfg.corr_tol < 0.0 || cfg.proj_tol < 0.0)
    throw Error("tolerances must be nonnegative");
}

/// CGA's clip budget; the simplex variant pins it at 1.
inline double effective_b_bar(const AlgoConfig& cfg) {
  if (cfg.algorithm == Algorithm::CGA && cfg.simplex) return 1.0;
  return cfg.b_bar;
}

/// One greedy step: the index chosen, the full coefficient vector after
/// the update, and the in-sample residual sum of squares |Y - F_j|_n^2.
struct GreedyStep {
  int selected_index;
  Vector coeffs;
  double rss_n;
};

struct GreedyPath {
  std::vector<GreedyStep> steps;
  /// Step at which max |correlation| fell below corr_tol, if it did.
  std::optional<int> converged_at;
  AlgoConfig config;
  /// Standardization transform needed to apply the fit to raw data.
  Vector scale;
  Vector offset;
  /// Candidates permanently dropped by the OGA collinearity guard.
  std::vector<int> excluded;

  int length() const { return static_cast<int>(steps.size()); }

  Vector coeffs_at(int at_step) const {
    if (at_step < 0 || at_step > length())
      throw Error("coeffs_at: step out of range");
    if (at_step == 0) return Vector::Zero(scale.size());
    return steps[at_step - 1].coeffs;
  }

  double rss_at(int at_step) const {
    if (at_step < 1 || at_step > length())
      throw Error("rss_at: step out of range");
    return steps[at_step - 1].rss_n;
  }
};

/// Returns the smallest index attaining max_k |a_k| (or max_k a_k when
/// `signed_max`) over indices not marked in `excluded` (empty = none).
inline int select_regressor(const Vector& a, const std::vector<bool>& excluded,
                            bool signed_max) {
  const int k_count = static_cast<int>(a.size());
  int best = -1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < k_count; ++k) {
    if (!excluded.empty() && excluded[k]) continue;
    const double v = signed_max ? a[k] : std::abs(a[k]);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  if (best < 0) throw AllExcluded("select_regressor: every index excluded");
  return best;
}

namespace detail {

inline double rss_from_stats(const SuffStats& s, const Vector& b, const Vector& q) {
  return s.sy2 - 2.0 * b.dot(s.c) + b.dot(q);
}

inline GreedyPath start_path(const SuffStats& stats, const AlgoConfig& cfg) {
  GreedyPath path;
  path.config = cfg;
  path.scale =
      stats.scale.size() > 0 ? stats.scale : Vector(Vector::Ones(stats.num_regressors()));
  path.offset = Vector::Zero(stats.num_regressors());
  return path;
}

inline void expect_algorithm(const AlgoConfig& cfg, Algorithm a) {
  if (cfg.algorithm != a) throw Error("config.algorithm does not match the fit routine");
  validate(cfg);
}

/// Candidate outcome of the per-regressor line search used by RGA/CGA.
struct LineSearchStep {
  double objective = std::numeric_limits<double>::infinity();
  double keep;  // multiplier on the previous coefficients, in [0, 1]
  double add;   // coefficient added on the candidate regressor
};

/// Minimizes |Y - v F - u X_k|_n^2 over v in [0,1] with u either free
/// (b_lo = -inf, b_hi = +inf semantics are encoded by `budget` < 0) or
/// constrained to sign-restricted multiples of the shrinkage (1 - v):
/// |u| <= (1 - v) * budget, optionally with u >= 0 (`nonnegative`).
/// Closed form: the objective is piecewise quadratic in v once u is set
/// to its clamped per-v optimum, so the global minimum is attained at a
/// piece vertex, a clamping breakpoint, or an endpoint.
inline LineSearchStep line_search_candidate(double sy2, double syF, double sFF,
                                            double syX, double sFX, double sXX,
                                            double budget, bool nonnegative) {
  LineSearchStep out;
  if (!(sXX > 0.0)) return out;  // degenerate regressor; never selected

  const auto u_limits = [&](double v, double& lo, double& hi) {
    if (budget < 0.0) {
      lo = -std::numeric_limits<double>::infinity();
      hi = std::numeric_limits<double>::infinity();
    } else {
      hi = (1.0 - v) * budget;
      lo = nonnegative ? 0.0 : -hi;
    }
  };
  const auto objective = [&](double v, double u) {
    return sy2 - 2.0 * v * syF - 2.0 * u * syX + v * v * sFF + 2.0 * v * u * sFX +
           u * u * sXX;
  };
  const auto consider = [&](double v) {
    if (!(v >= 0.0 && v <= 1.0)) return;
    double lo, hi;
    u_limits(v, lo, hi);
    const double u = std::clamp((syX - v * sFX) / sXX, lo, hi);
    const double obj = objective(v, u);
    if (obj < out.objective) {
      out.objective = obj;
      out.keep = v;
      out.add = u;
    }
  };

  consider(0.0);
  consider(1.0);

  // Vertex with u interior: phi(v) = sy2 - 2 v syF + v^2 sFF - u*(v)^2 sXX.
  const double denom = sFF - sFX * sFX / sXX;
  const double numer = syF - syX * sFX / sXX;
  if (denom > 0.0) consider(numer / denom);

  if (budget >= 0.0) {
    // Vertices of the clamped pieces u = sg * (1 - v) * budget.
    for (const double sg : {1.0, -1.0}) {
      if (nonnegative && sg < 0.0) continue;
      const double bb = sg * budget;
      const double a2 = sFF + 2.0 * bb * sFX + bb * bb * sXX;
      const double a1 = -2.0 * syF - 2.0 * bb * syX - 2.0 * bb * sFX - 2.0 * bb * bb * sXX;
      if (a2 > 0.0) consider(-a1 / (2.0 * a2));
    }
    // u = 0 piece (simplex lower boundary).
    if (nonnegative && sFF > 0.0) consider(syF / sFF);
    // Breakpoints where the unconstrained u meets a clamp.
    for (const double sg : {1.0, -1.0}) {
      if (nonnegative && sg < 0.0) continue;
      const double d = sg * budget * sXX - sFX;
      if (d != 0.0) consider((sg * budget * sXX - syX) / d);
    }
    if (nonnegative && sFX != 0.0) consider(syX / sFX);
  }
  return out;
}

// Expansion of the clamped-piece quadratic used above:
//   phi(v) = v^2 (sFF + 2 bb sFX + bb^2 sXX)
//          + v (-2 syF - 2 bb syX - 2 bb sFX - 2 bb^2 sXX) + const,
// obtained by substituting u = (1 - v) bb into the objective; the v^1
// coefficient collects 2 bb syX from -2 u syX, 2 bb sFX from 2 v u sFX,
// and -2 bb^2 sXX from u^2 sXX.

}  // namespace detail

/// PGA (L2-Boosting): b[s] += nu * A[s] with A = C - D b.
inline GreedyPath fit_pga(const SuffStats& stats, const AlgoConfig& cfg) {
  detail::expect_algorithm(cfg, Algorithm::PGA);
  const int k_count = stats.num_regressors();
  GreedyPath path = detail::start_path(stats, cfg);
  Vector b = Vector::Zero(k_count);
  Vector q = Vector::Zero(k_count);  // q = D b, maintained incrementally
  for (int j = 1; j <= cfg.m_max; ++j) {
    const Vector a = stats.c - q;
    const int s = select_regressor(a, {}, false);
    if (std::abs(a[s]) < cfg.corr_tol) {
      path.converged_at = j;
      break;
    }
    const double delta = cfg.nu * a[s];
    b[s] += delta;
    q += delta * stats.d.col(s);
    path.steps.push_back({s, b, detail::rss_from_stats(stats, b, q)});
  }
  return path;
}

/// OGA (Orthogonal Matching Pursuit): selection as in PGA, then an OLS
/// refit on the selected span via an incrementally grown Cholesky factor
/// of D[S,S]. Candidates whose pivot falls below proj_tol are permanently
/// excluded and recorded on the path.
inline GreedyPath fit_oga(const SuffStats& stats, const AlgoConfig& cfg) {
  detail::expect_algorithm(cfg, Algorithm::OGA);
  const int k_count = stats.num_regressors();
  GreedyPath path = detail::start_path(stats, cfg);
  const int m_cap = std::min(cfg.m_max, k_count);
  Matrix chol(m_cap, m_cap);  // lower-triangular factor, one row per step
  std::vector<int> sel;
  sel.reserve(m_cap);
  std::vector<bool> unavailable(k_count, false);
  Vector b = Vector::Zero(k_count);
  Vector q = Vector::Zero(k_count);
  Vector w(m_cap), z(m_cap), bsel(m_cap);

  for (int j = 1; j <= cfg.m_max; ++j) {
    const Vector a = stats.c - q;
    int s = -1;
    while (true) {
      try {
        s = select_regressor(a, unavailable, false);
      } catch (const AllExcluded&) {
        return path;  // nothing selectable remains
      }
      if (std::abs(a[s]) < cfg.proj_tol * 0.0 + cfg.corr_tol) {
        path.converged_at = j;
        return path;
      }
      const int p = static_cast<int>(sel.size());
      for (int i = 0; i < p; ++i) {
        double acc = stats.d(sel[i], s);
        for (int t = 0; t < i; ++t) acc -= chol(i, t) * w[t];
        w[i] = acc / chol(i, i);
      }
      double piv2 = stats.d(s, s);
      for (int i = 0; i < p; ++i) piv2 -= w[i] * w[i];
      if (piv2 < cfg.proj_tol) {
        unavailable[s] = true;
        path.excluded.push_back(s);
        continue;  // collinear with the selected span; try the next best
      }
      for (int i = 0; i < p; ++i) chol(p, i) = w[i];
      chol(p, p) = std::sqrt(piv2);
      sel.push_back(s);
      unavailable[s] = true;
      break;
    }

    // Solve D[S,S] b_S = C_S through the factor.
    const int p = static_cast<int>(sel.size());
    for (int i = 0; i < p; ++i) {
      double acc = stats.c[sel[i]];
      for (int t = 0; t < i; ++t) acc -= chol(i, t) * z[t];
      z[i] = acc / chol(i, i);
    }
    for (int i = p - 1; i >= 0; --i) {
      double acc = z[i];
      for (int t = i + 1; t < p; ++t) acc -= chol(t, i) * bsel[t];
      bsel[i] = acc / chol(i, i);
    }
    b.setZero();
    q.setZero();
    for (int i = 0; i < p; ++i) {
      b[sel[i]] = bsel[i];
      q += bsel[i] * stats.d.col(sel[i]);
    }
    path.steps.push_back({sel.back(), b, detail::rss_from_stats(stats, b, q)});
  }
  return path;
}

/// RGA: convex combination of the previous fit with a fresh univariate
/// fit. Fixed weights w_j = 1/j add the shrunk-residual correlation as
/// the new coefficient; the line-search variant minimizes the residual
/// norm jointly over the kept fraction and the new coefficient.
inline GreedyPath fit_rga(const SuffStats& stats, const AlgoConfig& cfg) {
  detail::expect_algorithm(cfg, Algorithm::RGA);
  const int k_count = stats.num_regressors();
  GreedyPath path = detail::start_path(stats, cfg);
  Vector b = Vector::Zero(k_count);
  Vector q = Vector::Zero(k_count);
  for (int j = 1; j <= cfg.m_max; ++j) {
    if (cfg.weights == WeightRule::Fixed) {
      const double wj = 1.0 / j;
      const Vector a = stats.c - (1.0 - wj) * q;
      const int s = select_regressor(a, {}, false);
      if (std::abs(a[s]) < cfg.corr_tol) {
        path.converged_at = j;
        break;
      }
      const double coef = cfg.figure5_literal_rga ? wj * a[s] : a[s];
      b *= (1.0 - wj);
      b[s] += coef;
      q *= (1.0 - wj);
      q += coef * stats.d.col(s);
    } else {
      const Vector resid_corr = stats.c - q;
      const int smax = select_regressor(resid_corr, {}, false);
      if (std::abs(resid_corr[smax]) < cfg.corr_tol) {
        path.converged_at = j;
        break;
      }
      const double syF = b.dot(stats.c);
      const double sFF = b.dot(q);
      int best_k = -1;
      detail::LineSearchStep best;
      for (int k = 0; k < k_count; ++k) {
        const detail::LineSearchStep cand = detail::line_search_candidate(
            stats.sy2, syF, sFF, stats.c[k], q[k], stats.d(k, k),
            /*budget=*/-1.0, /*nonnegative=*/false);
        if (cand.objective < best.objective) {
          best = cand;
          best_k = k;
        }
      }
      if (best_k < 0) throw Error("fit_rga: no admissible regressor");
      b *= best.keep;
      b[best_k] += best.add;
      q *= best.keep;
      q += best.add * stats.d.col(best_k);
      path.steps.push_back({best_k, b, detail::rss_from_stats(stats, b, q)});
      continue;
    }
    const int s = path.steps.empty() ? 0 : 0;  // placeholder, overwritten below
    (void)s;
    path.steps.push_back({0, b, detail::rss_from_stats(stats, b, q)});
  }
  return path;
}

/// CGA: RGA with every step coefficient clipped to the budget, keeping
/// the l1 norm of the coefficients within b_bar at every step. The
/// simplex variant clamps to [0, 1] with budget 1.
inline GreedyPath fit_cga(const SuffStats& stats, const AlgoConfig& cfg) {
  detail::expect_algorithm(cfg, Algorithm::CGA);
  const int k_count = stats.num_regressors();
  const double bb = effective_b_bar(cfg);
  GreedyPath path = detail::start_path(stats, cfg);
  Vector b = Vector::Zero(k_count);
  Vector q = Vector::Zero(k_count);
  for (int j = 1; j <= cfg.m_max; ++j) {
    if (cfg.weights == WeightRule::Fixed) {
      const double wj = 1.0 / j;
      const Vector a = stats.c - (1.0 - wj) * q;
      const int s = select_regressor(a, {}, false);
      if (std::abs(a[s]) < cfg.corr_tol) {
        path.converged_at = j;
        break;
      }
      const double beta = a[s] / wj;
      const double clipped =
          cfg.simplex ? std::clamp(beta, 0.0, 1.0)
                      : std::copysign(std::min(std::abs(beta), bb), beta);
      b *= (1.0 - wj);
      b[s] += wj * clipped;
      q *= (1.0 - wj);
      q += wj * clipped * stats.d.col(s);
      path.steps.push_back({s, b, detail::rss_from_stats(stats, b, q)});
    } else {
      const Vector resid_corr = stats.c - q;
      const int smax = select_regressor(resid_corr, {}, false);
      if (std::abs(resid_corr[smax]) < cfg.corr_tol) {
        path.converged_at = j;
        break;
      }
      const double syF = b.dot(stats.c);
      const double sFF = b.dot(q);
      int best_k = -1;
      detail::LineSearchStep best;
      for (int k = 0; k < k_count; ++k) {
        const detail::LineSearchStep cand = detail::line_search_candidate(
            stats.sy2, syF, sFF, stats.c[k], q[k], stats.d(k, k),
            /*budget=*/bb, /*nonnegative=*/cfg.simplex);
        if (cand.objective < best.objective) {
          best = cand;
          best_k = k;
        }
      }
      if (best_k < 0) throw Error("fit_cga: no admissible regressor");
      b *= best.keep;
      b[best_k] += best.add;
      q *= best.keep;
      q += best.add * stats.d.col(best_k);
      path.steps.push_back({best_k, b, detail::rss_from_stats(stats, b, q)});
    }
  }
  return path;
}

/// FWA: conditional-gradient steps toward the l1-ball vertex with the
/// strongest residual correlation, with w_j = 2/(1+j) or an exact line
/// search. The simplex variant uses the signed selection rule and floors
/// the vertex coefficient at zero.
inline GreedyPath fit_fwa(const SuffStats& stats, const AlgoConfig& cfg) {
  detail::expect_algorithm(cfg, Algorithm::FWA);
  const int k_count = stats.num_regressors();
  GreedyPath path = detail::start_path(stats, cfg);
  Vector b = Vector::Zero(k_count);
  Vector q = Vector::Zero(k_count);
  for (int j = 1; j <= cfg.m_max; ++j) {
    const Vector a = stats.c - q;
    const int s = select_regressor(a, {}, cfg.simplex);
    if (std::abs(a[s]) < cfg.corr_tol) {
      path.converged_at = j;
      break;
    }
    const double beta_raw = cfg.b_bar * (a[s] >= 0.0 ? 1.0 : -1.0);
    const double beta = cfg.simplex ? std::max(beta_raw, 0.0) : beta_raw;
    double wj = 2.0 / (1.0 + j);
    if (cfg.weights == WeightRule::LineSearch) {
      // argmin_w |Y - (1-w) F - w g|_n^2 with g = beta X_s, closed form.
      const double syF = b.dot(stats.c);
      const double sFF = b.dot(q);
      const double cross = beta * stats.c[s] - beta * q[s] - syF + sFF;  // <Y-F, g-F>
      const double gap2 = beta * beta * stats.d(s, s) - 2.0 * beta * q[s] + sFF;
      wj = gap2 > 0.0 ? std::clamp(cross / gap2, 0.0, 1.0) : 1.0;
    }
    b *= (1.0 - wj);
    b[s] += wj * beta;
    q *= (1.0 - wj);
    q += wj * beta * stats.d.col(s);
    path.steps.push_back({s, b, detail::rss_from_stats(stats, b, q)});
  }
  return path;
}

inline GreedyPath fit(const SuffStats& stats, const AlgoConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::PGA: return fit_pga(stats, cfg);
    case Algorithm::OGA: return fit_oga(stats, cfg);
    case Algorithm::RGA: return fit_rga(stats, cfg);
    case Algorithm::CGA: return fit_cga(stats, cfg);
    case Algorithm::FWA: return fit_fwa(stats, cfg);
  }
  throw Error("unknown algorithm");
}

/// Fits from a standardized design and stamps its transform on the path
/// so predictions can consume raw data.
inline GreedyPath fit(const StandardizedDesign& design, const AlgoConfig& cfg) {
  GreedyPath path = fit(suffstats_from(design), cfg);
  path.scale = design.scale;
  path.offset = design.offset;
  return path;
}

/// Applies the fit at `at_step` to fresh raw regressors: columns are
/// mapped through the stored standardization transform first.
inline Vector predict(const GreedyPath& path, int at_step, const Matrix& x_new) {
  const Eigen::Index k_count = path.scale.size();
  if (x_new.cols() != k_count)
    throw DimensionMismatch("predict: column count does not match the fit");
  if (at_step < 0 || at_step > path.length())
    throw Error("predict: at_step exceeds the path length");
  const Vector b = path.coeffs_at(at_step);
  const Vector b_raw = b.cwiseQuotient(path.scale);
  Vector pred = x_new * b_raw;
  if (path.offset.squaredNorm() > 0.0) pred.array() -= path.offset.dot(b_raw);
  return pred;
}

}  // namespace greedy
