#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fairmarket/error.hpp"
#include "fairmarket/types.hpp"

namespace fairmarket {

/// Salary levels (major currency units) over which a discrete maxent
/// distribution is solved.
class SalaryGrid {
 public:
  explicit SalaryGrid(std::vector<double> levels);

  /// k evenly spaced levels from lo to hi inclusive.
  static SalaryGrid uniform(double lo, double hi, std::size_t k);
  /// Default grid: k levels spanning [s_ave / 50, 50 s_ave].
  static SalaryGrid around_mean(double s_ave, std::size_t k = 512);

  std::span<const double> levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  /// Distance between neighbouring levels (first gap for non-uniform grids).
  double spacing() const { return levels_[1] - levels_[0]; }

 private:
  std::vector<double> levels_;
};

struct SolverOptions {
  /// Bound on the largest constraint residual, measured on features rescaled
  /// to [-1, 1] over the grid.
  double tolerance = 1e-10;
  int max_iterations = 200;
};

struct MaxentSolution {
  std::vector<double> probabilities;
  /// p_i proportional to exp(-sum_j multipliers[j] * phi_j(S_i)), one entry per
  /// constraint in ConstraintSet order, in the constraint's own units.
  std::vector<double> multipliers;
  double residual_norm = 0.0;
  int iterations = 0;
  /// Dual objective ln Z + lambda . target after every accepted step,
  /// starting with the value at lambda = 0.
  std::vector<double> dual_objective;

  double entropy() const;
};

/// Raised when Newton iteration stops short of the tolerance.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& message, double residual, int iterations)
      : Error(ErrorCode::NoConvergence, message), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Maximum-entropy distribution on `grid` subject to the moment constraints,
/// solved by damped Newton iteration on the convex dual starting from zero
/// multipliers. Features: MEAN_S -> S, MEAN_LN_S -> ln S, MEAN_LN_S_SQ -> (ln S)^2.
///
/// Throws InfeasibleConstraints when a target lies outside the open range the
/// grid can realise, and NoConvergenceError when the iteration budget runs out.
MaxentSolution solve_maxent(const SalaryGrid& grid, const ConstraintSet& constraints,
                            const SolverOptions& options = {});

/// -sum p ln p of a discrete distribution.
double discrete_entropy(std::span<const double> p);
/// Largest absolute difference between the running sums of p and q.
double max_cdf_distance(std::span<const double> p, std::span<const double> q);

double lognormal_pdf(double s, const LognormalParams& params);
double lognormal_cdf(double s, const LognormalParams& params);

struct LognormalMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// E[S] = exp(mu + sigma^2/2), Var[S] = (exp(sigma^2) - 1) exp(2 mu + sigma^2).
LognormalMoments lognormal_moments(const LognormalParams& params);

/// Differential entropy mu + (1/2) ln(2 pi e sigma^2), in nats.
double lognormal_entropy(const LognormalParams& params);

/// Maximum-likelihood fit on log salaries (salaries in major units):
/// mu = mean of ln S, sigma = population standard deviation of ln S.
LognormalParams fit_lognormal(const SalarySample& sample);

/// Kolmogorov-Smirnov distance between the sample's empirical CDF and the
/// lognormal CDF.
double ks_statistic(const SalarySample& sample, const LognormalParams& params);

}  // namespace fairmarket
