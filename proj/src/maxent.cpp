#include "fairmarket/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fairmarket/numeric.hpp"

namespace fairmarket {

SalaryGrid::SalaryGrid(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2) throw Error(ErrorCode::InvalidArgument, "salary grid needs at least two levels");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (!std::isfinite(levels_[i]) || !(levels_[i] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "salary grid levels must be positive and finite");
    }
    if (i > 0 && !(levels_[i] > levels_[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "salary grid levels must be strictly increasing");
    }
  }
}

SalaryGrid SalaryGrid::uniform(double lo, double hi, std::size_t k) {
  if (k < 2 || !(hi > lo)) throw Error(ErrorCode::InvalidArgument, "uniform grid needs k >= 2 and hi > lo");
  std::vector<double> levels(k);
  const double step = (hi - lo) / static_cast<double>(k - 1);
  for (std::size_t i = 0; i < k; ++i) levels[i] = lo + step * static_cast<double>(i);
  levels.back() = hi;
  return SalaryGrid(std::move(levels));
}

SalaryGrid SalaryGrid::around_mean(double s_ave, std::size_t k) {
  if (!(s_ave > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid centre must be positive");
  return uniform(s_ave / 50.0, s_ave * 50.0, k);
}

double MaxentSolution::entropy() const { return discrete_entropy(probabilities); }

namespace {

double feature(ConstraintKind kind, double s) {
  switch (kind) {
    case ConstraintKind::MeanS: return s;
    case ConstraintKind::MeanLnS: return std::log(s);
    case ConstraintKind::MeanLnSSq: {
      const double l = std::log(s);
      return l * l;
    }
  }
  return 0.0;
}

// Solves A x = b for a small dense system by Gaussian elimination with partial
// pivoting. A is row-major m x m. Returns false when singular.
bool solve_small(std::vector<double> a, std::vector<double> b, std::size_t m, std::vector<double>& x) {
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r * m + col]) > std::abs(a[pivot * m + col])) pivot = r;
    }
    if (a[pivot * m + col] == 0.0) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < m; ++c) std::swap(a[col * m + c], a[pivot * m + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < m; ++r) {
      const double f = a[r * m + col] / a[col * m + col];
      for (std::size_t c = col; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
      b[r] -= f * b[col];
    }
  }
  x.assign(m, 0.0);
  for (std::size_t r = m; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < m; ++c) acc -= a[r * m + c] * x[c];
    x[r] = acc / a[r * m + r];
  }
  return true;
}

struct DualState {
  std::vector<double> p;
  double objective = 0.0;
  std::vector<double> gradient;  // target - E[phi]
  std::vector<double> hessian;   // Cov[phi], row-major
  double residual = 0.0;
};

class Dual {
 public:
  Dual(std::vector<double> features, std::vector<double> targets, std::size_t k)
      : phi_(std::move(features)), targets_(std::move(targets)), k_(k), m_(targets_.size()) {}

  DualState evaluate(std::span<const double> lambda) const {
    DualState st;
    st.p.resize(k_);
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k_; ++i) {
      double a = 0.0;
      for (std::size_t j = 0; j < m_; ++j) a -= lambda[j] * phi_[j * k_ + i];
      st.p[i] = a;
      amax = std::max(amax, a);
    }
    CompensatedSum z;
    for (auto& v : st.p) {
      v = std::exp(v - amax);
      z += v;
    }
    const double zsum = z.value();
    for (auto& v : st.p) v /= zsum;

    std::vector<double> mean(m_, 0.0);
    for (std::size_t j = 0; j < m_; ++j) {
      CompensatedSum acc;
      for (std::size_t i = 0; i < k_; ++i) acc += st.p[i] * phi_[j * k_ + i];
      mean[j] = acc.value();
    }
    st.gradient.resize(m_);
    st.hessian.assign(m_ * m_, 0.0);
    double dot = 0.0;
    for (std::size_t j = 0; j < m_; ++j) {
      st.gradient[j] = targets_[j] - mean[j];
      st.residual = std::max(st.residual, std::abs(st.gradient[j]));
      dot += lambda[j] * targets_[j];
      for (std::size_t l = 0; l <= j; ++l) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < k_; ++i) {
          acc += st.p[i] * (phi_[j * k_ + i] - mean[j]) * (phi_[l * k_ + i] - mean[l]);
        }
        st.hessian[j * m_ + l] = st.hessian[l * m_ + j] = acc.value();
      }
    }
    st.objective = amax + std::log(zsum) + dot;
    return st;
  }

 private:
  std::vector<double> phi_;  // m x k, standardized
  std::vector<double> targets_;
  std::size_t k_;
  std::size_t m_;
};

}  // namespace

MaxentSolution solve_maxent(const SalaryGrid& grid, const ConstraintSet& constraints, const SolverOptions& options) {
  const auto levels = grid.levels();
  const std::size_t k = levels.size();
  const std::size_t m = constraints.size();

  MaxentSolution out;
  if (m == 0) {
    out.probabilities.assign(k, 1.0 / static_cast<double>(k));
    out.dual_objective.push_back(std::log(static_cast<double>(k)));
    return out;
  }

  // Features rescaled to [-1, 1]; multipliers are mapped back at the end.
  std::vector<double> phi(m * k);
  std::vector<double> targets(m);
  std::vector<double> half_range(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& c = constraints.constraints()[j];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < k; ++i) {
      const double f = feature(c.kind, levels[i]);
      phi[j * k + i] = f;
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    if (!(c.target > lo && c.target < hi)) {
      throw Error(ErrorCode::InfeasibleConstraints,
                  std::string(to_string(c.kind)) + " target " + std::to_string(c.target) +
                      " is outside the open range (" + std::to_string(lo) + ", " + std::to_string(hi) +
                      ") realisable on the grid");
    }
    const double centre = 0.5 * (hi + lo);
    half_range[j] = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < k; ++i) phi[j * k + i] = (phi[j * k + i] - centre) / half_range[j];
    targets[j] = (c.target - centre) / half_range[j];
  }
  const auto mean_ln = constraints.target(ConstraintKind::MeanLnS);
  const auto mean_ln_sq = constraints.target(ConstraintKind::MeanLnSSq);
  if (mean_ln && mean_ln_sq && !(*mean_ln_sq > *mean_ln * *mean_ln)) {
    throw Error(ErrorCode::InfeasibleConstraints, "MEAN_LN_S_SQ must exceed MEAN_LN_S squared");
  }

  const Dual dual(std::move(phi), targets, k);
  std::vector<double> lambda(m, 0.0);
  DualState state = dual.evaluate(lambda);
  out.dual_objective.push_back(state.objective);

  int iter = 0;
  while (state.residual > options.tolerance) {
    if (iter >= options.max_iterations) {
      throw NoConvergenceError("maxent Newton iteration stopped at residual " + std::to_string(state.residual) +
                                   " after " + std::to_string(iter) + " iterations",
                               state.residual, iter);
    }
    ++iter;
    std::vector<double> step;
    std::vector<double> rhs(state.gradient);
    for (auto& v : rhs) v = -v;
    // Newton direction solves Cov * d = -grad; fall back to steepest descent.
    if (!solve_small(state.hessian, rhs, m, step)) step = rhs;
    double slope = 0.0;
    for (std::size_t j = 0; j < m; ++j) slope += state.gradient[j] * step[j];
    if (slope >= 0.0) {
      step = rhs;
      slope = 0.0;
      for (std::size_t j = 0; j < m; ++j) slope += state.gradient[j] * step[j];
    }

    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(state.objective));
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      std::vector<double> trial(lambda);
      for (std::size_t j = 0; j < m; ++j) trial[j] += t * step[j];
      DualState next = dual.evaluate(trial);
      if (std::isfinite(next.objective) && next.objective <= state.objective + 1e-4 * t * slope + slack) {
        lambda = std::move(trial);
        state = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw NoConvergenceError("maxent line search stalled at residual " + std::to_string(state.residual),
                               state.residual, iter);
    }
    out.dual_objective.push_back(state.objective);
  }

  out.probabilities = std::move(state.p);
  out.multipliers.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.multipliers[j] = lambda[j] / half_range[j];
  out.residual_norm = state.residual;
  out.iterations = iter;
  return out;
}

double discrete_entropy(std::span<const double> p) {
  CompensatedSum h;
  for (double v : p) h += -xlogx(v);
  return h.value();
}

double max_cdf_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::InvalidArgument, "distributions differ in length");
  CompensatedSum cp;
  CompensatedSum cq;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cp += p[i];
    cq += q[i];
    worst = std::max(worst, std::abs(cp.value() - cq.value()));
  }
  return worst;
}

double lognormal_pdf(double s, const LognormalParams& params) {
  params.validate();
  if (!(s > 0.0)) throw Error(ErrorCode::NonPositiveSupport, "lognormal pdf is defined for s > 0");
  const double z = (std::log(s) - params.mu) / params.sigma;
  return std::exp(-0.5 * z * z) / (s * params.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double lognormal_cdf(double s, const LognormalParams& params) {
  params.validate();
  if (!(s > 0.0)) return 0.0;
  return 0.5 * std::erfc(-(std::log(s) - params.mu) / (params.sigma * std::numbers::sqrt2));
}

LognormalMoments lognormal_moments(const LognormalParams& params) {
  params.validate();
  const double s2 = params.sigma * params.sigma;
  return {std::exp(params.mu + 0.5 * s2), std::expm1(s2) * std::exp(2.0 * params.mu + s2)};
}

double lognormal_entropy(const LognormalParams& params) {
  params.validate();
  return params.mu + 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * params.sigma * params.sigma);
}

LognormalParams fit_lognormal(const SalarySample& sample) {
  if (sample.size() < 2) throw Error(ErrorCode::DegenerateSample, "lognormal fit needs at least two salaries");
  std::vector<double> logs;
  logs.reserve(sample.size());
  for (Money s : sample.salaries()) {
    if (s <= Money{}) throw Error(ErrorCode::NonPositiveSalary, "lognormal fit needs positive salaries");
    logs.push_back(std::log(s.units()));
  }
  const auto n = static_cast<double>(logs.size());
  CompensatedSum sum;
  for (double l : logs) sum += l;
  const double mu = sum.value() / n;
  CompensatedSum sq;
  for (double l : logs) sq += (l - mu) * (l - mu);
  const double sigma = std::sqrt(sq.value() / n);
  if (!(sigma > 0.0)) throw Error(ErrorCode::DegenerateSample, "all salaries are equal; sigma would be 0");
  return {mu, sigma};
}

double ks_statistic(const SalarySample& sample, const LognormalParams& params) {
  params.validate();
  std::vector<double> x;
  x.reserve(sample.size());
  for (Money s : sample.salaries()) {
    if (s <= Money{}) throw Error(ErrorCode::NonPositiveSalary, "KS statistic needs positive salaries");
    x.push_back(s.units());
  }
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = lognormal_cdf(x[i], params);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace fairmarket
