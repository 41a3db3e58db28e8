#pragma once

#include <cstdint>
#include <span>

#include "fairmarket/types.hpp"

namespace fairmarket {

// Multiplicity W = N! / (n_1! ... n_k!) is only ever handled as ln W.

enum class MultiplicityMethod { ExactLogGamma, Stirling };

struct MultiplicityResult {
  double log_w_nats = 0.0;
  MultiplicityMethod method = MultiplicityMethod::ExactLogGamma;

  double log10_w() const;
};

/// ExactLogGamma: lgamma(N+1) - sum lgamma(n_i+1).
/// Stirling: N ln N - N - sum (n_i ln n_i - n_i), empty categories add 0.
MultiplicityResult log_multiplicity(const CategoryDistribution& dist,
                                    MultiplicityMethod method = MultiplicityMethod::ExactLogGamma);
MultiplicityResult log_multiplicity(std::span<const std::int64_t> counts,
                                    MultiplicityMethod method = MultiplicityMethod::ExactLogGamma);

/// ln n! - (n ln n - n); approaches (1/2) ln(2 pi n).
double stirling_gap(std::int64_t n);

/// Per-employee Stirling log-multiplicity; identical to shannon_entropy.
double entropy_from_multiplicity(const CategoryDistribution& dist);

enum class Binning {
  /// Each salary must equal one of the levels.
  Exact,
  /// Level j collects salaries in [level_j, level_{j+1}); the first bin also
  /// takes everything below level_0 and the last bin is unbounded above.
  Interval,
};

CategoryDistribution macrostate_of(const SalarySample& sample, std::span<const Money> levels,
                                   Binning binning = Binning::Exact);

}  // namespace fairmarket
