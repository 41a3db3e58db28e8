#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fairmarket/types.hpp"

namespace fairmarket {

// All logarithms are natural; entropies are in nats and 0 ln 0 = 0.

/// -sum p_i ln p_i over category shares p_i = n_i / N.
double shannon_entropy(const CategoryDistribution& dist);
double shannon_entropy(std::span<const std::int64_t> counts);

/// Entropy of individual income shares S_i / sum S. Range (0, ln N].
double share_entropy(const SalarySample& sample);
/// Same quantity computed from a company's classes without expanding them.
double share_entropy(const CompanyState& company);
/// share_entropy / ln N; 1 for a single employee.
double normalized_share_entropy(const SalarySample& sample);

/// T = (1/N) sum (S_i/S_ave) ln(S_i/S_ave); equals ln N - share_entropy.
double theil_index(const SalarySample& sample);

struct TheilDecomposition {
  double total = 0.0;
  double between = 0.0;
  /// Theil index inside each group, in group order.
  std::vector<double> within;
  /// Income share of each group; weights for `within`.
  std::vector<double> income_weights;
  std::vector<double> population_weights;

  /// between + sum_g income_weight_g * within_g
  double reconstructed() const;
};

/// Exact between/within split of the Theil index for a partition given as
/// lists of sample indices. Every index must appear in exactly one non-empty
/// group, otherwise InvalidPartition.
TheilDecomposition theil_decomposition(const SalarySample& sample,
                                       std::span<const std::vector<std::size_t>> groups);

/// Mean absolute difference over twice the mean, evaluated exactly from
/// sorted prefix sums. Zero salaries are allowed; zero total income is not.
double gini(const SalarySample& sample);

/// Smallest salary.
Money maximin(const SalarySample& sample);

/// Mean salary rounded half-to-even to the nearest minor unit.
Money mean_salary(const SalarySample& sample);

}  // namespace fairmarket
