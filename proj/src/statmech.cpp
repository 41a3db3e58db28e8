#include "fairmarket/statmech.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fairmarket/error.hpp"
#include "fairmarket/numeric.hpp"

namespace fairmarket {

double MultiplicityResult::log10_w() const { return log_w_nats / std::numbers::ln10; }

MultiplicityResult log_multiplicity(std::span<const std::int64_t> counts, MultiplicityMethod method) {
  std::int64_t n = 0;
  for (auto c : counts) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative category count");
    n += c;
  }
  if (n == 0) throw Error(ErrorCode::EmptyDistribution, "distribution has no employees");

  CompensatedSum log_w;
  if (method == MultiplicityMethod::ExactLogGamma) {
    log_w += std::lgamma(static_cast<double>(n) + 1.0);
    for (auto c : counts) log_w += -std::lgamma(static_cast<double>(c) + 1.0);
  } else {
    // The -N and +sum n_i terms cancel because sum n_i = N.
    log_w += xlogx(static_cast<double>(n));
    for (auto c : counts) log_w += -xlogx(static_cast<double>(c));
  }
  // lgamma rounding can leave a -1e-13 residue for the one-category case.
  return {std::max(0.0, log_w.value()), method};
}

MultiplicityResult log_multiplicity(const CategoryDistribution& dist, MultiplicityMethod method) {
  return log_multiplicity(dist.counts(), method);
}

double stirling_gap(std::int64_t n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "stirling_gap needs n >= 1");
  const auto x = static_cast<double>(n);
  return std::lgamma(x + 1.0) - (xlogx(x) - x);
}

double entropy_from_multiplicity(const CategoryDistribution& dist) {
  const auto stirling = log_multiplicity(dist, MultiplicityMethod::Stirling);
  return stirling.log_w_nats / static_cast<double>(dist.headcount());
}

CategoryDistribution macrostate_of(const SalarySample& sample, std::span<const Money> levels,
                                   Binning binning) {
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "binning needs at least one level");
  if (!std::is_sorted(levels.begin(), levels.end()) ||
      std::adjacent_find(levels.begin(), levels.end()) != levels.end()) {
    throw Error(ErrorCode::InvalidArgument, "binning levels must be strictly increasing");
  }
  std::vector<std::int64_t> counts(levels.size(), 0);
  std::size_t index = 0;
  for (Money s : sample.salaries()) {
    if (binning == Binning::Exact) {
      const auto it = std::lower_bound(levels.begin(), levels.end(), s);
      if (it == levels.end() || *it != s) {
        throw Error(ErrorCode::UnmappableSalary,
                    "salary " + s.str() + " at index " + std::to_string(index) + " is not a category level");
      }
      ++counts[static_cast<std::size_t>(it - levels.begin())];
    } else {
      const auto it = std::upper_bound(levels.begin(), levels.end(), s);
      const auto bin = it == levels.begin() ? 0 : static_cast<std::size_t>(it - levels.begin()) - 1;
      ++counts[bin];
    }
    ++index;
  }
  return CategoryDistribution({levels.begin(), levels.end()}, std::move(counts));
}

}  // namespace fairmarket
