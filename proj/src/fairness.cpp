#include "fairmarket/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fairmarket/error.hpp"
#include "fairmarket/numeric.hpp"

namespace fairmarket {

namespace {

__extension__ typedef __int128 i128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// a / b as the correctly rounded double of the reduced fraction, so that
// scaling both sides by a common factor cannot change the result.
double exact_ratio(i128 a, i128 b) {
  const i128 g = gcd128(a, b);
  if (g > 1) {
    a /= g;
    b /= g;
  }
  return static_cast<double>(a) / static_cast<double>(b);
}

std::vector<std::int64_t> sorted_positive_cents(const SalarySample& sample) {
  std::vector<std::int64_t> cents;
  cents.reserve(sample.size());
  std::size_t index = 0;
  for (Money s : sample.salaries()) {
    if (s <= Money{}) {
      throw Error(ErrorCode::NonPositiveSalary,
                  "salary at index " + std::to_string(index) + " is " + s.str() + "; must be > 0");
    }
    cents.push_back(s.cents());
    ++index;
  }
  std::sort(cents.begin(), cents.end());
  return cents;
}

double share_entropy_sorted(std::span<const std::int64_t> cents) {
  const i128 total = std::accumulate(cents.begin(), cents.end(), i128{0});
  CompensatedSum h;
  for (auto c : cents) h += -xlogx(exact_ratio(c, total));
  return h.value();
}

double theil_sorted(std::span<const std::int64_t> cents) {
  const i128 total = std::accumulate(cents.begin(), cents.end(), i128{0});
  const auto n = static_cast<i128>(cents.size());
  CompensatedSum t;
  for (auto c : cents) t += xlogx(exact_ratio(n * c, total));
  return t.value() / static_cast<double>(cents.size());
}

}  // namespace

double shannon_entropy(std::span<const std::int64_t> counts) {
  std::int64_t n = 0;
  for (auto c : counts) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "negative category count");
    n += c;
  }
  if (n == 0) throw Error(ErrorCode::EmptyDistribution, "distribution has no employees");
  CompensatedSum h;
  for (auto c : counts) h += -xlogx(exact_ratio(c, n));
  return h.value();
}

double shannon_entropy(const CategoryDistribution& dist) { return shannon_entropy(dist.counts()); }

double share_entropy(const SalarySample& sample) { return share_entropy_sorted(sorted_positive_cents(sample)); }

double share_entropy(const CompanyState& company) {
  const i128 budget = company.budget().cents();
  if (budget <= 0) throw Error(ErrorCode::ZeroTotalIncome, "company budget is zero");
  CompensatedSum h;
  for (const auto& c : company.classes()) {
    if (c.salary <= Money{}) throw Error(ErrorCode::NonPositiveSalary, "class salary must be > 0");
    h += -static_cast<double>(c.count) * xlogx(exact_ratio(c.salary.cents(), budget));
  }
  return h.value();
}

double normalized_share_entropy(const SalarySample& sample) {
  const double h = share_entropy(sample);
  if (sample.size() == 1) return 1.0;
  return h / std::log(static_cast<double>(sample.size()));
}

double theil_index(const SalarySample& sample) { return theil_sorted(sorted_positive_cents(sample)); }

double TheilDecomposition::reconstructed() const {
  CompensatedSum sum;
  sum += between;
  for (std::size_t g = 0; g < within.size(); ++g) sum += income_weights[g] * within[g];
  return sum.value();
}

TheilDecomposition theil_decomposition(const SalarySample& sample,
                                       std::span<const std::vector<std::size_t>> groups) {
  const auto salaries = sample.salaries();
  std::vector<char> seen(salaries.size(), 0);
  for (const auto& group : groups) {
    if (group.empty()) throw Error(ErrorCode::InvalidPartition, "partition contains an empty group");
    for (auto idx : group) {
      if (idx >= salaries.size()) {
        throw Error(ErrorCode::InvalidPartition, "index " + std::to_string(idx) + " out of range");
      }
      if (seen[idx]++) throw Error(ErrorCode::InvalidPartition, "index " + std::to_string(idx) + " in two groups");
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(ErrorCode::InvalidPartition, "partition does not cover every employee");
  }

  const auto all = sorted_positive_cents(sample);
  const i128 total = std::accumulate(all.begin(), all.end(), i128{0});
  const auto n = static_cast<i128>(all.size());

  TheilDecomposition out;
  out.total = theil_sorted(all);
  CompensatedSum between;
  for (const auto& group : groups) {
    std::vector<std::int64_t> cents;
    cents.reserve(group.size());
    for (auto idx : group) cents.push_back(salaries[idx].cents());
    std::sort(cents.begin(), cents.end());
    const i128 group_total = std::accumulate(cents.begin(), cents.end(), i128{0});
    const double w = exact_ratio(group_total, total);
    const double pi = exact_ratio(static_cast<i128>(cents.size()), n);
    // w ln(w / pi) with w / pi evaluated as one exact ratio.
    between += w * std::log(exact_ratio(group_total * n, total * static_cast<i128>(cents.size())));
    out.within.push_back(theil_sorted(cents));
    out.income_weights.push_back(w);
    out.population_weights.push_back(pi);
  }
  out.between = between.value();
  return out;
}

double gini(const SalarySample& sample) {
  std::vector<std::int64_t> cents;
  cents.reserve(sample.size());
  for (Money s : sample.salaries()) cents.push_back(s.cents());
  std::sort(cents.begin(), cents.end());
  const auto n = static_cast<i128>(cents.size());
  i128 total = 0;
  i128 weighted = 0;
  for (std::size_t i = 0; i < cents.size(); ++i) {
    total += cents[i];
    weighted += (2 * static_cast<i128>(i + 1) - n - 1) * cents[i];
  }
  if (total == 0) throw Error(ErrorCode::ZeroTotalIncome, "gini of a sample with zero total income");
  return exact_ratio(weighted, n * total);
}

Money maximin(const SalarySample& sample) {
  const auto s = sample.salaries();
  if (s.empty()) throw Error(ErrorCode::EmptySample, "maximin of an empty sample");
  return *std::min_element(s.begin(), s.end());
}

Money mean_salary(const SalarySample& sample) {
  const auto n = static_cast<std::int64_t>(sample.size());
  auto [q, r] = divide(sample.total(), n);
  const auto twice = 2 * r.cents();
  if (twice > n || (twice == n && q.cents() % 2 != 0)) q += Money::from_cents(1);
  return q;
}

}  // namespace fairmarket
