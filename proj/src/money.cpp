#include "fairmarket/money.hpp"

#include <charconv>
#include <limits>

#include "fairmarket/error.hpp"

namespace fairmarket {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonDivisibleBudget: return "NonDivisibleBudget";
    case ErrorCode::BudgetMismatch: return "BudgetMismatch";
    case ErrorCode::EmptyDistribution: return "EmptyDistribution";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NonPositiveSalary: return "NonPositiveSalary";
    case ErrorCode::ZeroTotalIncome: return "ZeroTotalIncome";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::UnmappableSalary: return "UnmappableSalary";
    case ErrorCode::NotReplicas: return "NotReplicas";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::TooFewCompanies: return "TooFewCompanies";
    case ErrorCode::InfeasibleConstraints: return "InfeasibleConstraints";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonPositiveSupport: return "NonPositiveSupport";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Money Money::parse(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Money {
    throw Error(ErrorCode::ParseError, "not a money amount: '" + original + "'");
  };
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || frac.size() > 2 || (dot != std::string_view::npos && frac.empty())) return fail();
  for (char c : whole) {
    if (c < '0' || c > '9') return fail();
  }
  for (char c : frac) {
    if (c < '0' || c > '9') return fail();
  }
  std::int64_t units = 0;
  auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
  if (ec != std::errc{} || ptr != whole.data() + whole.size() ||
      units > std::numeric_limits<std::int64_t>::max() / kMinorPerMajor - 1) {
    return fail();
  }
  std::int64_t minor = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    minor = minor * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  }
  const std::int64_t cents = units * kMinorPerMajor + minor;
  return Money::from_cents(negative ? -cents : cents);
}

std::string Money::str() const {
  const bool negative = cents_ < 0;
  // Avoid overflow on INT64_MIN by working in unsigned.
  const std::uint64_t magnitude =
      negative ? ~static_cast<std::uint64_t>(cents_) + 1 : static_cast<std::uint64_t>(cents_);
  std::string out = negative ? "-" : "";
  out += std::to_string(magnitude / kMinorPerMajor);
  const auto minor = magnitude % kMinorPerMajor;
  out += '.';
  out += static_cast<char>('0' + minor / 10);
  out += static_cast<char>('0' + minor % 10);
  return out;
}

MoneyQuotient divide(Money amount, std::int64_t parts) {
  if (parts <= 0) throw Error(ErrorCode::InvalidArgument, "divide: parts must be positive");
  std::int64_t q = amount.cents() / parts;
  std::int64_t r = amount.cents() % parts;
  if (r < 0) {
    q -= 1;
    r += parts;
  }
  return {Money::from_cents(q), Money::from_cents(r)};
}

}  // namespace fairmarket
