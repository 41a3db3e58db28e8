#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace fairmarket {

/// Exact monetary amount in minor currency units (cents).
///
/// Money is signed so that differences and deficits are representable;
/// salary-bearing types enforce their own sign constraints. There is no
/// operator/ : division goes through divide(), which hands back the
/// remainder instead of dropping it.
class Money {
 public:
  static constexpr std::int64_t kMinorPerMajor = 100;

  constexpr Money() = default;
  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
  static constexpr Money from_units(std::int64_t units) { return Money(units * kMinorPerMajor); }

  /// Parses "123", "123.4" or "123.45" (optional leading '-'). More than two
  /// fractional digits, thousands separators or exponents are rejected.
  static Money parse(std::string_view text);

  constexpr std::int64_t cents() const { return cents_; }
  /// Value in major units (dollars) as a real number.
  constexpr double units() const { return static_cast<double>(cents_) / kMinorPerMajor; }

  /// Exact two-decimal rendering, e.g. "45000.00".
  std::string str() const;

  constexpr Money operator+(Money o) const { return Money(cents_ + o.cents_); }
  constexpr Money operator-(Money o) const { return Money(cents_ - o.cents_); }
  constexpr Money operator-() const { return Money(-cents_); }
  constexpr Money operator*(std::int64_t k) const { return Money(cents_ * k); }
  constexpr Money& operator+=(Money o) {
    cents_ += o.cents_;
    return *this;
  }
  constexpr Money& operator-=(Money o) {
    cents_ -= o.cents_;
    return *this;
  }

  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

constexpr Money operator*(std::int64_t k, Money m) { return m * k; }

struct MoneyQuotient {
  Money quotient;
  Money remainder;
};

/// Splits `amount` into `parts` equal shares; remainder is what is left over
/// (0 <= remainder < parts cents for non-negative amounts).
MoneyQuotient divide(Money amount, std::int64_t parts);

/// abs(a - b)
constexpr Money gap(Money a, Money b) { return a < b ? b - a : a - b; }

}  // namespace fairmarket
