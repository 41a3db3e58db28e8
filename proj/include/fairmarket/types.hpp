#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairmarket/money.hpp"

namespace fairmarket {

/// Non-negative rational number with a positive denominator, kept reduced.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  /// Accepts "p/q" or an exact decimal such as "0.5" or "1".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  bool operator==(const Rational&) const = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Individual salaries of one population; the microstate restricted to pay.
class SalarySample {
 public:
  explicit SalarySample(std::vector<Money> salaries);

  std::span<const Money> salaries() const { return salaries_; }
  std::size_t size() const { return salaries_.size(); }
  Money total() const;
  /// Every salary multiplied by `factor`.
  SalarySample scaled(std::int64_t factor) const;

  bool operator==(const SalarySample&) const = default;

 private:
  std::vector<Money> salaries_;
};

/// Macrostate: how many employees sit at each of k salary levels.
class CategoryDistribution {
 public:
  CategoryDistribution(std::vector<Money> levels, std::vector<std::int64_t> counts);

  std::span<const Money> levels() const { return levels_; }
  std::span<const std::int64_t> counts() const { return counts_; }
  std::size_t categories() const { return levels_.size(); }
  std::int64_t headcount() const;
  /// counts[i] / N. Throws EmptyDistribution when N == 0.
  std::vector<double> shares() const;

  bool operator==(const CategoryDistribution&) const = default;

 private:
  std::vector<Money> levels_;
  std::vector<std::int64_t> counts_;
};

struct SkillClass {
  int class_id = 0;
  std::int64_t count = 0;
  Money salary;
  /// Ordinal stand-in for the value a class contributes; never a quantity.
  int value_rank = 0;

  bool operator==(const SkillClass&) const = default;
};

using CompanyId = std::uint32_t;

/// Classes and payroll prior to the exact-budget check, e.g. right after a
/// negotiation and before budget repair.
struct PayrollDraft {
  CompanyId company_id = 0;
  std::vector<SkillClass> classes;
  Money budget;

  Money payroll() const;
};

/// One company: its skill classes and conserved salary budget.
///
/// The constructor enforces that the payroll equals the budget to the cent,
/// that counts are positive, and that value ranks strictly order the classes.
/// Classes are stored sorted by value rank.
class CompanyState {
 public:
  CompanyState(CompanyId id, std::vector<SkillClass> classes, Money budget);

  CompanyId id() const { return id_; }
  std::span<const SkillClass> classes() const { return classes_; }
  Money budget() const { return budget_; }
  std::int64_t headcount() const;
  const SkillClass* find_class(int class_id) const;

  /// Expanded per-employee salaries, in class order.
  SalarySample sample() const;
  /// Distinct salary levels with their headcounts.
  CategoryDistribution macrostate() const;
  PayrollDraft draft() const { return {id_, classes_, budget_}; }

  bool operator==(const CompanyState&) const = default;

 private:
  CompanyId id_;
  std::vector<SkillClass> classes_;
  Money budget_;
};

/// Replica companies (same N, budget and per-class counts) plus the round
/// counter and seed driving the pairing RNG.
class MarketEnsemble {
 public:
  MarketEnsemble(std::vector<CompanyState> companies, std::int64_t round, std::uint64_t seed);

  std::span<const CompanyState> companies() const { return companies_; }
  std::size_t size() const { return companies_.size(); }
  std::int64_t round() const { return round_; }
  std::uint64_t seed() const { return seed_; }

  bool operator==(const MarketEnsemble&) const = default;

 private:
  std::vector<CompanyState> companies_;
  std::int64_t round_;
  std::uint64_t seed_;
};

/// True when both companies share budget, headcount and per-class counts.
bool are_replicas(const CompanyState& a, const CompanyState& b);

struct NegotiationPolicy {
  /// Fraction of the salary gap conceded toward the higher salary.
  Rational alpha{1, 2};
  /// Gaps at or below this do not motivate a move.
  Money epsilon = Money::from_units(1);

  void validate() const;
};

struct LognormalParams {
  double mu = 0.0;
  double sigma = 1.0;

  void validate() const;
};

enum class ConstraintKind { MeanS, MeanLnS, MeanLnSSq };

std::string_view to_string(ConstraintKind kind);

struct Constraint {
  ConstraintKind kind;
  double target;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<Constraint> constraints);

  std::span<const Constraint> constraints() const { return constraints_; }
  std::size_t size() const { return constraints_.size(); }
  bool empty() const { return constraints_.empty(); }
  std::optional<double> target(ConstraintKind kind) const;

 private:
  std::vector<Constraint> constraints_;
};

struct FairnessReport {
  double entropy_nats = 0.0;
  double theil = 0.0;
  double gini = 0.0;
  Money maximin;
  std::optional<double> log_multiplicity_nats;
  std::int64_t n = 0;
  Money mean_salary;
};

/// Equal-pay starting point: one class holding every employee at budget / n.
/// Throws NonDivisibleBudget when the budget does not split evenly.
CompanyState delta_initial_state(std::int64_t n, Money budget, CompanyId id = 0);

}  // namespace fairmarket
