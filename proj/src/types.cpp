#include "fairmarket/types.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "fairmarket/error.hpp"

namespace fairmarket {

namespace {

std::int64_t parse_int(std::string_view text, const std::string& what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "not an integer in " + what + ": '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) {
    throw Error(ErrorCode::InvalidArgument, "rational needs num >= 0 and den > 0");
  }
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  const std::string what = "rational '" + std::string(text) + "'";
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash), what), parse_int(text.substr(slash + 1), what));
  }
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text, what), 1);
  const auto whole = text.substr(0, dot);
  const auto frac = text.substr(dot + 1);
  if (frac.empty() || frac.size() > 15 || whole.empty()) {
    throw Error(ErrorCode::ParseError, "malformed " + what);
  }
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  return Rational(parse_int(whole, what) * den + parse_int(frac, what), den);
}

std::string Rational::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

// ---------------------------------------------------------------------------

SalarySample::SalarySample(std::vector<Money> salaries) : salaries_(std::move(salaries)) {
  if (salaries_.empty()) throw Error(ErrorCode::EmptySample, "salary sample has no entries");
  for (std::size_t i = 0; i < salaries_.size(); ++i) {
    if (salaries_[i] < Money{}) {
      throw Error(ErrorCode::NonPositiveSalary,
                  "negative salary at index " + std::to_string(i) + ": " + salaries_[i].str());
    }
  }
}

Money SalarySample::total() const {
  return std::accumulate(salaries_.begin(), salaries_.end(), Money{});
}

SalarySample SalarySample::scaled(std::int64_t factor) const {
  if (factor <= 0) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  std::vector<Money> out;
  out.reserve(salaries_.size());
  for (Money s : salaries_) out.push_back(s * factor);
  return SalarySample(std::move(out));
}

// ---------------------------------------------------------------------------

CategoryDistribution::CategoryDistribution(std::vector<Money> levels, std::vector<std::int64_t> counts)
    : levels_(std::move(levels)), counts_(std::move(counts)) {
  if (levels_.size() != counts_.size()) {
    throw Error(ErrorCode::InvalidArgument, "levels and counts differ in length");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] <= Money{}) throw Error(ErrorCode::InvalidArgument, "category levels must be positive");
    if (i > 0 && levels_[i] <= levels_[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "category levels must be strictly increasing");
    }
    if (counts_[i] < 0) throw Error(ErrorCode::InvalidArgument, "category counts must be non-negative");
  }
}

std::int64_t CategoryDistribution::headcount() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::vector<double> CategoryDistribution::shares() const {
  const auto n = headcount();
  if (n == 0) throw Error(ErrorCode::EmptyDistribution, "distribution has no employees");
  std::vector<double> out;
  out.reserve(counts_.size());
  for (auto c : counts_) out.push_back(static_cast<double>(c) / static_cast<double>(n));
  return out;
}

// ---------------------------------------------------------------------------

Money PayrollDraft::payroll() const {
  Money total;
  for (const auto& c : classes) total += c.salary * c.count;
  return total;
}

CompanyState::CompanyState(CompanyId id, std::vector<SkillClass> classes, Money budget)
    : id_(id), classes_(std::move(classes)), budget_(budget) {
  if (classes_.empty()) throw Error(ErrorCode::InvalidArgument, "company needs at least one class");
  std::sort(classes_.begin(), classes_.end(),
            [](const SkillClass& a, const SkillClass& b) { return a.value_rank < b.value_rank; });
  std::set<int> ids;
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    if (!ids.insert(c.class_id).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate class id " + std::to_string(c.class_id));
    }
    if (i > 0 && c.value_rank == classes_[i - 1].value_rank) {
      throw Error(ErrorCode::InvalidArgument, "value ranks must strictly order classes");
    }
    if (c.count <= 0) throw Error(ErrorCode::InvalidArgument, "class counts must be positive");
    if (c.salary < Money{}) throw Error(ErrorCode::NonPositiveSalary, "class salary is negative");
  }
  const Money payroll = PayrollDraft{id_, classes_, budget_}.payroll();
  if (payroll != budget_) {
    throw Error(ErrorCode::BudgetMismatch, "company " + std::to_string(id_) + " payroll " + payroll.str() +
                                               " != budget " + budget_.str());
  }
}

std::int64_t CompanyState::headcount() const {
  std::int64_t n = 0;
  for (const auto& c : classes_) n += c.count;
  return n;
}

const SkillClass* CompanyState::find_class(int class_id) const {
  auto it = std::find_if(classes_.begin(), classes_.end(),
                         [&](const SkillClass& c) { return c.class_id == class_id; });
  return it == classes_.end() ? nullptr : &*it;
}

SalarySample CompanyState::sample() const {
  std::vector<Money> out;
  out.reserve(static_cast<std::size_t>(headcount()));
  for (const auto& c : classes_) out.insert(out.end(), static_cast<std::size_t>(c.count), c.salary);
  return SalarySample(std::move(out));
}

CategoryDistribution CompanyState::macrostate() const {
  std::map<Money, std::int64_t> by_level;
  for (const auto& c : classes_) by_level[c.salary] += c.count;
  std::vector<Money> levels;
  std::vector<std::int64_t> counts;
  for (const auto& [level, count] : by_level) {
    levels.push_back(level);
    counts.push_back(count);
  }
  return CategoryDistribution(std::move(levels), std::move(counts));
}

// ---------------------------------------------------------------------------

bool are_replicas(const CompanyState& a, const CompanyState& b) {
  if (a.budget() != b.budget() || a.classes().size() != b.classes().size()) return false;
  for (const auto& ca : a.classes()) {
    const auto* cb = b.find_class(ca.class_id);
    if (cb == nullptr || cb->count != ca.count) return false;
  }
  return true;
}

MarketEnsemble::MarketEnsemble(std::vector<CompanyState> companies, std::int64_t round, std::uint64_t seed)
    : companies_(std::move(companies)), round_(round), seed_(seed) {
  if (round_ < 0) throw Error(ErrorCode::InvalidArgument, "round counter must be non-negative");
  std::set<CompanyId> ids;
  for (const auto& c : companies_) {
    if (!ids.insert(c.id()).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate company id " + std::to_string(c.id()));
    }
    if (!are_replicas(companies_.front(), c)) {
      throw Error(ErrorCode::NotReplicas, "company " + std::to_string(c.id()) + " is not a replica of company " +
                                              std::to_string(companies_.front().id()));
    }
  }
}

void NegotiationPolicy::validate() const {
  if (alpha.num() > alpha.den()) throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
  if (epsilon < Money::from_cents(1)) throw Error(ErrorCode::InvalidArgument, "epsilon must be >= 1 minor unit");
}

void LognormalParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "lognormal needs finite mu and sigma > 0");
  }
}

std::string_view to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::MeanS: return "MEAN_S";
    case ConstraintKind::MeanLnS: return "MEAN_LN_S";
    case ConstraintKind::MeanLnSSq: return "MEAN_LN_S_SQ";
  }
  return "?";
}

ConstraintSet::ConstraintSet(std::vector<Constraint> constraints) : constraints_(std::move(constraints)) {
  std::set<ConstraintKind> seen;
  for (const auto& c : constraints_) {
    if (!seen.insert(c.kind).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate constraint " + std::string(to_string(c.kind)));
    }
    if (!std::isfinite(c.target)) throw Error(ErrorCode::InvalidArgument, "constraint target must be finite");
    if (c.kind == ConstraintKind::MeanS && !(c.target > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "MEAN_S target must be positive");
    }
  }
}

std::optional<double> ConstraintSet::target(ConstraintKind kind) const {
  for (const auto& c : constraints_) {
    if (c.kind == kind) return c.target;
  }
  return std::nullopt;
}

CompanyState delta_initial_state(std::int64_t n, Money budget, CompanyId id) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "delta state needs n >= 1");
  const auto [salary, rest] = divide(budget, n);
  if (rest != Money{}) {
    throw Error(ErrorCode::NonDivisibleBudget,
                budget.str() + " does not split evenly over " + std::to_string(n) + " employees");
  }
  return CompanyState(id, {SkillClass{0, n, salary, 0}}, budget);
}

}  // namespace fairmarket
