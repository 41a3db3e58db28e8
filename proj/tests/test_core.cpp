#include <doctest.h>

#include <cmath>

#include "fairmarket/error.hpp"
#include "fairmarket/money.hpp"
#include "fairmarket/random.hpp"
#include "fairmarket/types.hpp"
#include "oracles.hpp"

using namespace fairmarket;
using fairmarket::testing::code_of;

TEST_CASE("money parses and prints exact two-decimal amounts") {
  CHECK(Money::parse("45000").cents() == 4'500'000);
  CHECK(Money::parse("45000.5").cents() == 4'500'050);
  CHECK(Money::parse("0.07").cents() == 7);
  CHECK(Money::parse("-1.25").cents() == -125);
  CHECK(Money::from_units(60'000'000).str() == "60000000.00");
  CHECK(Money::from_cents(7).str() == "0.07");
  CHECK(Money::from_cents(-125).str() == "-1.25");

  for (const char* bad : {"", "abc", "1.234", "1,000", "1.", "--1", "1e5"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { Money::parse(bad); }) == ErrorCode::ParseError);
  }
}

TEST_CASE("money round-trips through its string form") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto m = Money::from_cents(static_cast<std::int64_t>(rng.below(1'000'000'000'000)) - 500'000'000'000);
    CHECK(Money::parse(m.str()) == m);
  }
}

TEST_CASE("divide returns quotient and remainder") {
  auto [q, r] = divide(Money::from_units(100), 3);
  CHECK(q.cents() == 3333);
  CHECK(r.cents() == 1);
  CHECK(q * 3 + r == Money::from_units(100));
  CHECK(code_of([] { divide(Money::from_units(1), 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("rational reduces and parses") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(Rational::parse("3/10") == Rational(3, 10));
  CHECK(Rational::parse("0.3") == Rational(3, 10));
  CHECK(Rational::parse("1") == Rational(1, 1));
  CHECK(code_of([] { Rational(1, 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { Rational::parse("x/2"); }) == ErrorCode::ParseError);
}

TEST_CASE("delta_initial_state") {
  SUBCASE("thousand employees at sixty thousand") {
    const auto c = delta_initial_state(1000, Money::from_units(60'000'000));
    REQUIRE(c.classes().size() == 1);
    CHECK(c.classes()[0].count == 1000);
    CHECK(c.classes()[0].salary == Money::from_units(60'000));
    CHECK(c.headcount() == 1000);
    CHECK(c.budget() == Money::from_units(60'000'000));
  }
  SUBCASE("single employee") {
    const auto c = delta_initial_state(1, Money::from_units(50'000));
    CHECK(c.classes()[0].count == 1);
    CHECK(c.classes()[0].salary == Money::from_units(50'000));
  }
  SUBCASE("budget that does not split evenly") {
    CHECK(code_of([] { delta_initial_state(3, Money::from_units(100)); }) == ErrorCode::NonDivisibleBudget);
  }
  SUBCASE("no employees") {
    CHECK(code_of([] { delta_initial_state(0, Money::from_units(100)); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("company state enforces the budget exactly") {
  const Money m = Money::from_units(300);
  CompanyState ok(1, {{1, 1, Money::from_units(100), 0}, {2, 1, Money::from_units(200), 1}}, m);
  CHECK(ok.headcount() == 2);

  CHECK(code_of([&] { CompanyState(1, {{1, 1, Money::from_units(100), 0}}, m); }) == ErrorCode::BudgetMismatch);
  CHECK(code_of([&] {
          CompanyState(1, {{1, 1, Money::from_cents(14999), 0}, {2, 1, Money::from_units(150), 1}}, m);
        }) == ErrorCode::BudgetMismatch);
  // duplicate rank
  CHECK(code_of([&] {
          CompanyState(1, {{1, 1, Money::from_units(100), 0}, {2, 1, Money::from_units(200), 0}}, m);
        }) == ErrorCode::InvalidArgument);
  // duplicate id
  CHECK(code_of([&] {
          CompanyState(1, {{1, 1, Money::from_units(100), 0}, {1, 1, Money::from_units(200), 1}}, m);
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { CompanyState(1, {{1, 0, Money::from_units(300), 0}}, m); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("company classes come back in value order") {
  CompanyState c(0, {{3, 200, Money::from_units(180'000), 2}, {1, 800, Money::from_units(30'000), 0}},
                 Money::from_units(60'000'000));
  CHECK(c.classes()[0].class_id == 1);
  CHECK(c.classes()[1].class_id == 3);
  const auto macro = c.macrostate();
  REQUIRE(macro.categories() == 2);
  CHECK(macro.counts()[0] == 800);
  CHECK(macro.levels()[1] == Money::from_units(180'000));
}

TEST_CASE("macrostate merges classes that share a salary") {
  CompanyState c(0,
                 {{1, 500, Money::from_units(45'000), 0},
                  {2, 300, Money::from_units(45'000), 1},
                  {3, 200, Money::from_units(120'000), 2}},
                 Money::from_units(60'000'000));
  const auto macro = c.macrostate();
  REQUIRE(macro.categories() == 2);
  CHECK(macro.counts()[0] == 800);
  CHECK(macro.counts()[1] == 200);
}

TEST_CASE("category distribution invariants") {
  CategoryDistribution d({Money::from_units(1), Money::from_units(2)}, {3, 1});
  CHECK(d.headcount() == 4);
  const auto p = d.shares();
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(code_of([] { CategoryDistribution({Money::from_units(2), Money::from_units(1)}, {1, 1}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { CategoryDistribution({Money{}}, {1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { CategoryDistribution({Money::from_units(1)}, {-1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { CategoryDistribution({Money::from_units(1)}, {0}).shares(); }) ==
        ErrorCode::EmptyDistribution);
}

TEST_CASE("salary sample") {
  CHECK(code_of([] { SalarySample({}); }) == ErrorCode::EmptySample);
  CHECK(code_of([] { SalarySample({Money::from_cents(-1)}); }) == ErrorCode::NonPositiveSalary);
  SalarySample s({Money::from_units(1), Money::from_units(2)});
  CHECK(s.total() == Money::from_units(3));
  CHECK(s.scaled(7).total() == Money::from_units(21));
}

TEST_CASE("ensemble requires replicas") {
  const Money m = Money::from_units(300);
  CompanyState a(0, {{1, 1, Money::from_units(100), 0}, {2, 1, Money::from_units(200), 1}}, m);
  CompanyState b(1, {{1, 1, Money::from_units(150), 0}, {2, 1, Money::from_units(150), 1}}, m);
  CompanyState c(2, {{1, 2, Money::from_units(100), 0}, {2, 1, Money::from_units(100), 1}}, m);
  CHECK(are_replicas(a, b));
  CHECK_FALSE(are_replicas(a, c));
  CHECK_NOTHROW(MarketEnsemble({a, b}, 0, 1));
  CHECK(code_of([&] { MarketEnsemble({a, c}, 0, 1); }) == ErrorCode::NotReplicas);
  CHECK(code_of([&] { MarketEnsemble({a, a}, 0, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("policy and parameter validation") {
  NegotiationPolicy p;
  CHECK_NOTHROW(p.validate());
  p.alpha = Rational(3, 2);
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::InvalidArgument);
  p = {};
  p.epsilon = Money{};
  CHECK(code_of([&] { p.validate(); }) == ErrorCode::InvalidArgument);

  LognormalParams lp{0.0, 0.0};
  CHECK(code_of([&] { lp.validate(); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("constraint set") {
  ConstraintSet cs({{ConstraintKind::MeanLnS, 1.0}, {ConstraintKind::MeanLnSSq, 2.0}});
  CHECK(cs.target(ConstraintKind::MeanLnS) == 1.0);
  CHECK_FALSE(cs.target(ConstraintKind::MeanS).has_value());
  CHECK(to_string(ConstraintKind::MeanLnSSq) == "MEAN_LN_S_SQ");
  CHECK(code_of([] { ConstraintSet({{ConstraintKind::MeanS, 1.0}, {ConstraintKind::MeanS, 2.0}}); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] { ConstraintSet({{ConstraintKind::MeanS, 0.0}}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ConstraintSet({{ConstraintKind::MeanLnS, std::nan("")}}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("derived seeds are stable and distinct") {
  static_assert(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
  CHECK(derive_seed(1, 2, 3) != derive_seed(2, 2, 3));
  Rng a(derive_seed(5, 0, 0)), b(derive_seed(5, 0, 0));
  for (int i = 0; i < 100; ++i) CHECK(a.below(17) == b.below(17));
}
