// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fairmarket/fairness.hpp"
#include "fairmarket/io/commands.hpp"
#include "fairmarket/market.hpp"
#include "fairmarket/maxent.hpp"
#include "fairmarket/random.hpp"
#include "fairmarket/statmech.hpp"
#include "maxent_oracles.hpp"
#include "oracles.hpp"

using namespace fairmarket;
using namespace fairmarket::testing;

namespace {

namespace fs = std::filesystem;

const Money kBudget = Money::from_units(60'000'000);

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit > 0) out.require(seconds < time_limit, "runtime " + fmt("%.2f", seconds) + " s >= " + fmt("%.0f", time_limit) + " s");
  if (!out.pass) ++failures;
  std::printf("%s [%d] %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", id, title, seconds, out.detail.c_str());
  std::fflush(stdout);
}

CompanyState company(CompanyId id, std::int64_t low, std::int64_t med, std::int64_t high) {
  return CompanyState(id,
                      {{1, 500, Money::from_units(low), 0}, {2, 300, Money::from_units(med), 1}, {3, 200, Money::from_units(high), 2}},
                      kBudget);
}

MarketEnsemble random_ensemble(std::size_t companies, std::uint64_t seed) {
  const std::vector<ClassTemplate> classes{{1, 500, {}, 0}, {2, 300, {}, 1}, {3, 200, {}, 2}};
  return build_ensemble(classes, companies, kBudget, seed);
}

SalarySample random_sample(Rng& rng, std::size_t n) {
  std::vector<Money> s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.push_back(Money::from_cents(1 + static_cast<std::int64_t>(rng.below(50'000'000))));
  return SalarySample(std::move(s));
}

ConstraintSet log_targets(const SalaryGrid& grid, double mu, double sigma) {
  const auto q = grid_lognormal(grid.levels(), mu, sigma);
  const auto m = log_moments(grid.levels(), q);
  return ConstraintSet({{ConstraintKind::MeanLnS, m.mean_ln}, {ConstraintKind::MeanLnSSq, m.mean_ln_sq}});
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void two_company_example(Outcome& out) {
  const MarketEnsemble m({company(0, 60'000, 60'000, 60'000), company(1, 30'000, 30'000, 180'000)}, 0, 7);
  const auto t = run_to_equilibrium(m, {});
  out.require(t.status == RunStatus::Converged, "status CONVERGED");
  out.require(t.equilibrium_round && *t.equilibrium_round <= 2, "equilibrium within 2 rounds");
  for (const auto& c : t.final_state.companies()) {
    out.require(c.budget() == kBudget && c.sample().total() == kBudget, "budget exactly 60000000.00");
    out.require(c.headcount() == 1000, "headcount 1000");
    const auto macro = c.macrostate();
    out.require(macro.categories() == 2 && macro.levels()[0] == Money::from_units(45'000) && macro.counts()[0] == 800 &&
                    macro.levels()[1] == Money::from_units(120'000) && macro.counts()[1] == 200,
                "company " + std::to_string(c.id()) + " at {800 @ 45000, 200 @ 120000}");
  }
  if (t.equilibrium_round) out.note("equilibrium round " + std::to_string(*t.equilibrium_round));
  out.note("trades " + std::to_string(t.total_trades));
  out.note("budgets " + t.final_state.companies()[0].sample().total().str() + " / " +
           t.final_state.companies()[1].sample().total().str());
}

void multiplicity(Outcome& out) {
  const std::vector<std::int64_t> counts{800, 200};
  const double exact = log_multiplicity(counts).log10_w();
  const double stirling = log_multiplicity(counts, MultiplicityMethod::Stirling).log10_w();
  const long double oracle =
      (oracle_log_factorial(1000) - oracle_log_factorial(800) - oracle_log_factorial(200)) / std::log(10.0L);
  out.require(std::abs(exact - 215.82) <= 0.01, "log10 W = 215.82 +/- 0.01");
  out.require(std::abs(oracle - 215.82L) <= 0.01L, "oracle log10 W = 215.82 +/- 0.01");
  out.require(std::abs(exact - static_cast<double>(oracle)) <= 1e-9, "agreement with the summed-log oracle");
  out.require(std::abs(stirling - exact) / exact < 0.01, "Stirling within 1%");
  const std::vector<std::int64_t> delta{1000};
  out.require(log_multiplicity(delta).log_w_nats == 0.0 &&
                  log_multiplicity(delta, MultiplicityMethod::Stirling).log_w_nats == 0.0,
              "delta macrostate W = 1");
  out.require(std::abs(exact - 220.0) <= 5.0, "10^220 within 5 decades");
  out.note("log10 W exact " + fmt("%.4f", exact) + ", oracle " + fmt("%.4f", static_cast<double>(oracle)) +
           ", Stirling " + fmt("%.4f", stirling) + " (" + fmt("%.3f", 100 * (stirling - exact) / exact) + "%)");
}

void theil_identity(Outcome& out) {
  Rng rng(2024);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 1 + rng.below(10'000);
    const auto s = random_sample(rng, n);
    worst = std::max(worst, std::abs(theil_index(s) - (std::log(static_cast<double>(n)) - share_entropy(s))));
  }
  out.require(worst <= 1e-12, "identity to 1e-12");
  const auto two = repeated({{800, Money::from_units(30'000)}, {200, Money::from_units(180'000)}});
  const double t = theil_index(two);
  const double g = gini(two);
  out.require(std::abs(t - 0.381908) <= 1e-6, "T = 0.381908 +/- 1e-6");
  out.require(std::abs(g - 0.4) <= 1e-9, "Gini = 0.400000 +/- 1e-9");
  out.require(std::abs(t - oracle_theil(two)) <= 1e-12, "T against the direct formula");
  out.require(std::abs(g - oracle_gini_pairwise(two)) <= 1e-12, "Gini against the pairwise formula");
  out.note("max identity error " + fmt("%.2e", worst) + ", T " + fmt("%.7f", t) + ", Gini " + fmt("%.10f", g));
}

void maxent_solver(Outcome& out) {
  const auto g = SalaryGrid::around_mean(60'000);
  out.require(g.size() == 512, "k = 512");
  double solver_seconds = 0;
  auto solve = [&](const ConstraintSet& constraints) {
    const auto start = std::chrono::steady_clock::now();
    auto sol = solve_maxent(g, constraints);
    solver_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return sol;
  };

  // (a) mean only
  double worst_residual = 0, worst_lambda = 0, worst_p = 0;
  for (double s_ave : {60'000.0, 250'000.0, 1'000'000.0}) {
    const auto sol = solve(ConstraintSet({{ConstraintKind::MeanS, s_ave}}));
    worst_residual = std::max(worst_residual, sol.residual_norm);
    const double scan = exponential_lambda_scan(g.levels(), s_ave);
    worst_lambda = std::max(worst_lambda, std::abs(sol.multipliers.at(0) - scan) / std::abs(scan));
    std::vector<long double> w;
    long double z = 0;
    for (double s : g.levels()) {
      w.push_back(std::exp(-static_cast<long double>(scan) * (s - g.levels().front())));
      z += w.back();
    }
    const double pmax = *std::max_element(sol.probabilities.begin(), sol.probabilities.end());
    for (std::size_t i = 0; i < w.size(); ++i)
      worst_p = std::max(worst_p, std::abs(sol.probabilities[i] - static_cast<double>(w[i] / z)) / pmax);
  }
  out.require(worst_residual <= 1e-10, "(a) residual <= 1e-10");
  out.require(worst_lambda <= 1e-6, "(a) lambda matches grid search to 1e-6");
  out.require(worst_p <= 1e-6, "(a) distribution matches the exponential to 1e-6");
  out.note("(a) residual " + fmt("%.1e", worst_residual) + ", lambda rel " + fmt("%.1e", worst_lambda));

  // (b) log moments
  double worst_rel = 0;
  for (double sigma : {0.25, 0.5, 0.75, 1.0}) {
    const double mu = std::log(60'000.0) - sigma * sigma / 2;
    const auto sol = solve(log_targets(g, mu, sigma));
    std::vector<double> q;
    double z = 0;
    for (double s : g.levels()) {
      q.push_back(lognormal_pdf(s, {mu, sigma}));
      z += q.back();
    }
    for (std::size_t i = 1; i + 1 < q.size(); ++i)
      worst_rel = std::max(worst_rel, std::abs(sol.probabilities[i] - q[i] / z) / (q[i] / z));
  }
  out.require(worst_rel <= 1e-6, "(b) max relative error 1e-6");
  out.note("(b) max rel " + fmt("%.1e", worst_rel));

  // (c) perturbations
  Rng rng(314);
  int beaten = 0, drawn = 0;
  const std::vector<std::pair<ConstraintSet, std::vector<ConstraintKind>>> cases{
      {ConstraintSet({{ConstraintKind::MeanS, 60'000}}), {ConstraintKind::MeanS}},
      {log_targets(g, std::log(60'000.0) - 0.125, 0.5), {ConstraintKind::MeanLnS, ConstraintKind::MeanLnSSq}},
  };
  for (const auto& [constraints, kinds] : cases) {
    const auto sol = solve(constraints);
    const FeasiblePerturber perturb(g.levels(), sol.probabilities, kinds);
    for (int k = 0; k < 100; ++k, ++drawn)
      if (discrete_entropy(perturb.draw(rng)) < sol.entropy()) ++beaten;
  }
  out.require(beaten == drawn, "(c) H exceeds every feasible perturbation");
  out.note("(c) " + std::to_string(beaten) + "/" + std::to_string(drawn));
  out.require(solver_seconds < 5.0, "solver runtime < 5 s");
  out.note("solver time " + fmt("%.3f", solver_seconds) + " s over 9 solves, the rest is the oracles");
}

void lognormal_closed_forms(Outcome& out) {
  double worst = 0;
  for (double mu : {0.0, 1.0}) {
    for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
      const LognormalParams p{mu, sigma};
      const double mean = lognormal_integral(p, [&](double s) { return s * lognormal_pdf(s, p); });
      const double var = lognormal_integral(p, [&](double s) { return (s - mean) * (s - mean) * lognormal_pdf(s, p); });
      const double h = lognormal_integral(p, [&](double s) {
        const double f = lognormal_pdf(s, p);
        return f > 0 ? -f * std::log(f) : 0.0;
      });
      const double closed_mean = std::exp(mu + sigma * sigma / 2);
      const double closed_var = (std::exp(sigma * sigma) - 1) * std::exp(2 * mu + sigma * sigma);
      const double closed_h = mu + 0.5 * std::log(2 * std::numbers::pi * std::numbers::e * sigma * sigma);
      const auto m = lognormal_moments(p);
      const double errs[] = {
          std::abs(mean - closed_mean) / closed_mean,           std::abs(var - closed_var) / closed_var,
          std::abs(h - closed_h) / std::max(1.0, std::abs(closed_h)), std::abs(m.mean - closed_mean) / closed_mean,
          std::abs(m.variance - closed_var) / closed_var,       std::abs(lognormal_entropy(p) - closed_h) / std::max(1.0, std::abs(closed_h)),
      };
      for (double e : errs) worst = std::max(worst, e);
    }
  }
  out.require(worst <= 1e-6, "all 8 pairs to 1e-6");
  out.note("max rel error " + fmt("%.1e", worst));
}

void ensemble_convergence(Outcome& out) {
  const NegotiationPolicy policy;
  StopRule stop;
  stop.keep_snapshots = false;
  int converged = 0;
  bool gaps_ok = true;
  double lowest_share = INFINITY, lowest_category = INFINITY;
  std::int64_t slowest = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = run_to_equilibrium(random_ensemble(64, seed), policy, stop);
    if (t.status != RunStatus::Converged) continue;
    ++converged;
    slowest = std::max(slowest, t.final_state.round());
    for (const auto& x : t.final_state.companies())
      for (const auto& y : t.final_state.companies())
        for (const auto& c : x.classes())
          if (gap(c.salary, y.find_class(c.class_id)->salary) > policy.epsilon) gaps_ok = false;
    lowest_share = std::min(lowest_share, t.records.back().mean_share_entropy);
    lowest_category = std::min(lowest_category, t.records.back().mean_category_entropy);
  }
  out.require(converged >= 19, ">= 95% of 20 seeds converge");
  out.require(gaps_ok, "no class gap above epsilon");

  // A delta-state start is a single salary category, whose entropy is zero.
  const CategoryDistribution delta({Money::from_units(60'000)}, {1000});
  const double delta_entropy = shannon_entropy(delta);
  out.require(lowest_share >= delta_entropy && lowest_category >= delta_entropy,
              "mean entropy at convergence >= delta-state entropy");

  // The trend from an actual delta-state company: company 0 starts flat.
  bool trend_ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto random = random_ensemble(64, seed);
    std::vector<CompanyState> companies(random.companies().begin(), random.companies().end());
    std::vector<SkillClass> flat(companies[0].classes().begin(), companies[0].classes().end());
    for (auto& c : flat) c.salary = Money::from_units(60'000);
    companies[0] = CompanyState(0, flat, kBudget);
    const auto t = run_to_equilibrium(MarketEnsemble(companies, 0, seed), policy, stop);
    if (t.records.back().mean_category_entropy < t.records.front().mean_category_entropy) trend_ok = false;
  }
  out.require(trend_ok, "mean entropy does not fall from a start containing a delta-state company");

  out.note(std::to_string(converged) + "/20 converged, slowest " + std::to_string(slowest) + " rounds");
  out.note("lowest mean share entropy " + fmt("%.6f", lowest_share) + " (ln 1000 = " + fmt("%.6f", std::log(1000.0)) +
           "), lowest mean category entropy " + fmt("%.6f", lowest_category) + ", delta entropy " +
           fmt("%.1f", delta_entropy));
}

void axioms(Outcome& out) {
  Rng rng(17);
  bool homogeneous = true, continuous = true, decomposes = true;
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = random_sample(rng, 1 + rng.below(500));
    for (std::int64_t c : {2, 3, 7, 100, 12345})
      if (share_entropy(s.scaled(c)) != share_entropy(s)) homogeneous = false;

    // one-cent finite difference against |dH/dS_k| <= 2(-ln p_min + 1)/total
    std::vector<Money> v(s.salaries().begin(), s.salaries().end());
    v[rng.below(v.size())] += Money::from_cents(1);
    const double total = static_cast<double>(s.total().cents());
    const double bound = 2.0 * (-std::log(static_cast<double>(maximin(s).cents()) / total) + 1.0) / total;
    if (std::abs(share_entropy(SalarySample(v)) - share_entropy(s)) > bound) continuous = false;

    const auto k = 1 + rng.below(std::min<std::uint64_t>(s.size(), 12));
    std::vector<std::vector<std::size_t>> groups(k);
    for (std::size_t i = 0; i < s.size(); ++i) groups[i < k ? i : rng.below(k)].push_back(i);
    const auto d = theil_decomposition(s, groups);
    if (std::abs(d.reconstructed() - d.total) > 1e-12) decomposes = false;
  }
  out.require(homogeneous, "homogeneity (exact)");
  out.require(continuous, "continuity");
  out.require(decomposes, "Theil decomposition to 1e-12");

  bool monotone = true;
  double previous = -1.0;
  const std::int64_t total = 100'000'000;
  for (int a = 1; a <= 50; ++a) {
    const auto low = total * a / 100;
    const double h = share_entropy(SalarySample({Money::from_cents(low), Money::from_cents(total - low)}));
    if (!(h > previous)) monotone = false;
    previous = h;
  }
  out.require(monotone, "n = 2 strict monotonicity");

  bool saturated = true;
  for (std::int64_t n : {1, 2, 3, 10, 100, 1000, 10000}) {
    const auto s = repeated({{n, Money::from_units(55'555)}});
    if (std::abs(normalized_share_entropy(s) - 1.0) > 1e-14) saturated = false;
  }
  out.require(saturated, "saturation");
  out.note("homogeneity, continuity, n = 2 monotonicity over 50 splits, saturation for n up to 10000, decomposition on 200 partitions");
}

void determinism(Outcome& out) {
  const fs::path dir = fs::temp_directory_path() / ("fairmarket_acceptance_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  fs::create_directories(dir);
  std::ostringstream sink;
  for (const char* config : {"ab_example.toml", "replica64.toml"}) {
    std::string outputs[2][2];
    for (int run = 0; run < 2; ++run) {
      cli::SimulateOptions opts;
      opts.config = fs::path(FAIRMARKET_SOURCE_DIR) / "configs" / config;
      opts.trajectory = (dir / ("t" + std::to_string(run) + ".csv")).string();
      opts.final_state = (dir / ("f" + std::to_string(run) + ".json")).string();
      out.require(cli::simulate(opts, sink) == cli::kExitOk, std::string(config) + " exits 0");
      outputs[run][0] = slurp(opts.trajectory);
      outputs[run][1] = slurp(opts.final_state);
    }
    out.require(!outputs[0][0].empty() && outputs[0][0] == outputs[1][0], std::string(config) + " trajectory identical");
    out.require(!outputs[0][1].empty() && outputs[0][1] == outputs[1][1], std::string(config) + " final state identical");
    out.note(std::string(config) + " " + std::to_string(outputs[0][0].size()) + "+" +
             std::to_string(outputs[0][1].size()) + " bytes");
  }
  fs::remove_all(dir);
}

}  // namespace

int main() {
  criterion(1, "two-company example", 1.0, two_company_example);
  criterion(2, "multiplicity", 0, multiplicity);
  criterion(3, "Theil identity", 0, theil_identity);
  criterion(4, "maxent solver", 0, maxent_solver);
  criterion(5, "lognormal closed forms", 0, lognormal_closed_forms);
  criterion(6, "ensemble convergence", 30.0, ensemble_convergence);
  criterion(7, "axiom suite", 0, axioms);
  criterion(8, "determinism", 0, determinism);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
