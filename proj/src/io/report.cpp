#include "fairmarket/io/report.hpp"

#include <map>
#include <ostream>

#include "fairmarket/error.hpp"
#include "fairmarket/fairness.hpp"
#include "fairmarket/statmech.hpp"

namespace fairmarket::io {

ReportDocument analyze_table(const SalaryTable& table, bool with_fit) {
  const SalarySample sample = table.sample();
  ReportDocument doc;
  doc.source = table.source;
  doc.rows = table.salaries.size();
  auto& f = doc.fairness;
  f.entropy_nats = share_entropy(sample);
  f.theil = theil_index(sample);
  f.gini = gini(sample);
  f.maximin = maximin(sample);
  f.n = static_cast<std::int64_t>(sample.size());
  f.mean_salary = mean_salary(sample);
  doc.normalized_entropy = normalized_share_entropy(sample);

  if (table.categories) {
    doc.categories_from_column = true;
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < table.categories->size(); ++i) groups[(*table.categories)[i]].push_back(i);
    std::vector<std::vector<std::size_t>> partition;
    for (auto& [label, members] : groups) {
      doc.category_labels.push_back(label);
      doc.category_counts.push_back(static_cast<std::int64_t>(members.size()));
      Money total;
      for (auto i : members) total += table.salaries[i];
      doc.category_totals.push_back(total);
      partition.push_back(std::move(members));
    }
    doc.decomposition = theil_decomposition(sample, partition);
  } else {
    std::map<Money, std::pair<std::int64_t, Money>> levels;
    for (Money s : table.salaries) {
      auto& [count, total] = levels[s];
      ++count;
      total += s;
    }
    for (const auto& [level, entry] : levels) {
      doc.category_labels.push_back(level.str());
      doc.category_counts.push_back(entry.first);
      doc.category_totals.push_back(entry.second);
    }
  }
  doc.category_entropy = shannon_entropy(doc.category_counts);
  f.log_multiplicity_nats = log_multiplicity(doc.category_counts).log_w_nats;
  if (with_fit) doc.fit = fit_table(table);
  return doc;
}

LognormalFit fit_table(const SalaryTable& table) {
  const SalarySample sample = table.sample();
  const auto params = fit_lognormal(sample);
  return {params, ks_statistic(sample, params)};
}

Json to_json(const ReportDocument& report) {
  const auto& f = report.fairness;
  Json doc;
  doc["input"] = {{"file", report.source}, {"rows", report.rows}};
  doc["n"] = f.n;
  doc["mean_salary"] = f.mean_salary.str();
  doc["entropy_nats"] = f.entropy_nats;
  doc["normalized_entropy"] = report.normalized_entropy;
  doc["theil"] = f.theil;
  doc["gini"] = f.gini;
  doc["maximin"] = f.maximin.str();

  Json categories;
  categories["source"] = report.categories_from_column ? "category_column" : "salary_levels";
  categories["entropy_nats"] = report.category_entropy;
  categories["log_multiplicity_nats"] = *f.log_multiplicity_nats;
  categories["log10_multiplicity"] = MultiplicityResult{*f.log_multiplicity_nats, {}}.log10_w();
  Json levels = Json::array();
  for (std::size_t i = 0; i < report.category_labels.size(); ++i) {
    levels.push_back({{"label", report.category_labels[i]},
                      {"count", report.category_counts[i]},
                      {"total", report.category_totals[i].str()}});
  }
  categories["levels"] = std::move(levels);
  doc["categories"] = std::move(categories);

  if (report.decomposition) {
    const auto& d = *report.decomposition;
    Json within = Json::array();
    for (std::size_t g = 0; g < d.within.size(); ++g) {
      within.push_back({{"label", report.category_labels[g]},
                        {"theil", d.within[g]},
                        {"income_weight", d.income_weights[g]},
                        {"population_weight", d.population_weights[g]}});
    }
    doc["theil_decomposition"] = {
        {"between", d.between}, {"within", std::move(within)}, {"reconstructed", d.reconstructed()}};
  }
  if (report.fit) {
    doc["lognormal_fit"] = {{"mu", report.fit->params.mu}, {"sigma", report.fit->params.sigma}, {"ks", report.fit->ks}};
  }
  return doc;
}

Json fit_to_json(const LognormalFit& fit, const SalaryTable& table) {
  Json doc;
  doc["input"] = {{"file", table.source}, {"rows", table.salaries.size()}};
  doc["mu"] = fit.params.mu;
  doc["sigma"] = fit.params.sigma;
  doc["ks"] = fit.ks;
  return doc;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "round,trades,mean_entropy_nats,mean_log_w_nats\n";
  for (const auto& r : trajectory.records) {
    out << r.round << ',' << r.trades << ',' << format_double(r.mean_share_entropy) << ','
        << format_double(r.mean_log_w) << '\n';
  }
}

Json final_state_json(const Trajectory& trajectory, const NegotiationPolicy& policy) {
  const auto& market = trajectory.final_state;
  Json doc;
  doc["status"] = std::string(to_string(trajectory.status));
  doc["rounds"] = market.round();
  doc["equilibrium_round"] = trajectory.equilibrium_round ? Json(*trajectory.equilibrium_round) : Json(nullptr);
  doc["total_trades"] = trajectory.total_trades;
  doc["seed"] = market.seed();
  doc["policy"] = {{"alpha", policy.alpha.str()}, {"epsilon", policy.epsilon.str()}};
  const auto& last = trajectory.records.back();
  doc["mean_entropy_nats"] = last.mean_share_entropy;
  doc["mean_category_entropy_nats"] = last.mean_category_entropy;
  doc["mean_log_w_nats"] = last.mean_log_w;
  Json companies = Json::array();
  for (const auto& c : market.companies()) {
    Json classes = Json::array();
    for (const auto& cls : c.classes()) {
      classes.push_back({{"class_id", cls.class_id},
                         {"value_rank", cls.value_rank},
                         {"count", cls.count},
                         {"salary", cls.salary.str()}});
    }
    Json macro = Json::array();
    const auto m = c.macrostate();
    for (std::size_t i = 0; i < m.categories(); ++i) {
      macro.push_back({{"salary", m.levels()[i].str()}, {"count", m.counts()[i]}});
    }
    companies.push_back({{"id", c.id()},
                         {"budget", c.budget().str()},
                         {"headcount", c.headcount()},
                         {"classes", std::move(classes)},
                         {"macrostate", std::move(macro)}});
  }
  doc["companies"] = std::move(companies);
  return doc;
}

MarketEnsemble ensemble_from_json(const Json& doc, std::uint64_t seed) {
  try {
    std::vector<CompanyState> companies;
    for (const auto& c : doc.at("companies")) {
      std::vector<SkillClass> classes;
      for (const auto& cls : c.at("classes")) {
        classes.push_back({cls.at("class_id").get<int>(), cls.at("count").get<std::int64_t>(),
                           Money::parse(cls.at("salary").get<std::string>()), cls.at("value_rank").get<int>()});
      }
      companies.emplace_back(c.at("id").get<CompanyId>(), std::move(classes),
                             Money::parse(c.at("budget").get<std::string>()));
    }
    return MarketEnsemble(std::move(companies), 0, seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("state file: ") + e.what());
  }
}

void write_solution_csv(std::ostream& out, const SalaryGrid& grid, const MaxentSolution& solution) {
  out << "level,probability\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid.levels()[i]) << ',' << format_double(solution.probabilities[i]) << '\n';
  }
}

Json solution_json(const SalaryGrid& grid, const ConstraintSet& constraints, const MaxentSolution& solution) {
  Json doc;
  doc["grid"] = {{"k", grid.size()},
                 {"min", grid.levels().front()},
                 {"max", grid.levels().back()},
                 {"spacing", grid.spacing()}};
  Json list = Json::array();
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    const auto& c = constraints.constraints()[j];
    list.push_back({{"kind", std::string(to_string(c.kind))}, {"target", c.target}, {"multiplier", solution.multipliers[j]}});
  }
  doc["constraints"] = std::move(list);
  doc["residual_norm"] = solution.residual_norm;
  doc["iterations"] = solution.iterations;
  doc["entropy_nats"] = solution.entropy();
  return doc;
}

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace fairmarket::io
