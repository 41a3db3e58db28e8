#include "fairmarket/io/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fairmarket/error.hpp"

namespace fairmarket::io {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void config_error(const std::string& source, int line, const std::string& message) {
  throw Error(ErrorCode::ConfigError, source + ":" + std::to_string(line) + ": " + message);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& raw, bool& quoted, const std::string& source, int line) {
  quoted = false;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    quoted = true;
    return raw.substr(1, raw.size() - 2);
  }
  if (raw.find('"') != std::string::npos) config_error(source, line, "malformed string '" + raw + "'");
  if (raw.empty()) config_error(source, line, "missing value");
  return raw;
}

ConfigValue parse_value(const std::string& raw, const std::string& source, int line) {
  ConfigValue v;
  v.line = line;
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') config_error(source, line, "unterminated array");
    v.is_array = true;
    const std::string body = trim(raw.substr(1, raw.size() - 2));
    if (body.empty()) return v;
    std::string item;
    bool quoted = false;
    auto flush = [&] {
      bool q = false;
      v.items.push_back(unquote(trim(item), q, source, line));
      item.clear();
    };
    for (char c : body) {
      if (c == '"') quoted = !quoted;
      if (c == ',' && !quoted) {
        flush();
      } else {
        item += c;
      }
    }
    flush();
    return v;
  }
  v.text = unquote(raw, v.quoted, source, line);
  return v;
}

struct FieldReader {
  const ConfigTable& table;
  std::string prefix;
  std::string source;

  const ConfigValue* find(const std::string& key) const {
    auto it = table.find(key);
    return it == table.end() ? nullptr : &it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const ConfigValue* v = find(key);
    throw Error(ErrorCode::ConfigError, source + (v ? ":" + std::to_string(v->line) : std::string{}) + ": " +
                                            prefix + key + ": " + message);
  }

  const ConfigValue& require(const std::string& key) const {
    if (const auto* v = find(key)) return *v;
    fail(key, "is required");
  }

  std::int64_t integer(const std::string& key) const {
    const auto& v = require(key);
    std::int64_t out = 0;
    const auto& t = v.text;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (v.is_array || t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) fail(key, "expected an integer");
    return out;
  }

  std::optional<std::int64_t> optional_integer(const std::string& key) const {
    if (!find(key)) return std::nullopt;
    return integer(key);
  }

  Money money(const std::string& key) const {
    const auto& v = require(key);
    if (v.is_array) fail(key, "expected a money amount");
    try {
      return Money::parse(v.text);
    } catch (const Error&) {
      fail(key, "'" + v.text + "' is not a money amount");
    }
  }
};

}  // namespace

ConfigDocument parse_config_text(const std::string& text, const std::string& source) {
  ConfigDocument doc;
  ConfigTable* current = &doc.root;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.rfind("[[", 0) == 0) {
      if (s.size() < 5 || s.substr(s.size() - 2) != "]]") config_error(source, line, "malformed table header");
      const std::string name = trim(s.substr(2, s.size() - 4));
      if (name.empty()) config_error(source, line, "empty table name");
      auto& list = doc.arrays[name];
      list.emplace_back();
      current = &list.back();
      continue;
    }
    if (s.front() == '[') config_error(source, line, "plain [table] sections are not supported; use [[name]]");
    const auto eq = s.find('=');
    if (eq == std::string::npos) config_error(source, line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) config_error(source, line, "missing key");
    if (current->count(key)) config_error(source, line, "duplicate key '" + key + "'");
    (*current)[key] = parse_value(trim(s.substr(eq + 1)), source, line);
  }
  return doc;
}

SimConfig parse_sim_config(const std::string& text, const std::string& source) {
  const auto doc = parse_config_text(text, source);
  static const std::set<std::string> known_root = {"companies", "n_per_company", "budget",      "alpha",
                                                   "epsilon",   "seed",          "max_rounds",  "quiet_rounds"};
  for (const auto& [key, value] : doc.root) {
    if (!known_root.count(key)) config_error(source, value.line, "unknown field '" + key + "'");
  }
  for (const auto& [name, tables] : doc.arrays) {
    if (name != "class" && name != "company") {
      throw Error(ErrorCode::ConfigError, source + ": unknown table [[" + name + "]]");
    }
  }

  const FieldReader root{doc.root, "", source};
  SimConfig cfg;
  cfg.companies = root.integer("companies");
  if (cfg.companies < 2) root.fail("companies", "must be >= 2");
  cfg.n_per_company = root.integer("n_per_company");
  if (cfg.n_per_company < 1) root.fail("n_per_company", "must be >= 1");
  cfg.budget = root.money("budget");
  if (cfg.budget <= Money{}) root.fail("budget", "must be positive");

  if (const auto* alpha = root.find("alpha")) {
    try {
      cfg.policy.alpha = Rational::parse(alpha->text);
    } catch (const Error&) {
      root.fail("alpha", "'" + alpha->text + "' is not a rational in [0, 1]");
    }
    if (cfg.policy.alpha.num() > cfg.policy.alpha.den()) root.fail("alpha", "must lie in [0, 1]");
  }
  if (root.find("epsilon")) {
    cfg.policy.epsilon = root.money("epsilon");
    if (cfg.policy.epsilon < Money::from_cents(1)) root.fail("epsilon", "must be at least 0.01");
  }
  if (auto seed = root.optional_integer("seed")) {
    if (*seed < 0) root.fail("seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*seed);
  }
  if (auto v = root.optional_integer("max_rounds")) {
    if (*v < 1) root.fail("max_rounds", "must be >= 1");
    cfg.stop.max_rounds = *v;
  }
  if (auto v = root.optional_integer("quiet_rounds")) {
    if (*v < 1) root.fail("quiet_rounds", "must be >= 1");
    cfg.stop.quiet_rounds = *v;
  }

  const auto classes = doc.arrays.find("class");
  if (classes == doc.arrays.end() || classes->second.empty()) {
    throw Error(ErrorCode::ConfigError, source + ": class: at least one [[class]] table is required");
  }
  std::int64_t headcount = 0;
  for (std::size_t i = 0; i < classes->second.size(); ++i) {
    const FieldReader r{classes->second[i], "class[" + std::to_string(i) + "].", source};
    for (const auto& [key, value] : classes->second[i]) {
      if (key != "count" && key != "salary" && key != "name") r.fail(key, "unknown field");
    }
    ClassSpec spec;
    spec.count = r.integer("count");
    if (spec.count < 1) r.fail("count", "must be >= 1");
    const auto& salary = r.require("salary");
    if (salary.text == "RANDOM") {
      spec.salary = std::nullopt;
    } else {
      spec.salary = r.money("salary");
      if (*spec.salary <= Money{}) r.fail("salary", "must be positive");
    }
    if (const auto* name = r.find("name")) spec.name = name->text;
    headcount += spec.count;
    cfg.classes.push_back(spec);
  }
  if (headcount != cfg.n_per_company) {
    throw Error(ErrorCode::ConfigError, source + ": class: counts sum to " + std::to_string(headcount) +
                                            " but n_per_company is " + std::to_string(cfg.n_per_company));
  }

  if (auto companies = doc.arrays.find("company"); companies != doc.arrays.end()) {
    if (static_cast<std::int64_t>(companies->second.size()) > cfg.companies) {
      throw Error(ErrorCode::ConfigError, source + ": company: more [[company]] tables than companies");
    }
    for (std::size_t i = 0; i < companies->second.size(); ++i) {
      const FieldReader r{companies->second[i], "company[" + std::to_string(i) + "].", source};
      for (const auto& [key, value] : companies->second[i]) {
        if (key != "salaries") r.fail(key, "unknown field");
      }
      const auto& v = r.require("salaries");
      if (!v.is_array || v.items.size() != cfg.classes.size()) {
        r.fail("salaries", "expected an array with one salary per class (" + std::to_string(cfg.classes.size()) + ")");
      }
      std::vector<Money> salaries;
      for (std::size_t j = 0; j < v.items.size(); ++j) {
        try {
          salaries.push_back(Money::parse(v.items[j]));
        } catch (const Error&) {
          r.fail("salaries", "element " + std::to_string(j) + " '" + v.items[j] + "' is not a money amount");
        }
        if (salaries.back() <= Money{}) r.fail("salaries", "element " + std::to_string(j) + " must be positive");
      }
      cfg.company_salaries.push_back(std::move(salaries));
    }
  }
  cfg.validate();
  return cfg;
}

void SimConfig::validate() const {
  if (companies < 2) throw Error(ErrorCode::ConfigError, "companies: must be >= 2");
  std::int64_t n = 0;
  for (const auto& c : classes) n += c.count;
  if (n != n_per_company) throw Error(ErrorCode::ConfigError, "class: counts do not sum to n_per_company");
  if (company_salaries.size() > static_cast<std::size_t>(companies)) {
    throw Error(ErrorCode::ConfigError, "company: more [[company]] tables than companies");
  }
  for (std::size_t k = 0; k < company_salaries.size(); ++k) {
    const auto& salaries = company_salaries[k];
    if (salaries.size() != classes.size()) {
      throw Error(ErrorCode::ConfigError, "company[" + std::to_string(k) + "].salaries: expected one salary per class");
    }
    Money payroll;
    for (std::size_t i = 0; i < classes.size(); ++i) payroll += salaries[i] * classes[i].count;
    if (payroll != budget) {
      throw Error(ErrorCode::ConfigError, "company[" + std::to_string(k) + "].salaries: payroll " + payroll.str() +
                                              " does not match budget " + budget.str());
    }
  }
  try {
    policy.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("alpha/epsilon: ") + e.what());
  }
}

MarketEnsemble SimConfig::initial_ensemble(std::uint64_t seed) const {
  std::vector<ClassTemplate> templates;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    templates.push_back({static_cast<int>(i + 1), classes[i].count, classes[i].salary, static_cast<int>(i)});
  }
  try {
    const auto base = build_ensemble(templates, static_cast<std::size_t>(companies), budget, seed);
    std::vector<CompanyState> out(base.companies().begin(), base.companies().end());
    for (std::size_t k = 0; k < company_salaries.size(); ++k) {
      std::vector<SkillClass> cls;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        cls.push_back({static_cast<int>(i + 1), classes[i].count, company_salaries[k][i], static_cast<int>(i)});
      }
      try {
        out[k] = CompanyState(static_cast<CompanyId>(k), std::move(cls), budget);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, "company[" + std::to_string(k) + "].salaries: " + e.what());
      }
    }
    return MarketEnsemble(std::move(out), 0, seed);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, std::string("class: ") + e.what());
  }
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_sim_config(text.str(), path.string());
}

std::uint64_t resolve_seed(const SimConfig& config, std::optional<std::uint64_t> cli_seed) {
  if (cli_seed) return *cli_seed;
  if (config.seed) return *config.seed;
  throw Error(ErrorCode::ConfigError, "seed: no seed in config and no --seed given");
}

}  // namespace fairmarket::io
