#include "fairmarket/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "fairmarket/error.hpp"

namespace fairmarket::io {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted) throw Error(ErrorCode::ParseError, "unterminated quote");
  fields.push_back(trim(current));
  return fields;
}

SalaryTable read_salary_csv(std::istream& in, const std::string& source) {
  SalaryTable table;
  table.source = source;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> salary_col;
  std::optional<std::size_t> category_col;
  std::size_t width = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv_line(line);
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": unterminated quote");
    }
    if (!salary_col) {
      width = fields.size();
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "salary") salary_col = i;
        if (fields[i] == "category") category_col = i;
      }
      if (!salary_col) throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": no 'salary' column in header");
      if (category_col) table.categories.emplace();
      continue;
    }
    if (fields.size() != width) {
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": expected " +
                                             std::to_string(width) + " columns, found " +
                                             std::to_string(fields.size()));
    }
    Money salary;
    try {
      salary = Money::parse(fields[*salary_col]);
    } catch (const Error&) {
      throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": column 'salary': '" +
                                             fields[*salary_col] + "' is not a decimal amount");
    }
    if (salary <= Money{}) {
      throw Error(ErrorCode::NonPositiveSalary,
                  source + ":" + std::to_string(line_no) + ": salary " + salary.str() + " must be > 0");
    }
    table.salaries.push_back(salary);
    if (category_col) {
      if (fields[*category_col].empty()) {
        throw Error(ErrorCode::ParseError, source + ":" + std::to_string(line_no) + ": column 'category' is empty");
      }
      table.categories->push_back(fields[*category_col]);
    }
  }
  if (!salary_col) throw Error(ErrorCode::ParseError, source + ": empty file, expected a header with 'salary'");
  if (table.salaries.empty()) throw Error(ErrorCode::EmptySample, source + ": no salary rows");
  return table;
}

SalaryTable read_salary_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_salary_csv(in, path.string());
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw Error(ErrorCode::InvalidArgument, "cannot format number");
  return std::string(buf, ptr);
}

}  // namespace fairmarket::io
