#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairmarket/types.hpp"

namespace fairmarket::io {

/// Rows of a salary CSV: a required `salary` column of positive dot-decimal
/// amounts and an optional `category` column. Other columns are ignored.
struct SalaryTable {
  std::string source;
  std::vector<Money> salaries;
  std::optional<std::vector<std::string>> categories;

  SalarySample sample() const { return SalarySample(salaries); }
};

/// Throws ParseError naming line and column, or NonPositiveSalary naming the
/// line of a zero or negative salary.
SalaryTable read_salary_csv(std::istream& in, const std::string& source);
SalaryTable read_salary_csv(const std::filesystem::path& path);

/// Splits one CSV record. Double-quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(const std::string& line);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace fairmarket::io
