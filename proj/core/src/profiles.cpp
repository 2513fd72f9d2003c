#include "gebsim/profiles.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace gebsim {

const ProfileStep& ProfileSeries::at(std::size_t t) const {
  if (t >= steps.size()) {
    throw IndexOutOfRangeError("profile step " + std::to_string(t) +
                               " beyond series length " +
                               std::to_string(steps.size()));
  }
  return steps[t];
}

PvProfile ProfileSeries::pv_profile() const {
  PvProfile pv;
  pv.p_max_kw.reserve(steps.size());
  for (const auto& s : steps) pv.p_max_kw.push_back(s.pv_max_kw);
  return pv;
}

namespace {

constexpr std::array<const char*, 10> kColumns = {
    "step",      "t_amb_c",       "q_ihl_w",   "q_sol_w",   "t_sol_w_c",
    "t_sol_f_c", "t_sol_a_c",     "price_per_kwh", "pv_max_kw", "t_set_c"};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    // trim spaces and a trailing CR from DOS line endings
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? ""
                                            : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double parse_number(const std::string& s, std::size_t row, std::size_t col) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(row, col, "not a number: '" + s + "'");
  }
  if (pos != s.size()) {
    throw ParseError(row, col, "trailing characters in '" + s + "'");
  }
  if (!std::isfinite(v)) {
    throw ParseError(row, col, "value must be finite");
  }
  return v;
}

}  // namespace

ProfileSeries load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw SchemaMismatchError("cannot open profile file: " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaMismatchError("profile file is empty: " + path.string());
  }
  const auto header = split_csv(line);
  if (header.size() != kColumns.size()) {
    throw SchemaMismatchError("expected " + std::to_string(kColumns.size()) +
                              " columns, got " + std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (header[i] != kColumns[i]) {
      throw SchemaMismatchError("column " + std::to_string(i + 1) +
                                " must be '" + kColumns[i] + "', got '" +
                                header[i] + "'");
    }
  }

  ProfileSeries series;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    ++row;
    const auto fields = split_csv(line);
    if (fields.size() != kColumns.size()) {
      throw ParseError(row, fields.size(),
                       "expected " + std::to_string(kColumns.size()) +
                           " fields, got " + std::to_string(fields.size()));
    }
    std::array<double, 10> v{};
    for (std::size_t c = 0; c < fields.size(); ++c) {
      v[c] = parse_number(fields[c], row, c + 1);
    }
    if (v[0] != static_cast<double>(row - 1)) {
      throw ParseError(row, 1,
                       "step must run 0,1,2,... (got " + fields[0] + ")");
    }

    ProfileStep step;
    step.d.t_amb = v[1];
    step.d.q_ihl = v[2];
    step.d.q_sol = v[3];
    step.d.t_sol_w = v[4];
    step.d.t_sol_f = v[5];
    step.d.t_sol_a = v[6];
    step.price_per_kwh = v[7];
    step.pv_max_kw = v[8];
    step.t_set_c = v[9];

    if (step.d.q_ihl < 0.0) throw ParseError(row, 3, "q_ihl_w must be >= 0");
    if (step.d.q_sol < 0.0) throw ParseError(row, 4, "q_sol_w must be >= 0");
    if (step.price_per_kwh < 0.0) {
      throw ParseError(row, 8, "price_per_kwh must be >= 0");
    }
    if (step.pv_max_kw < 0.0) throw ParseError(row, 9, "pv_max_kw must be >= 0");

    series.steps.push_back(step);
  }
  if (series.steps.empty()) {
    throw SchemaMismatchError("profile file has a header but no rows: " +
                              path.string());
  }
  return series;
}

}  // namespace gebsim
