/* Copyright 2026 The ccphase Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "ccphase/pulse_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ccphase {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text, const std::string& context) {
  auto first = text.data();
  auto last = text.data() + text.size();
  while (first < last && (*first == ' ' || *first == '\t')) ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
  if (first < last && *first == '+') ++first;
  double value = 0.0;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError(context + ": cannot parse '" + text + "' as a number");
  return value;
}

void write_schedule_csv(std::ostream& os, const PulseSchedule& schedule,
                        const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  for (std::size_t k = 0; k < schedule.qubits(); ++k) {
    for (std::size_t i = 0; i < schedule.segments(); ++i) {
      if (i) os << ',';
      os << format_double(schedule.detuning(k, i));
    }
    os << '\n';
  }
}

PulseSchedule read_schedule_csv(std::istream& is, std::vector<double> search_references,
                                double segment_duration, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      row.push_back(parse_double(cell, source + ":" + std::to_string(line_no) + ": column " +
                                           std::to_string(col)));
    }
    if (!line.empty() && line.back() == ',')
      throw ParseError(source + ":" + std::to_string(line_no) + ": trailing comma");
    if (rows.empty()) {
      columns = row.size();
    } else if (row.size() != columns) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": row " +
                       std::to_string(rows.size() + 1) + " has " + std::to_string(row.size()) +
                       " columns, expected " + std::to_string(columns));
    }
    rows.push_back(std::move(row));
  }
  if (rows.size() != search_references.size())
    throw ParseError(source + ": found " + std::to_string(rows.size()) + " qubit rows, expected " +
                     std::to_string(search_references.size()));
  Eigen::MatrixXd d(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(columns));
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t i = 0; i < columns; ++i)
      d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[k][i];
  return PulseSchedule(std::move(d), std::move(search_references), segment_duration);
}

PulseSchedule read_schedule_csv(const std::filesystem::path& path,
                                std::vector<double> search_references, double segment_duration) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open");
  return read_schedule_csv(in, std::move(search_references), segment_duration, path.string());
}

void write_schedule_csv(const std::filesystem::path& path, const PulseSchedule& schedule,
                        const std::vector<std::string>& comments) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError(path.string() + ": cannot open for writing");
  write_schedule_csv(out, schedule, comments);
}

nlohmann::json schedule_to_json(const PulseSchedule& schedule) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < schedule.qubits(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t i = 0; i < schedule.segments(); ++i) row.push_back(schedule.detuning(k, i));
    rows.push_back(std::move(row));
  }
  return {{"schema_version", 1},
          {"segment_duration_ns", schedule.segment_duration()},
          {"search_references_ghz", schedule.search_references()},
          {"detunings_ghz", std::move(rows)}};
}

PulseSchedule schedule_from_json(const nlohmann::json& j) {
  try {
    const auto refs = j.at("search_references_ghz").get<std::vector<double>>();
    const auto rows = j.at("detunings_ghz").get<std::vector<std::vector<double>>>();
    const double seg = j.value("segment_duration_ns", 1.0);
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Eigen::MatrixXd d(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k].size() != cols)
        throw ParseError("schedule row " + std::to_string(k + 1) + " has " +
                         std::to_string(rows[k].size()) + " entries, expected " +
                         std::to_string(cols));
      for (std::size_t i = 0; i < cols; ++i)
        d(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[k][i];
    }
    return PulseSchedule(std::move(d), refs, seg);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule json: ") + e.what());
  }
}

}  // namespace ccphase
