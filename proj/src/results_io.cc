// Copyright 2026 The modarena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modarena/results_io.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "modarena/checkpoint.h"

namespace modarena {
namespace {

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string Short(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Data rows of a CSV whose first line must equal `header`.
std::vector<std::vector<std::string>> Rows(const std::string& csv,
                                           const std::string& header,
                                           size_t columns) {
  std::stringstream ss(csv);
  std::string line;
  if (!std::getline(ss, line) || line != header) {
    throw std::invalid_argument("CSV header must be '" + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    auto cells = SplitLine(line);
    if (cells.size() != columns) {
      throw std::invalid_argument("malformed CSV row: " + line);
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

double ParseDouble(const std::string& s) {
  size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

constexpr const char* kTrajectoryHeader = "task,seed,t,reward,success_flag";
constexpr const char* kCurveHeader = "agent,task,steps,mean_return,success_rate,seed";

}  // namespace

std::string TrajectoriesToCsv(const std::vector<TrajectoryLog>& logs) {
  std::string out = std::string(kTrajectoryHeader) + "\n";
  for (const TrajectoryLog& log : logs) {
    const std::string prefix = log.task.ToString() + "," + std::to_string(log.seed) + ",";
    for (size_t t = 0; t < log.rewards.size(); ++t) {
      out += prefix + std::to_string(t) + "," + Num(log.rewards[t]) + "," +
             (log.success[t] ? "1" : "0") + "\n";
    }
  }
  return out;
}

std::vector<TrajectoryLog> TrajectoriesFromCsv(const std::string& csv) {
  std::vector<TrajectoryLog> logs;
  for (const auto& row : Rows(csv, kTrajectoryHeader, 5)) {
    const TaskDescriptor task = TaskDescriptor::FromString(row[0]);
    const std::uint64_t seed = std::stoull(row[1]);
    const size_t t = std::stoul(row[2]);
    if (t == 0) logs.push_back(TrajectoryLog{task, seed, {}, {}});
    if (logs.empty() || logs.back().task != task || logs.back().seed != seed ||
        logs.back().rewards.size() != t) {
      throw std::invalid_argument("trajectory CSV rows are out of order");
    }
    logs.back().rewards.push_back(ParseDouble(row[3]));
    logs.back().success.push_back(row[4] == "1");
  }
  return logs;
}

std::string CurvesToCsv(const std::vector<CurveRecord>& records) {
  std::string out = std::string(kCurveHeader) + "\n";
  for (const CurveRecord& r : records) {
    out += r.agent + "," + r.task + "," + std::to_string(r.steps) + "," +
           Num(r.mean_return) + "," + Num(r.success_rate) + "," +
           std::to_string(r.seed) + "\n";
  }
  return out;
}

std::vector<CurveRecord> CurvesFromCsv(const std::string& csv) {
  std::vector<CurveRecord> out;
  for (const auto& row : Rows(csv, kCurveHeader, 6)) {
    out.push_back({row[0], row[1], std::stoll(row[2]), ParseDouble(row[3]),
                   ParseDouble(row[4]), std::stoull(row[5])});
  }
  return out;
}

std::string CurvesToSvg(const std::vector<CurveRecord>& records) {
  // agent -> steps -> (sum return, sum success, count)
  std::map<std::string, std::map<std::int64_t, std::array<double, 3>>> series;
  double max_steps = 1.0;
  double max_return = 1.0;
  for (const CurveRecord& r : records) {
    auto& acc = series[r.agent][r.steps];
    acc[0] += r.mean_return;
    acc[1] += r.success_rate;
    acc[2] += 1.0;
    max_steps = std::max(max_steps, static_cast<double>(r.steps));
  }
  for (const auto& [agent, points] : series) {
    for (const auto& [steps, acc] : points) {
      max_return = std::max(max_return, acc[0] / acc[2]);
    }
  }

  constexpr double kW = 420, kH = 300, kLeft = 60, kTop = 30, kPlotW = 330,
                   kPlotH = 220;
  static constexpr std::array<const char*, 3> kColors = {"#1f77b4", "#d62728",
                                                         "#2ca02c"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * kW
      << "\" height=\"" << kH + 30 << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int panel = 0; panel < 2; ++panel) {
    const double x0 = panel * kW + kLeft;
    const double y_max = panel == 0 ? max_return : 1.0;
    const char* title = panel == 0 ? "Average return" : "Average success";
    svg << "<text x=\"" << x0 + kPlotW / 2 << "\" y=\"18\" text-anchor=\"middle\">"
        << title << "</text>\n";
    svg << "<rect x=\"" << x0 << "\" y=\"" << kTop << "\" width=\"" << kPlotW
        << "\" height=\"" << kPlotH << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double f = k / 4.0;
      const double ty = kTop + kPlotH * (1 - f);
      const double tx = x0 + kPlotW * f;
      svg << "<text x=\"" << x0 - 5 << "\" y=\"" << ty + 4
          << "\" text-anchor=\"end\">" << Short(y_max * f) << "</text>\n";
      svg << "<text x=\"" << tx << "\" y=\"" << kTop + kPlotH + 15
          << "\" text-anchor=\"middle\">" << Short(max_steps * f) << "</text>\n";
    }
    svg << "<text x=\"" << x0 + kPlotW / 2 << "\" y=\"" << kTop + kPlotH + 32
        << "\" text-anchor=\"middle\">steps per task</text>\n";
    int color = 0;
    for (const auto& [agent, points] : series) {
      const char* c = kColors[color++ % kColors.size()];
      svg << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [steps, acc] : points) {
        const double v = acc[panel] / acc[2];
        svg << x0 + kPlotW * static_cast<double>(steps) / max_steps << ","
            << kTop + kPlotH * (1 - v / y_max) << " ";
      }
      svg << "\"/>\n";
      if (panel == 1) {
        const double ly = kTop + 15 + 14 * (color - 1);
        svg << "<text x=\"" << x0 + kPlotW - 5 << "\" y=\"" << ly
            << "\" text-anchor=\"end\" fill=\"" << c << "\">" << agent << "</text>\n";
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string ReadTextFile(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingArtifact("missing file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace modarena
