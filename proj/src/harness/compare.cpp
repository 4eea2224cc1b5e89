#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vip/harness.hpp"

namespace vip {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TraceSeries read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(path.string() + ": cannot open trace");
  TraceSeries t;
  t.label = path.string();

  std::string line;
  const std::string tag = "# problem_hash=";
  if (!std::getline(in, line) || line.rfind(tag, 0) != 0) {
    throw Error(path.string() + ": missing problem_hash line");
  }
  t.problem_hash = std::stoull(line.substr(tag.size()), nullptr, 16);
  if (!std::getline(in, line) || line != "n,alpha,beta,err_norm,step_norm,fix_residual,dist_ref") {
    throw Error(path.string() + ": unexpected trace header");
  }
  std::size_t row = 3;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 7) throw Error(path.string() + ":" + std::to_string(row) + ": expected 7 columns");
    t.n.push_back(std::stoull(cells[0]));
    t.dist_ref.push_back(cells[6].empty() ? std::numeric_limits<double>::quiet_NaN()
                                          : std::stod(cells[6]));
    ++row;
  }
  if (t.n.empty()) throw Error(path.string() + ": trace has no records");
  return t;
}

ComparisonTable compare_runs(const std::vector<TraceSeries>& traces) {
  if (traces.empty()) throw Error("compare_runs: no traces");
  for (const auto& t : traces) {
    if (t.problem_hash != traces.front().problem_hash) {
      throw Error("compare_runs: mismatched problem hashes (" + traces.front().label + " vs " +
                  t.label + ")");
    }
  }
  ComparisonTable table;
  std::size_t longest = 0;
  for (const auto& t : traces) {
    table.labels.push_back(t.label);
    table.final_n.push_back(t.n.back());
    table.final_values.push_back(t.dist_ref.back());
    longest = std::max(longest, t.n.back());
  }
  table.checkpoints.push_back(0);
  for (std::size_t decade = 1; decade <= longest; decade *= 10) {
    for (std::size_t m : {1, 2, 5}) {
      if (m * decade <= longest) table.checkpoints.push_back(m * decade);
    }
  }
  for (std::size_t c : table.checkpoints) {
    std::vector<double> row;
    for (const auto& t : traces) {
      // Record n sits at index n.
      row.push_back(c < t.n.size() && t.n[c] == c ? t.dist_ref[c]
                                                   : std::numeric_limits<double>::quiet_NaN());
    }
    table.values.push_back(std::move(row));
  }
  return table;
}

ComparisonTable compare_runs(const std::vector<std::filesystem::path>& paths) {
  std::vector<TraceSeries> traces;
  for (const auto& p : paths) traces.push_back(read_trace_csv(p));
  return compare_runs(traces);
}

void print_table(const ComparisonTable& t, std::ostream& out) {
  auto cell = [](double v) {
    char buf[32];
    if (std::isnan(v)) return std::string("-");
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return std::string(buf);
  };
  out << "n";
  for (const auto& l : t.labels) out << '\t' << l;
  out << '\n';
  for (std::size_t r = 0; r < t.checkpoints.size(); ++r) {
    out << t.checkpoints[r];
    for (double v : t.values[r]) out << '\t' << cell(v);
    out << '\n';
  }
  out << "final";
  for (std::size_t k = 0; k < t.labels.size(); ++k) {
    out << '\t' << cell(t.final_values[k]) << " @" << t.final_n[k];
  }
  out << '\n';
}

}  // namespace vip
