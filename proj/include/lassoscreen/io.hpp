#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lassoscreen/csv.hpp"
#include "lassoscreen/path.hpp"
#include "lassoscreen/screening.hpp"
#include "lassoscreen/types.hpp"

namespace lassoscreen {

struct DesignData {
  Matrix X;
  Vector y;
  std::vector<std::string> names;
};

/// Input schema: header row, first column named y, remaining columns are
/// predictors, all cells finite numbers.
inline DesignData read_design_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.empty() || table.header[0] != "y") {
    throw CsvError(path + ": first column must be named 'y'");
  }
  if (table.header.size() < 2) throw CsvError(path + ": no predictor columns after y");
  if (table.rows.empty()) throw CsvError(path + ": no data rows");

  const Index n = static_cast<Index>(table.rows.size());
  const Index p = static_cast<Index>(table.header.size()) - 1;
  DesignData data;
  data.X.resize(n, p);
  data.y.resize(n);
  data.names.assign(table.header.begin() + 1, table.header.end());
  for (Index i = 0; i < n; ++i) {
    const std::vector<double>& row = table.rows[static_cast<size_t>(i)];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        throw CsvError(path + ": row " + std::to_string(i + 2) + ", column " +
                           std::to_string(c + 1) + ": value is not finite",
                       static_cast<std::size_t>(i + 2), c + 1);
      }
    }
    data.y[i] = row[0];
    for (Index j = 0; j < p; ++j) data.X(i, j) = row[static_cast<size_t>(j) + 1];
  }
  return data;
}

inline void write_design_csv(const std::string& path, const Matrix& X, const Vector& y,
                             const std::vector<std::string>& names = {}) {
  std::ofstream out(path);
  if (!out) throw CsvError(path + ": cannot open file for writing");
  out << "y";
  for (Index j = 0; j < X.cols(); ++j) {
    if (names.empty()) {
      out << ",x" << j + 1;
    } else {
      out << ',' << names[static_cast<size_t>(j)];
    }
  }
  out << '\n';
  for (Index i = 0; i < X.rows(); ++i) {
    out << format_double(y[i]);
    for (Index j = 0; j < X.cols(); ++j) out << ',' << format_double(X(i, j));
    out << '\n';
  }
}

inline Index count_at_step_by_source(const ScreenMask& mask, Index k, ScreenSource src) {
  Index count = 0;
  for (Index j = 0; j < mask.p; ++j) {
    const std::size_t i = mask.pos(j, k);
    if (mask.discard[i] && mask.source[i] == src) ++count;
  }
  return count;
}

/// Per-step summary: step, lambda, dev_ratio, n_active, passes, wall_time,
/// n_screened_lookahead, n_screened_dynamic.
inline void write_path_csv(const std::string& path, const PathResult& result) {
  std::ofstream out(path);
  if (!out) throw CsvError(path + ": cannot open file for writing");
  out << "step,lambda,dev_ratio,n_active,passes,wall_time,"
         "n_screened_lookahead,n_screened_dynamic\n";
  for (Index k = 0; k < result.steps_done(); ++k) {
    Index n_active = 0;
    for (Index j = 0; j < result.betas.rows(); ++j) {
      n_active += result.betas(j, k) != 0.0 ? 1 : 0;
    }
    out << k << ',' << format_double(result.lambdas_done[k]) << ','
        << format_double(result.dev_ratios[k]) << ',' << n_active << ','
        << result.passes[static_cast<size_t>(k)] << ','
        << format_double(result.wall_times[static_cast<size_t>(k)]) << ','
        << count_at_step_by_source(result.mask, k, ScreenSource::look_ahead) << ','
        << count_at_step_by_source(result.mask, k, ScreenSource::gap_safe_dynamic)
        << '\n';
  }
}

inline nlohmann::json path_result_json(const PathResult& result) {
  nlohmann::json doc;
  doc["steps_done"] = result.steps_done();
  doc["stop_reason"] = to_string(result.stop_reason);
  doc["lambdas"] = std::vector<double>(result.lambdas_done.begin(), result.lambdas_done.end());
  doc["dev_ratios"] = std::vector<double>(result.dev_ratios.begin(), result.dev_ratios.end());
  doc["gaps"] = std::vector<double>(result.gaps.begin(), result.gaps.end());
  doc["infeasibilities"] = std::vector<double>(result.infeas.begin(), result.infeas.end());
  doc["passes"] = result.passes;
  doc["coord_updates"] = result.coord_updates;
  doc["wall_times"] = result.wall_times;

  nlohmann::json betas = nlohmann::json::array();
  for (Index k = 0; k < result.steps_done(); ++k) {
    betas.push_back(std::vector<double>(result.betas.col(k).begin(),
                                        result.betas.col(k).end()));
  }
  doc["betas"] = std::move(betas);

  nlohmann::json screened = nlohmann::json::array();
  for (Index j = 0; j < result.mask.p; ++j) {
    for (Index k = 0; k < result.mask.steps; ++k) {
      const std::size_t i = result.mask.pos(j, k);
      if (!result.mask.discard[i]) continue;
      screened.push_back({{"predictor", j},
                          {"step", k},
                          {"source", to_string(result.mask.source[i])}});
    }
  }
  doc["screened"] = std::move(screened);
  return doc;
}

inline void write_path_json(const std::string& path, const PathResult& result) {
  std::ofstream out(path);
  if (!out) throw CsvError(path + ": cannot open file for writing");
  out << path_result_json(result).dump(2) << '\n';
}

struct ScreenRow {
  Index step = 0;
  double lambda = 0.0;
  Index predictor = 0;
  bool discarded = false;
  ScreenSource source = ScreenSource::none;
};

inline ScreenSource parse_screen_source(const std::string& name) {
  if (name == "none") return ScreenSource::none;
  if (name == "gap_safe_dynamic") return ScreenSource::gap_safe_dynamic;
  if (name == "look_ahead") return ScreenSource::look_ahead;
  throw std::invalid_argument("unknown screen source '" + name + "'");
}

/// One row per (selected predictor, step): step, lambda, predictor,
/// discarded (0/1), source. The optional labels relabel each selected
/// predictor, e.g. back to pre-standardization column indices.
inline void write_screenmask_csv(const std::string& path, const ScreenMask& mask,
                                 const Vector& lambdas,
                                 const std::vector<Index>& predictors,
                                 const std::vector<Index>& labels = {}) {
  std::ofstream out(path);
  if (!out) throw CsvError(path + ": cannot open file for writing");
  out << "step,lambda,predictor,discarded,source\n";
  for (std::size_t idx = 0; idx < predictors.size(); ++idx) {
    const Index j = predictors[idx];
    const Index label = labels.empty() ? j : labels[idx];
    for (Index k = 0; k < mask.steps; ++k) {
      const std::size_t i = mask.pos(j, k);
      out << k << ',' << format_double(lambdas[k]) << ',' << label << ','
          << (mask.discard[i] ? 1 : 0) << ',' << to_string(mask.source[i]) << '\n';
    }
  }
}

inline std::vector<ScreenRow> read_screenmask_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  std::vector<ScreenRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 5) {
      throw CsvError(path + ": row " + std::to_string(lineno) + " has " +
                         std::to_string(cells.size()) + " cells, expected 5",
                     lineno, 0);
    }
    ScreenRow row;
    row.step = static_cast<Index>(parse_double(cells[0], lineno, 1, path));
    row.lambda = parse_double(cells[1], lineno, 2, path);
    row.predictor = static_cast<Index>(parse_double(cells[2], lineno, 3, path));
    row.discarded = parse_double(cells[3], lineno, 4, path) != 0.0;
    row.source = parse_screen_source(cells[4]);
    rows.push_back(row);
  }
  return rows;
}

struct BenchRow {
  double snr = 0.0;
  std::string strategy;
  Index repetition = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  Index total_passes = 0;
  Index total_coord_updates = 0;
  Index steps_done = 0;
};

inline void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw CsvError(path + ": cannot open file for writing");
  out << "snr,strategy,repetition,seed,wall_time_s,total_passes,"
         "total_coord_updates,steps_done\n";
  for (const BenchRow& row : rows) {
    out << format_double(row.snr) << ',' << row.strategy << ',' << row.repetition
        << ',' << row.seed << ',' << format_double(row.wall_time_s) << ','
        << row.total_passes << ',' << row.total_coord_updates << ','
        << row.steps_done << '\n';
  }
}

inline std::vector<BenchRow> read_bench_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  std::vector<BenchRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 8) {
      throw CsvError(path + ": row " + std::to_string(lineno) + " has " +
                         std::to_string(cells.size()) + " cells, expected 8",
                     lineno, 0);
    }
    BenchRow row;
    row.snr = parse_double(cells[0], lineno, 1, path);
    row.strategy = cells[1];
    row.repetition = static_cast<Index>(parse_double(cells[2], lineno, 3, path));
    // seeds use the full 64 bits, so a double round-trip would corrupt them
    const auto res = std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(),
                                     row.seed);
    if (res.ec != std::errc() || res.ptr != cells[3].data() + cells[3].size()) {
      throw CsvError(path + ": row " + std::to_string(lineno) +
                         ": cannot parse seed '" + cells[3] + "'",
                     lineno, 4);
    }
    row.wall_time_s = parse_double(cells[4], lineno, 5, path);
    row.total_passes = static_cast<Index>(parse_double(cells[5], lineno, 6, path));
    row.total_coord_updates = static_cast<Index>(parse_double(cells[6], lineno, 7, path));
    row.steps_done = static_cast<Index>(parse_double(cells[7], lineno, 8, path));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lassoscreen
