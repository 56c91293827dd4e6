#pragma once

#include "cubenorm/cost.hpp"
#include "cubenorm/cube.hpp"
#include "cubenorm/heuristics.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cubenorm {

/// A batch of runs. Each run draws a kernel cube (or takes `cube`), adds
/// noise if asked, scrambles it with a random normalization and scores every
/// heuristic against the scrambled cube.
struct ExperimentConfig {
  std::string name = "custom";
  std::vector<std::size_t> dims{12, 12, 12, 12};
  std::vector<std::size_t> kernel_block{2, 2, 2, 2};
  std::vector<std::size_t> block{2, 2, 2, 2};  ///< cost block shape
  Rational fill_prob{1, 2};
  std::optional<Rational> noise;
  /// Use this cube instead of generating one; runs then differ only in the scramble.
  std::optional<SparseCube> cube;
  Rational alpha{1, 2};
  std::vector<Heuristic> heuristics{Heuristic::fs, Heuristic::gs, Heuristic::im};
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0: hardware concurrency
  bool timing = true;    ///< false zeroes wall times so reports compare byte for byte

  /// Throws CubeError describing the first problem found.
  void validate() const;
};

/// base, sp, sp+n, k4sp+n.
ExperimentConfig experiment_preset(const std::string& name);
std::vector<std::string> experiment_preset_names();

struct RunRecord {
  std::size_t run = 0;
  std::string heuristic;
  Rational h_default;
  Rational h_heuristic;
  Rational ratio;  ///< h_heuristic / h_default, 1 when both are 0
  Rational density;
  std::optional<Rational> independence_sum;  ///< absent for an empty cube
  std::optional<Rational> fs_bound;
  double wall_ms = 0;
};

struct HeuristicSummary {
  std::string heuristic;
  std::size_t runs = 0;
  Rational mean_ratio;
  double std_ratio = 0;  ///< sample standard deviation
  Rational min_ratio;
  Rational max_ratio;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<RunRecord> records;  ///< ordered by run, then configured heuristic order
  std::vector<HeuristicSummary> summaries;
};

/// The scrambled cube of run `run`, the one the heuristics see.
SparseCube experiment_cube(const ExperimentConfig& config, std::size_t run);

ExperimentReport run_experiment(const ExperimentConfig& config);
std::vector<HeuristicSummary> summarize(const std::vector<RunRecord>& records,
                                        const std::vector<Heuristic>& order);

void write_report_json(std::ostream& out, const ExperimentReport& report);
/// One row per run x heuristic.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

/// Independence Sum against the FS/IM cost ratio for one cube.
struct IsRow {
  std::string source;
  std::size_t cells = 0;
  Rational independence_sum;
  Rational h_fs;
  Rational h_im;
  Rational fs_over_im;  ///< 1 when both are 0
};

IsRow analyze_is(const SparseCube& cube, const BlockShape& block, const CostParams& params,
                 std::string source);
void write_is_json(std::ostream& out, const std::vector<IsRow>& rows);
void write_is_csv(std::ostream& out, const std::vector<IsRow>& rows);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

}  // namespace cubenorm
