#include "cubenorm/experiment.hpp"

#include "cubenorm/datagen.hpp"
#include "cubenorm/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace cubenorm {

void ExperimentConfig::validate() const {
  if (runs == 0) throw CubeError("run count must be at least 1");
  if (heuristics.empty()) throw CubeError("no heuristics configured");
  if (alpha < 0) throw CubeError("alpha must be non-negative");
  const auto& ext = cube ? cube->dims().extents() : dims;
  if (ext.empty()) throw CubeError("cube needs at least one dimension");
  for (auto n : ext)
    if (n == 0) throw CubeError("extents must be positive");
  if (block.size() != ext.size())
    throw CubeError("block shape has " + std::to_string(block.size()) + " extents, cube has " +
                    std::to_string(ext.size()) + " dimensions");
  for (auto m : block)
    if (m == 0) throw CubeError("block extents must be positive");
  if (!cube) {
    if (kernel_block.size() != dims.size())
      throw CubeError("kernel block shape does not match the cube rank");
    for (auto m : kernel_block)
      if (m == 0) throw CubeError("kernel block extents must be positive");
    if (fill_prob < 0 || fill_prob > 1) throw CubeError("fill probability must lie in [0, 1]");
  }
  if (noise && (*noise < 0 || *noise > 1))
    throw CubeError("noise probability must lie in [0, 1]");
}

std::vector<std::string> experiment_preset_names() { return {"base", "sp", "sp+n", "k4sp+n"}; }

ExperimentConfig experiment_preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "base") return c;
  c.fill_prob = Rational(1, 10);
  if (name == "sp") return c;
  c.noise = Rational(3, 100);
  if (name == "sp+n") return c;
  if (name == "k4sp+n") {
    c.kernel_block = {4, 4, 4, 4};
    c.block = {4, 4, 4, 4};
    return c;
  }
  throw CubeError("unknown preset '" + name + "' (expected base, sp, sp+n or k4sp+n)");
}

SparseCube experiment_cube(const ExperimentConfig& config, std::size_t run) {
  const std::uint64_t seed = derive_seed(config.seed, run);
  SparseCube cube = config.cube
                        ? *config.cube
                        : kernel_cube({config.dims, config.kernel_block, config.fill_prob,
                                       derive_seed(seed, 0)});
  if (config.noise) cube = add_noise(cube, {*config.noise, derive_seed(seed, 1)});
  return apply(random_normalization(cube.dims(), derive_seed(seed, 2)), cube);
}

namespace {

Rational safe_ratio(const Rational& num, const Rational& den) {
  if (den == 0) return num == 0 ? Rational(1) : throw CubeError("ratio against zero cost");
  return num / den;
}

std::vector<RunRecord> one_run(const ExperimentConfig& config, std::size_t run) {
  const SparseCube cube = experiment_cube(config, run);
  const BlockShape block(config.block);
  const CostParams params(config.alpha);
  const Rational h_default = holap_cost(cube, block, params);
  std::optional<Rational> is, bound;
  if (!cube.empty()) {
    const auto report = fs_bound(cube, params);
    is = report.independence_sum;
    bound = report.bound;
  }
  std::vector<RunRecord> out;
  for (auto h : config.heuristics) {
    const auto t0 = std::chrono::steady_clock::now();
    const Normalization norm = run_heuristic(h, cube, params);
    const Rational cost = holap_cost(apply(norm, cube), block, params);
    const auto t1 = std::chrono::steady_clock::now();
    RunRecord r;
    r.run = run;
    r.heuristic = heuristic_name(h);
    r.h_default = h_default;
    r.h_heuristic = cost;
    r.ratio = safe_ratio(cost, h_default);
    r.density = cube.density();
    r.independence_sum = is;
    r.fs_bound = bound;
    if (config.timing) r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

std::vector<HeuristicSummary> summarize(const std::vector<RunRecord>& records,
                                        const std::vector<Heuristic>& order) {
  std::vector<HeuristicSummary> out;
  for (auto h : order) {
    HeuristicSummary s;
    s.heuristic = heuristic_name(h);
    Rational sum = 0;
    std::vector<double> xs;
    for (const auto& r : records) {
      if (r.heuristic != s.heuristic) continue;
      if (s.runs == 0 || r.ratio < s.min_ratio) s.min_ratio = r.ratio;
      if (s.runs == 0 || r.ratio > s.max_ratio) s.max_ratio = r.ratio;
      ++s.runs;
      sum += r.ratio;
      xs.push_back(to_double(r.ratio));
    }
    if (s.runs == 0) continue;
    s.mean_ratio = sum / s.runs;
    if (s.runs > 1) {
      const double mean = to_double(s.mean_ratio);
      double ss = 0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      s.std_ratio = std::sqrt(ss / static_cast<double>(s.runs - 1));
    }
    out.push_back(std::move(s));
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::vector<RunRecord>> per_run(config.runs);
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(config.runs)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t run = next.fetch_add(1);
      if (run >= config.runs) return;
      try {
        per_run[run] = one_run(config, run);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.runs;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ExperimentReport report{config, {}, {}};
  for (auto& rows : per_run)
    for (auto& r : rows) report.records.push_back(std::move(r));
  report.summaries = summarize(report.records, config.heuristics);
  return report;
}

// ---------------------------------------------------------------------------
// serialization

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

using nlohmann::ordered_json;

ordered_json exact(const Rational& r) {
  return ordered_json{{"value", to_double(r)}, {"exact", to_string(r)}};
}

ordered_json maybe_exact(const std::optional<Rational>& r) {
  return r ? exact(*r) : ordered_json(nullptr);
}

std::string csv_num(const std::optional<Rational>& r) {
  return r ? format_double(to_double(*r)) : std::string();
}

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  if (c.cube) {
    j["dims"] = c.cube->dims().extents();
    j["source"] = "cube";
  } else {
    j["dims"] = c.dims;
    j["source"] = "kernel";
    j["kernel_block"] = c.kernel_block;
    j["fill_prob"] = to_string(c.fill_prob);
  }
  j["noise"] = c.noise ? ordered_json(to_string(*c.noise)) : ordered_json(nullptr);
  j["block"] = c.block;
  j["alpha"] = to_string(c.alpha);
  std::vector<std::string> hs;
  for (auto h : c.heuristics) hs.push_back(heuristic_name(h));
  j["heuristics"] = hs;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  return j;
}

}  // namespace

void write_report_json(std::ostream& out, const ExperimentReport& report) {
  ordered_json j;
  j["config"] = config_json(report.config);
  ordered_json summaries = ordered_json::array();
  for (const auto& s : report.summaries) {
    summaries.push_back({{"heuristic", s.heuristic},
                         {"runs", s.runs},
                         {"mean_ratio", exact(s.mean_ratio)},
                         {"std_ratio", s.std_ratio},
                         {"min_ratio", exact(s.min_ratio)},
                         {"max_ratio", exact(s.max_ratio)}});
  }
  j["summary"] = std::move(summaries);
  ordered_json runs = ordered_json::array();
  for (const auto& r : report.records) {
    runs.push_back({{"run", r.run},
                    {"heuristic", r.heuristic},
                    {"h_default", exact(r.h_default)},
                    {"h_heuristic", exact(r.h_heuristic)},
                    {"ratio", exact(r.ratio)},
                    {"density", exact(r.density)},
                    {"independence_sum", maybe_exact(r.independence_sum)},
                    {"fs_bound", maybe_exact(r.fs_bound)},
                    {"wall_ms", r.wall_ms}});
  }
  j["runs"] = std::move(runs);
  out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "run,heuristic,h_default,h_heuristic,ratio,density,independence_sum,fs_bound,wall_ms\n";
  for (const auto& r : report.records) {
    out << r.run << ',' << r.heuristic << ',' << format_double(to_double(r.h_default)) << ','
        << format_double(to_double(r.h_heuristic)) << ',' << format_double(to_double(r.ratio))
        << ',' << format_double(to_double(r.density)) << ',' << csv_num(r.independence_sum)
        << ',' << csv_num(r.fs_bound) << ',' << format_double(r.wall_ms) << '\n';
  }
}

IsRow analyze_is(const SparseCube& cube, const BlockShape& block, const CostParams& params,
                 std::string source) {
  if (cube.empty()) throw CubeError(source + ": Independence Sum needs a non-empty cube");
  IsRow row;
  row.source = std::move(source);
  row.cells = cube.cell_count();
  row.independence_sum = independence_sum(cube);
  row.h_fs = holap_cost(apply(frequency_sort(cube), cube), block, params);
  row.h_im = holap_cost(apply(iterated_matching(cube, params), cube), block, params);
  row.fs_over_im = safe_ratio(row.h_fs, row.h_im);
  return row;
}

void write_is_json(std::ostream& out, const std::vector<IsRow>& rows) {
  ordered_json j = ordered_json::array();
  for (const auto& r : rows) {
    j.push_back({{"source", r.source},
                 {"cells", r.cells},
                 {"independence_sum", exact(r.independence_sum)},
                 {"h_fs", exact(r.h_fs)},
                 {"h_im", exact(r.h_im)},
                 {"fs_over_im", exact(r.fs_over_im)}});
  }
  out << j.dump(2) << '\n';
}

void write_is_csv(std::ostream& out, const std::vector<IsRow>& rows) {
  out << "source,cells,independence_sum,h_fs,h_im,fs_over_im\n";
  for (const auto& r : rows) {
    std::string src = r.source;
    if (src.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : src) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      src = q + "\"";
    }
    out << src << ',' << r.cells << ',' << format_double(to_double(r.independence_sum)) << ','
        << format_double(to_double(r.h_fs)) << ',' << format_double(to_double(r.h_im)) << ','
        << format_double(to_double(r.fs_over_im)) << '\n';
  }
}

}  // namespace cubenorm
