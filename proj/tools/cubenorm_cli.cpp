// cubenorm: normalize, score and benchmark data cube allocation patterns.
#include "cubenorm/cost.hpp"
#include "cubenorm/datagen.hpp"
#include "cubenorm/experiment.hpp"
#include "cubenorm/heuristics.hpp"
#include "cubenorm/ingest.hpp"
#include "cubenorm/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace cubenorm;
using nlohmann::ordered_json;

namespace {

std::vector<std::size_t> parse_list(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || item.front() == '-')
      throw CubeError(std::string("bad ") + what + " '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw CubeError(std::string("empty ") + what);
  return out;
}

/// "2" means 2 along every dimension; "2,2,1" lists every extent.
std::vector<std::size_t> parse_block(const std::string& text, std::size_t rank) {
  auto v = parse_list(text, "block shape");
  if (v.size() == 1) v.assign(rank, v.front());
  if (v.size() != rank)
    throw CubeError("block shape '" + text + "' has " + std::to_string(v.size()) +
                    " extents, cube has " + std::to_string(rank) + " dimensions");
  for (auto m : v)
    if (m == 0) throw CubeError("block extents must be positive");
  return v;
}

Rational parse_probability(const std::string& text, const char* what) {
  const Rational p = parse_rational(text);
  if (p < 0 || p > 1) throw CubeError(std::string(what) + " must lie in [0, 1]");
  return p;
}

std::vector<Heuristic> parse_heuristics(const std::vector<std::string>& names) {
  std::vector<Heuristic> out;
  for (const auto& group : names) {
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_heuristic(item));
  }
  return out;
}

/// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CubeError("cannot write '" + path + "'");
  write(out);
  if (!out) throw CubeError("write to '" + path + "' failed");
}

ordered_json num(const Rational& r) {
  return ordered_json{{"value", to_double(r)}, {"exact", to_string(r)}};
}

/// Cost summary of one cube under one block shape.
ordered_json cube_summary(const SparseCube& cube, const BlockShape& block,
                          const CostParams& params) {
  ordered_json j;
  j["dims"] = cube.dims().extents();
  j["cells"] = cube.cell_count();
  j["density"] = num(cube.density());
  j["H"] = num(holap_cost(cube, block, params));
  j["E"] = num(per_cell_cost(cube, block, params));
  const auto enc = encoding_summary(cube, block, params);
  j["blocks"] = {{"dense", enc.dense.str()}, {"sparse", enc.sparse.str()},
                 {"empty", enc.empty.str()}};
  if (cube.empty()) {
    j["independence_sum"] = nullptr;
    j["fs_bound"] = nullptr;
  } else {
    const auto rep = fs_bound(cube, params);
    j["independence_sum"] = num(rep.independence_sum);
    j["fs_bound"] = num(rep.bound);
  }
  return j;
}

void print_flat(std::ostream& out, const ordered_json& j, const std::string& format) {
  if (format == "json") {
    out << j.dump(2) << '\n';
    return;
  }
  // csv: one key,value line per scalar; exact values where available.
  out << "key,value\n";
  std::function<void(const std::string&, const ordered_json&)> walk =
      [&](const std::string& prefix, const ordered_json& v) {
        if (v.is_object() && v.contains("exact") && v.size() == 2) {
          out << prefix << ',' << v["exact"].get<std::string>() << '\n';
        } else if (v.is_object()) {
          for (auto it = v.begin(); it != v.end(); ++it)
            walk(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value());
        } else if (v.is_array()) {
          std::string s;
          for (const auto& x : v) s += (s.empty() ? "" : " ") + x.dump();
          out << prefix << ',' << s << '\n';
        } else if (v.is_string()) {
          out << prefix << ',' << v.get<std::string>() << '\n';
        } else {
          out << prefix << ',' << v.dump() << '\n';
        }
      };
  walk("", j);
}

struct Common {
  std::string block = "2";
  std::string alpha = "1/2";
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_format = true) {
  cmd->add_option("--block", c.block, "Block extents: one value for all dimensions or a comma list")
      ->capture_default_str();
  cmd->add_option("--alpha", c.alpha, "Sparse coordinate cost factor (e.g. 1/2 or 0.5)")
      ->capture_default_str();
  if (with_format)
    cmd->add_option("--format", c.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  cmd->add_option("--out", c.out, "Output file (default stdout)");
}

CostParams params_of(const Common& c) {
  const Rational a = parse_rational(c.alpha);
  if (a < 0) throw CubeError("alpha must be non-negative");
  return CostParams(a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data cube normalization: cost model, heuristics and experiments"};
  app.require_subcommand(1);

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "Write a synthetic kernel cube");
  std::string gen_dims = "12,12,12,12", gen_block = "2", gen_fill = "1/2", gen_noise;
  std::string gen_preset, gen_out, gen_product;
  std::uint64_t gen_seed = 0;
  bool gen_scramble = false;
  gen->add_option("--preset", gen_preset, "base, sp, sp+n or k4sp+n (overrides the shape flags)");
  gen->add_option("--dims", gen_dims, "Cube extents, comma separated")->capture_default_str();
  gen->add_option("--block", gen_block, "Kernel block extents")->capture_default_str();
  gen->add_option("--fill", gen_fill, "Probability that a block is full")->capture_default_str();
  gen->add_option("--noise", gen_noise, "Per-cell flip probability");
  gen->add_option("--product", gen_product,
                  "Outer-product cube keeping each value with this probability instead of a kernel");
  gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  gen->add_flag("--scramble", gen_scramble, "Apply a random normalization, as experiments do");
  gen->add_option("--out", gen_out, "Output cube file (default stdout)");

  // normalize --------------------------------------------------------------
  auto* norm = app.add_subcommand("normalize", "Choose a normalization for a cube");
  Common norm_c;
  std::string norm_cube, norm_heur = "fs", norm_cube_out;
  std::optional<std::size_t> norm_dim;
  norm->add_option("cube", norm_cube, "Cube file")->required();
  norm->add_option("--heuristic", norm_heur, "fs, gs, im or size2-exact")->capture_default_str();
  norm->add_option("--dim", norm_dim, "Dimension for size2-exact (default: every dimension)");
  norm->add_option("--cube-out", norm_cube_out, "Also write the normalized cube here");
  add_common(norm, norm_c);

  // score ------------------------------------------------------------------
  auto* score = app.add_subcommand("score", "Cost of a cube, optionally after a normalization");
  Common score_c;
  std::string score_cube, score_norm;
  score->add_option("cube", score_cube, "Cube file")->required();
  score->add_option("--norm", score_norm, "Normalization file to apply first");
  add_common(score, score_c);

  // experiment -------------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "Run a seeded batch of heuristic comparisons");
  Common exp_c;
  exp_c.block.clear();
  std::string exp_preset = "base", exp_dims, exp_kblock, exp_fill, exp_noise, exp_cube;
  std::vector<std::string> exp_heur;
  std::size_t exp_runs = 100;
  std::uint64_t exp_seed = 0;
  unsigned exp_threads = 0;
  bool exp_no_timing = false;
  exp->add_option("--preset", exp_preset, "base, sp, sp+n or k4sp+n")->capture_default_str();
  exp->add_option("--dims", exp_dims, "Override cube extents");
  exp->add_option("--kernel-block", exp_kblock, "Override kernel block extents");
  exp->add_option("--fill", exp_fill, "Override block fill probability");
  exp->add_option("--noise", exp_noise, "Override noise flip probability (0 disables)");
  exp->add_option("--cube", exp_cube, "Scramble this cube instead of generating kernels");
  exp->add_option("--heuristic", exp_heur, "Heuristics (repeat or comma list; default fs,gs,im)");
  exp->add_option("--runs", exp_runs, "Number of runs")->capture_default_str();
  exp->add_option("--seed", exp_seed, "Seed base")->capture_default_str();
  exp->add_option("--threads", exp_threads, "Worker threads (0: all cores)")->capture_default_str();
  exp->add_flag("--no-timing", exp_no_timing, "Report zero wall times (byte-reproducible output)");
  exp->add_option("--block", exp_c.block, "Cost block extents (default: preset)");
  exp->add_option("--alpha", exp_c.alpha, "Sparse coordinate cost factor")->capture_default_str();
  exp->add_option("--format", exp_c.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  exp->add_option("--out", exp_c.out, "Output file (default stdout)");

  // analyze-is -------------------------------------------------------------
  auto* ais = app.add_subcommand("analyze-is", "Independence Sum against the FS/IM cost ratio");
  Common ais_c;
  std::vector<std::string> ais_files;
  std::string ais_preset = "sp+n", ais_product, ais_noise;
  std::size_t ais_runs = 20;
  std::uint64_t ais_seed = 0;
  ais->add_option("cubes", ais_files, "Cube files (default: generated cubes)");
  ais->add_option("--preset", ais_preset, "Generator preset when no files are given")
      ->capture_default_str();
  ais->add_option("--product", ais_product,
                  "Generate outer-product cubes keeping each value with this probability");
  ais->add_option("--noise", ais_noise, "Noise for generated cubes (overrides the preset)");
  ais->add_option("--runs", ais_runs, "Generated cube count")->capture_default_str();
  ais->add_option("--seed", ais_seed, "Seed base")->capture_default_str();
  add_common(ais, ais_c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      SparseCube cube(CubeDims({1}));
      std::uint64_t scramble_seed = derive_seed(gen_seed, 2);
      if (!gen_preset.empty()) {
        ExperimentConfig cfg = experiment_preset(gen_preset);
        cfg.seed = gen_seed;
        cfg.runs = 1;
        // experiment_cube scrambles; replay its streams to get the unscrambled cube too.
        const std::uint64_t s = derive_seed(gen_seed, 0);
        cube = kernel_cube({cfg.dims, cfg.kernel_block, cfg.fill_prob, derive_seed(s, 0)});
        if (cfg.noise) cube = add_noise(cube, {*cfg.noise, derive_seed(s, 1)});
        scramble_seed = derive_seed(s, 2);
      } else {
        const auto dims = parse_list(gen_dims, "dims");
        if (!gen_product.empty()) {
          cube = outer_product_cube(CubeDims(dims), parse_probability(gen_product, "--product"),
                                    derive_seed(gen_seed, 0));
        } else {
          cube = kernel_cube({dims, parse_block(gen_block, dims.size()),
                              parse_probability(gen_fill, "--fill"), derive_seed(gen_seed, 0)});
        }
        if (!gen_noise.empty())
          cube = add_noise(cube, {parse_probability(gen_noise, "--noise"), derive_seed(gen_seed, 1)});
      }
      if (gen_scramble) cube = apply(random_normalization(cube.dims(), scramble_seed), cube);
      emit(gen_out, [&](std::ostream& o) { write_cube(o, cube); });
      return 0;
    }

    if (*norm) {
      const SparseCube cube = load_cube_file(norm_cube);
      const BlockShape block(parse_block(norm_c.block, cube.rank()));
      const CostParams params = params_of(norm_c);
      const Heuristic h = parse_heuristic(norm_heur);
      if (norm_dim && *norm_dim >= cube.rank()) throw CubeError("--dim out of range");
      const Normalization n = cube.empty() ? Normalization::identity(cube.dims())
                                           : run_heuristic(h, cube, params, norm_dim);
      const SparseCube after = apply(n, cube);
      if (!norm_c.out.empty()) save_normalization_file(norm_c.out, n);
      if (!norm_cube_out.empty()) save_cube_file(norm_cube_out, after);
      ordered_json j;
      j["heuristic"] = heuristic_name(h);
      j["block"] = block.extents();
      j["alpha"] = to_string(params.alpha);
      j["before"] = cube_summary(cube, block, params);
      j["after"] = cube_summary(after, block, params);
      const Rational hb = holap_cost(cube, block, params), ha = holap_cost(after, block, params);
      j["ratio"] = hb == 0 ? num(1) : num(ha / hb);
      ordered_json perms = ordered_json::array();
      for (const auto& p : n.perms()) perms.push_back(p.mapping());
      j["normalization"] = std::move(perms);
      print_flat(std::cout, j, norm_c.format);
      return 0;
    }

    if (*score) {
      SparseCube cube = load_cube_file(score_cube);
      const BlockShape block(parse_block(score_c.block, cube.rank()));
      const CostParams params = params_of(score_c);
      if (!score_norm.empty()) {
        const Normalization n = load_normalization_file(score_norm);
        if (!n.matches(cube.dims()))
          throw CubeError("normalization '" + score_norm + "' does not match the cube's extents");
        cube = apply(n, cube);
      }
      ordered_json j = cube_summary(cube, block, params);
      j["block"] = block.extents();
      j["alpha"] = to_string(params.alpha);
      emit(score_c.out, [&](std::ostream& o) { print_flat(o, j, score_c.format); });
      return 0;
    }

    if (*exp) {
      ExperimentConfig cfg = experiment_preset(exp_preset);
      if (!exp_dims.empty()) cfg.dims = parse_list(exp_dims, "dims");
      if (!exp_cube.empty()) {
        cfg.cube = load_cube_file(exp_cube);
        cfg.name = exp_cube;
      }
      const std::size_t rank = cfg.cube ? cfg.cube->rank() : cfg.dims.size();
      if (!exp_kblock.empty()) cfg.kernel_block = parse_block(exp_kblock, rank);
      else if (cfg.kernel_block.size() != rank && !cfg.cube)
        cfg.kernel_block.assign(rank, cfg.kernel_block.front());
      if (!exp_c.block.empty()) cfg.block = parse_block(exp_c.block, rank);
      else if (cfg.block.size() != rank) cfg.block.assign(rank, cfg.block.front());
      if (!exp_fill.empty()) cfg.fill_prob = parse_probability(exp_fill, "--fill");
      if (!exp_noise.empty()) {
        const Rational p = parse_probability(exp_noise, "--noise");
        cfg.noise = p == 0 ? std::nullopt : std::optional<Rational>(p);
      }
      if (!exp_heur.empty()) cfg.heuristics = parse_heuristics(exp_heur);
      cfg.alpha = params_of(exp_c).alpha;
      cfg.runs = exp_runs;
      cfg.seed = exp_seed;
      cfg.threads = exp_threads;
      cfg.timing = !exp_no_timing;
      const ExperimentReport report = run_experiment(cfg);
      emit(exp_c.out, [&](std::ostream& o) {
        if (exp_c.format == "csv")
          write_report_csv(o, report);
        else
          write_report_json(o, report);
      });
      for (const auto& s : report.summaries)
        std::cerr << s.heuristic << ": mean ratio " << format_double(100 * to_double(s.mean_ratio))
                  << "% (sd " << format_double(100 * s.std_ratio) << ", " << s.runs << " runs)\n";
      return 0;
    }

    if (*ais) {
      const CostParams params = params_of(ais_c);
      std::vector<IsRow> rows;
      if (!ais_files.empty()) {
        for (const auto& f : ais_files) {
          const SparseCube cube = load_cube_file(f);
          rows.push_back(analyze_is(cube, BlockShape(parse_block(ais_c.block, cube.rank())),
                                    params, f));
        }
      } else {
        ExperimentConfig cfg = experiment_preset(ais_preset);
        if (!ais_noise.empty()) {
          const Rational p = parse_probability(ais_noise, "--noise");
          cfg.noise = p == 0 ? std::nullopt : std::optional<Rational>(p);
        }
        const BlockShape block(parse_block(ais_c.block, cfg.dims.size()));
        std::optional<Rational> product;
        if (!ais_product.empty()) product = parse_probability(ais_product, "--product");
        if (ais_runs == 0) throw CubeError("--runs must be at least 1");
        for (std::size_t r = 0; r < ais_runs; ++r) {
          const std::uint64_t s = derive_seed(ais_seed, r);
          SparseCube cube(CubeDims({1}));
          if (product) {
            cube = outer_product_cube(CubeDims(cfg.dims), *product, derive_seed(s, 0));
            if (cfg.noise) cube = add_noise(cube, {*cfg.noise, derive_seed(s, 1)});
            cube = apply(random_normalization(cube.dims(), derive_seed(s, 2)), cube);
          } else {
            cfg.seed = ais_seed;
            cube = experiment_cube(cfg, r);
          }
          if (cube.empty()) continue;
          rows.push_back(analyze_is(cube, block, params, "run " + std::to_string(r)));
        }
      }
      emit(ais_c.out, [&](std::ostream& o) {
        if (ais_c.format == "csv")
          write_is_csv(o, rows);
        else
          write_is_json(o, rows);
      });
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
