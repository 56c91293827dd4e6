#include "cubenorm/cost.hpp"
#include "cubenorm/datagen.hpp"
#include "cubenorm/experiment.hpp"
#include "cubenorm/heuristics.hpp"
#include "cubenorm/ingest.hpp"
#include "cubenorm/matching.hpp"
#include "cubenorm/stats.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cubenorm;

namespace {

// Exact values cross the boundary as fractions.Fraction.
py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(py::str(to_string(r)));
}

Rational rational(const py::handle& obj) { return parse_rational(py::str(obj)); }

CostParams params(const py::object& alpha) {
  return alpha.is_none() ? CostParams{} : CostParams(rational(alpha));
}

BlockShape block_of(const py::object& block, std::size_t rank) {
  if (py::isinstance<py::int_>(block)) return BlockShape::regular(rank, block.cast<std::size_t>());
  return BlockShape(block.cast<std::vector<std::size_t>>());
}

SparseCube make_cube(std::vector<std::size_t> dims, const std::vector<std::vector<Index>>& cells) {
  return SparseCube::from_tuples(cells, CubeDims(std::move(dims)));
}

Normalization make_norm(const std::vector<std::vector<Index>>& perms) {
  std::vector<Permutation> ps;
  for (const auto& p : perms) ps.emplace_back(p);
  return Normalization(std::move(ps));
}

std::vector<std::vector<Index>> perms_of(const Normalization& n) {
  std::vector<std::vector<Index>> out;
  for (const auto& p : n.perms()) out.push_back(p.mapping());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Data cube normalization: HOLAP cost model and normalization heuristics";

  py::register_exception<CubeError>(m, "CubeError", PyExc_ValueError);

  py::class_<SparseCube>(m, "Cube")
      .def(py::init(&make_cube), py::arg("dims"), py::arg("cells") = std::vector<std::vector<Index>>{})
      .def_property_readonly("dims", [](const SparseCube& c) { return c.dims().extents(); })
      .def_property_readonly("rank", &SparseCube::rank)
      .def_property_readonly("cells", &SparseCube::tuples)
      .def("__len__", &SparseCube::cell_count)
      .def("__contains__",
           [](const SparseCube& c, const std::vector<Index>& coord) {
             return coord.size() == c.rank() && c.contains(coord);
           })
      .def("slice_counts", &SparseCube::slice_counts, py::arg("dim"))
      .def_property_readonly("density", [](const SparseCube& c) { return fraction(c.density()); })
      .def("__eq__", [](const SparseCube& a, const SparseCube& b) { return a == b; })
      .def("__repr__", [](const SparseCube& c) {
        std::string s = "Cube(dims=[";
        for (std::size_t j = 0; j < c.rank(); ++j)
          s += (j ? ", " : "") + std::to_string(c.dims().extent(j));
        return s + "], cells=" + std::to_string(c.cell_count()) + ")";
      });

  m.def("apply",
        [](const std::vector<std::vector<Index>>& perms, const SparseCube& c) {
          return apply(make_norm(perms), c);
        },
        py::arg("normalization"), py::arg("cube"),
        "Reorder a cube: result[i_1..i_d] = cube[g_1(i_1)..g_d(i_d)].");
  m.def("compose",
        [](const std::vector<std::vector<Index>>& a, const std::vector<std::vector<Index>>& b) {
          return perms_of(compose(make_norm(a), make_norm(b)));
        },
        py::arg("a"), py::arg("b"));
  m.def("equivalence_class_cardinality",
        [](const SparseCube& c) { return py::int_(py::str(equivalence_class_cardinality(c).str())); },
        py::arg("cube"));

  m.def("holap_cost",
        [](const SparseCube& c, const py::object& block, const py::object& alpha) {
          return fraction(holap_cost(c, block_of(block, c.rank()), params(alpha)));
        },
        py::arg("cube"), py::arg("block") = 2, py::arg("alpha") = py::none());
  m.def("per_cell_cost",
        [](const SparseCube& c, const py::object& block, const py::object& alpha) {
          return fraction(per_cell_cost(c, block_of(block, c.rank()), params(alpha)));
        },
        py::arg("cube"), py::arg("block") = 2, py::arg("alpha") = py::none());

  m.def("independence_sum", [](const SparseCube& c) { return fraction(independence_sum(c)); },
        py::arg("cube"));
  m.def("fs_bound",
        [](const SparseCube& c, const py::object& alpha) {
          return fraction(fs_bound(c, params(alpha)).bound);
        },
        py::arg("cube"), py::arg("alpha") = py::none());

  m.def("normalize",
        [](const SparseCube& c, const std::string& heuristic, const py::object& alpha,
           std::optional<std::size_t> dim) {
          return perms_of(run_heuristic(parse_heuristic(heuristic), c, params(alpha), dim));
        },
        py::arg("cube"), py::arg("heuristic") = "fs", py::arg("alpha") = py::none(),
        py::arg("dim") = py::none(), "Normalization chosen by fs, gs, im or size2-exact.");

  m.def("min_weight_perfect_matching",
        [](const std::vector<std::vector<py::object>>& weights) {
          const std::size_t n = weights.size();
          WeightMatrix w(n);
          for (std::size_t i = 0; i < n; ++i) {
            if (weights[i].size() != n) throw CubeError("weight matrix must be square");
            for (std::size_t j = i + 1; j < n; ++j) w.set(i, j, rational(weights[i][j]));
          }
          const Matching mt = min_weight_perfect_matching(w);
          return py::make_tuple(mt.pairs, fraction(mt.total));
        },
        py::arg("weights"), "Pairs and total of a minimum-weight perfect matching (upper triangle used).");

  m.def("kernel_cube",
        [](std::vector<std::size_t> dims, const py::object& block, const py::object& fill,
           std::uint64_t seed) {
          const auto shape = block_of(block, dims.size());
          return kernel_cube({std::move(dims), shape.extents(), rational(fill), seed});
        },
        py::arg("dims"), py::arg("block") = 2, py::arg("fill") = "1/2", py::arg("seed") = 0);
  m.def("add_noise",
        [](const SparseCube& c, const py::object& p, std::uint64_t seed) {
          return add_noise(c, {rational(p), seed});
        },
        py::arg("cube"), py::arg("flip_prob") = "3/100", py::arg("seed") = 0);
  m.def("random_normalization",
        [](std::vector<std::size_t> dims, std::uint64_t seed) {
          return perms_of(random_normalization(CubeDims(std::move(dims)), seed));
        },
        py::arg("dims"), py::arg("seed") = 0);

  m.def("load_relation",
        [](const std::vector<std::vector<std::string>>& rows) {
          auto loaded = load_relation(rows);
          return py::make_tuple(loaded.cube, loaded.schema.values);
        },
        py::arg("rows"), "Cube plus per-column values in first-seen order.");
  m.def("export_cube", &export_cube, py::arg("cube"));
  m.def("import_cube", &import_cube, py::arg("text"));

  m.def("run_experiment",
        [](const std::string& preset, std::size_t runs, std::uint64_t seed,
           std::vector<std::string> heuristics, std::optional<std::vector<std::size_t>> dims) {
          ExperimentConfig cfg = experiment_preset(preset);
          cfg.runs = runs;
          cfg.seed = seed;
          cfg.timing = false;
          if (dims) {
            cfg.dims = *dims;
            cfg.kernel_block.assign(dims->size(), cfg.kernel_block.front());
            cfg.block.assign(dims->size(), cfg.block.front());
          }
          if (!heuristics.empty()) {
            cfg.heuristics.clear();
            for (const auto& h : heuristics) cfg.heuristics.push_back(parse_heuristic(h));
          }
          ExperimentReport rep;
          {
            py::gil_scoped_release release;
            rep = run_experiment(cfg);
          }
          py::dict out;
          for (const auto& s : rep.summaries) out[py::str(s.heuristic)] = fraction(s.mean_ratio);
          return out;
        },
        py::arg("preset") = "base", py::arg("runs") = 10, py::arg("seed") = 0,
        py::arg("heuristics") = std::vector<std::string>{}, py::arg("dims") = py::none(),
        "Mean heuristic/default cost ratio per heuristic.");
}
