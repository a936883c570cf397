#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "alpern/construction.hpp"
#include "alpern/error.hpp"
#include "alpern/ingestion.hpp"
#include "alpern/render.hpp"
#include "alpern/report.hpp"
#include "alpern/richness.hpp"
#include "alpern/verification.hpp"

namespace py = pybind11;

// alpern::Ratio <-> fractions.Fraction. Accepts int, Fraction or a "p/q" string.
namespace pybind11::detail {

template <>
struct type_caster<alpern::Ratio> {
  PYBIND11_TYPE_CASTER(alpern::Ratio, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (!src) return false;
    if (py::isinstance<py::str>(src)) {
      value = alpern::Ratio::parse(src.cast<std::string>());
      return true;
    }
    py::object num, den;
    if (PyLong_Check(src.ptr())) {
      num = py::reinterpret_borrow<py::object>(src);
      den = py::int_(1);
    } else if (py::hasattr(src, "numerator") && py::hasattr(src, "denominator") &&
               !PyFloat_Check(src.ptr())) {
      num = src.attr("numerator");
      den = src.attr("denominator");
    } else {
      return false;
    }
    const auto n = py::str(num).cast<std::string>();
    const auto d = py::str(den).cast<std::string>();
    value = alpern::Ratio(mpq_class(mpz_class(n), mpz_class(d)));
    return true;
  }

  static handle cast(const alpern::Ratio& r, return_value_policy, handle) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    const py::object num = py::int_(py::str(r.numerator().get_str()));
    const py::object den = py::int_(py::str(r.denominator().get_str()));
    return fraction(num, den).release();
  }
};

}  // namespace pybind11::detail

namespace {

using namespace alpern;

py::dict verdict_dict(const Verdicts& v) {
  py::dict d;
  for (const auto& [name, ok] : v.named()) d[py::str(name)] = ok;
  return d;
}

py::dict measures_dict(const TowerMeasures& m) {
  py::dict d;
  d["B"] = m.base;
  d["A"] = m.extra;
  d["A_union_B"] = m.base + m.extra;
  d["E"] = m.error;
  d["B_N"] = m.base_short;
  d["B_N+1"] = m.base_long;
  d["B_by_cell"] = m.base_by_cell;
  d["A_by_cell"] = m.extra_by_cell;
  return d;
}

std::vector<py::tuple> rung_tuples(const TowerResult& r, RungSetKind kind) {
  std::vector<py::tuple> out;
  for (const auto& col : rung_set(r, kind))
    for (const auto& rung : col.rungs) out.push_back(py::make_tuple(col.column_id, rung.block, rung.sub, rung.level));
  return out;
}

RungSetKind kind_from(const std::string& name) {
  if (name == "B") return RungSetKind::B;
  if (name == "A") return RungSetKind::A;
  if (name == "AB" || name == "A_union_B") return RungSetKind::AB;
  throw Error(ErrorCode::InvalidArgument, "unknown rung set '" + name + "', expected B, A or AB");
}

RenderOptions render_options(std::optional<std::string> column, std::optional<int> block,
                             std::optional<std::string> levels, int subcolumns, const ColumnSystem& system) {
  RenderOptions o;
  o.column = std::move(column);
  o.block = block;
  o.subcolumns = subcolumns;
  if (levels) {
    const auto& c = o.column ? system.column(*o.column) : system.columns.front();
    o.levels = parse_level_range(*levels, c.height());
  }
  return o;
}

}  // namespace

PYBIND11_MODULE(_alpern, m) {
  m.doc() = "Exact Alpern towers with partition-independent bases";

  static py::handle error_type =
      py::handle(PyErr_NewException("alpern._alpern.AlpernError", PyExc_ValueError, nullptr)).inc_ref();
  m.attr("AlpernError") = error_type;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("where") = e.where();
      PyErr_SetObject(error_type.ptr(), inst.ptr());
    }
  });

  py::class_<Column>(m, "Column")
      .def(py::init<std::string, Ratio, std::vector<Cell>>(), py::arg("id"), py::arg("width"), py::arg("labels"))
      .def_readwrite("id", &Column::id)
      .def_readwrite("width", &Column::width)
      .def_readwrite("labels", &Column::labels)
      .def_property_readonly("height", &Column::height)
      .def("__repr__", [](const Column& c) {
        return "Column(" + c.id + ", width=" + c.width.str() + ", height=" + std::to_string(c.height()) + ")";
      });

  py::class_<SeamEdge>(m, "SeamEdge")
      .def(py::init<std::string, std::int64_t, std::string, Ratio>(), py::arg("source"), py::arg("order"),
           py::arg("target"), py::arg("width"))
      .def_readwrite("source", &SeamEdge::from)
      .def_readwrite("order", &SeamEdge::order)
      .def_readwrite("target", &SeamEdge::to)
      .def_readwrite("width", &SeamEdge::width);

  py::class_<ColumnSystem>(m, "ColumnSystem")
      .def(py::init([](std::vector<std::string> cells, std::vector<Column> columns, std::vector<SeamEdge> edges) {
             return ColumnSystem{PartitionSpec{std::move(cells)}, std::move(columns), std::move(edges)};
           }),
           py::arg("cells"), py::arg("columns"), py::arg("edges"))
      .def_property_readonly("cells", [](const ColumnSystem& s) { return s.partition.names; })
      .def_property_readonly("t", &ColumnSystem::t)
      .def_readwrite("columns", &ColumnSystem::columns)
      .def_readwrite("edges", &ColumnSystem::edges)
      .def("validate", [](const ColumnSystem& s) {
        std::vector<std::string> out;
        for (const auto& v : validate_system(s)) out.push_back(v.str());
        return out;
      }, "Violations as strings; empty when the system is valid")
      .def("cell_measures", &cell_measures)
      .def("serialize", &serialize_system)
      .def("__eq__", [](const ColumnSystem& a, const ColumnSystem& b) { return a == b; });

  m.def("parse_system", [](const std::string& text) { return parse_system(text); }, py::arg("text"));
  m.def("build_cyclic", [](const std::vector<Cell>& labels, std::optional<int> cells) {
    int t = cells.value_or(0);
    for (Cell c : labels) t = std::max(t, c);
    if (cells) t = *cells;
    return build_cyclic(labels, default_partition(t));
  }, py::arg("labels"), py::arg("cells") = py::none());
  m.def("build_rotation", [](std::int64_t p, std::int64_t q, std::vector<Ratio> breaks) {
    return build_rotation(RotationSpec{p, q, std::move(breaks)});
  }, py::arg("p"), py::arg("q"), py::arg("breakpoints"));
  m.def("enrich_rotation", [](const std::vector<std::int64_t>& terms, int cells, int N) {
    auto r = enrich_rotation(terms, equal_breakpoints(cells), N, cells);
    return py::make_tuple(r.system, r.convergent.p, r.convergent.q, r.M);
  }, py::arg("terms"), py::arg("cells"), py::arg("N"),
        "First rich rotation among the convergents, with equal breakpoints: (system, p, q, M)");
  m.def("parse_labels", [](const std::string& text, int t) { return parse_labels(text, t); }, py::arg("text"),
        py::arg("t"));
  m.def("format_labels", &format_labels, py::arg("labels"), py::arg("t"));

  m.def("required_M", &required_M, py::arg("N"), py::arg("t"), py::arg("m1"));
  m.def("is_rich", [](const ColumnSystem& s, std::int64_t M) { return is_rich(s, M).rich(); }, py::arg("system"),
        py::arg("M"));
  m.def("compute_delta", &compute_delta, py::arg("N"));
  m.def("compute_gamma", &compute_gamma, py::arg("R"), py::arg("N"), py::arg("t"), py::arg("delta"), py::arg("m1"));
  m.def("compute_b", [](const std::vector<Ratio>& mm, std::int64_t gamma, std::int64_t delta, int t) {
    return compute_b(mm, gamma, delta, t);
  }, py::arg("m"), py::arg("gamma"), py::arg("delta"), py::arg("t"));
  m.def("bottom_staircase", &bottom_staircase, py::arg("N"));
  m.def("top_staircase", &top_staircase, py::arg("N"), py::arg("R"));

  py::class_<TowerResult>(m, "TowerResult")
      .def_property_readonly("N", [](const TowerResult& r) { return r.params.N; })
      .def_property_readonly("M", [](const TowerResult& r) { return r.params.M; })
      .def_property_readonly("delta", [](const TowerResult& r) { return r.params.delta; })
      .def_property_readonly("gamma", [](const TowerResult& r) {
        py::dict d;
        for (const auto& c : r.params.columns) d[py::str(c.column_id)] = c.gamma;
        return d;
      })
      .def_property_readonly("b", [](const TowerResult& r) {
        py::dict d;
        for (const auto& c : r.params.columns) d[py::str(c.column_id)] = c.b;
        return d;
      })
      .def_property_readonly("measures", [](const TowerResult& r) { return measures_dict(r.measures); })
      .def("rungs", [](const TowerResult& r, const std::string& kind) { return rung_tuples(r, kind_from(kind)); },
           py::arg("kind") = "B", "(column, block, subcolumn, level) for every rung of B, A or AB")
      .def("error_rungs", [](const TowerResult& r) {
        std::vector<py::tuple> out;
        for (const auto& col : r.columns)
          for (const auto& sel : col.blocks)
            for (std::size_t j = 0; j < sel.e.size(); ++j)
              for (const Level l : sel.e[j]) out.push_back(py::make_tuple(col.column_id, sel.block, int(j + 1), l));
        return out;
      })
      .def("__eq__", [](const TowerResult& a, const TowerResult& b) { return a == b; });

  m.def("build_tower", [](const ColumnSystem& s, int N, bool allow_small_M) {
    return build_tower(s, N, {.allow_small_M = allow_small_M});
  }, py::arg("system"), py::arg("N"), py::arg("allow_small_M") = false);
  m.def("write_report", &write_tower_report, py::arg("system"), py::arg("result"));
  m.def("read_report", [](const ColumnSystem& s, const std::string& text) { return read_tower_report(s, text); },
        py::arg("system"), py::arg("text"));

  m.def("verify", [](const ColumnSystem& s, const TowerResult& r, bool oracle, std::int64_t grid_limit) {
    const auto comb = verify_tower(s, r);
    py::dict out = verdict_dict(comb.verdicts());
    out["gap_spectrum"] = comb.alpern.gap_spectrum;
    out["diagnostics"] = comb.diagnostics;
    if (oracle) {
      const auto grid = build_grid(s, r.params, grid_limit);
      const auto o = oracle_verify(grid, s, r);
      out["oracle"] = verdict_dict(o.verdicts);
      out["oracle_agrees"] = o.verdicts == comb.verdicts();
    }
    return out;
  }, py::arg("system"), py::arg("result"), py::arg("oracle") = false, py::arg("grid_limit") = kDefaultGridLimit,
        "Verdicts of the combinatorial verifier, and of the grid oracle when requested");
  m.def("independence", [](const ColumnSystem& s, const TowerResult& r, const std::string& kind) {
    const auto rep = verify_independence(s, r.params, rung_set(r, kind_from(kind)), kind);
    py::dict d;
    d["measure"] = rep.measure;
    d["intersection"] = rep.intersection;
    d["expected"] = rep.expected;
    d["independent"] = rep.independent();
    return d;
  }, py::arg("system"), py::arg("result"), py::arg("kind") = "B");

  m.def("render_ascii", [](const ColumnSystem& s, const TowerResult* r, std::optional<std::string> column,
                           std::optional<int> block, std::optional<std::string> levels, int subcolumns) {
    return render_ascii(s, r, render_options(std::move(column), block, std::move(levels), subcolumns, s));
  }, py::arg("system"), py::arg("result") = nullptr, py::arg("column") = py::none(), py::arg("block") = py::none(),
        py::arg("levels") = py::none(), py::arg("subcolumns") = 1);
  m.def("render_svg", [](const ColumnSystem& s, const TowerResult* r, std::optional<std::string> column,
                         std::optional<int> block, std::optional<std::string> levels, int subcolumns) {
    return render_svg(s, r, render_options(std::move(column), block, std::move(levels), subcolumns, s));
  }, py::arg("system"), py::arg("result") = nullptr, py::arg("column") = py::none(), py::arg("block") = py::none(),
        py::arg("levels") = py::none(), py::arg("subcolumns") = 1);
}
