#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gridcode/codes.hpp"
#include "gridcode/construct.hpp"
#include "gridcode/demo.hpp"
#include "gridcode/errors.hpp"
#include "gridcode/fixtures.hpp"
#include "gridcode/ingest.hpp"
#include "gridcode/snr.hpp"
#include "gridcode/solver.hpp"

namespace py = pybind11;
using namespace gridcode;

namespace {

Solution solve(const MonitorInstance& m, const std::string& solver, bool any_optimum) {
  const SetCoverInstance sc = reduce(m);
  if (solver == "exact") {
    ExactOptions options;
    options.tie_break = any_optimum ? TieBreak::Any : TieBreak::Lexicographic;
    return solve_exact(sc, options);
  }
  if (solver == "greedy") return solve_greedy(sc);
  if (solver == "bruteforce") return solve_bruteforce(sc);
  throw ConfigError("unknown solver '" + solver + "'");
}

py::dict report_dict(const VerificationReport& r) {
  py::dict d;
  d["passed"] = r.passed();
  d["traces"] = r.traces;
  d["empty"] = r.empty;
  d["collisions"] = r.collisions;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discriminating-code sensor placement for power grids";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<NotFound>(m, "NotFound", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<TooLarge>(m, "TooLarge", error.ptr());
  py::register_exception<Infeasible>(m, "Infeasible", error.ptr());
  py::register_exception<NotACode>(m, "NotACode", error.ptr());
  py::register_exception<NoMatch>(m, "NoMatch", error.ptr());
  py::register_exception<DegenerateSignal>(m, "DegenerateSignal", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());

  py::class_<Transformer>(m, "Transformer")
      .def_readonly("id", &Transformer::id)
      .def_readonly("name", &Transformer::name)
      .def_readonly("branch", &Transformer::branch)
      .def_readonly("from_bus", &Transformer::from)
      .def_readonly("to_bus", &Transformer::to)
      .def("__repr__", [](const Transformer& t) {
        return "<Transformer " + t.name + " " + std::to_string(t.from) + "-" +
               std::to_string(t.to) + ">";
      });

  py::class_<GridGraph>(m, "Grid")
      .def_property_readonly("name", &GridGraph::name)
      .def_property_readonly("buses",
                             [](const GridGraph& g) {
                               std::vector<NodeId> ids;
                               for (const Bus& b : g.buses()) ids.push_back(b.id);
                               return ids;
                             })
      .def_property_readonly("transformers", &GridGraph::transformers)
      .def_property_readonly("line_count", [](const GridGraph& g) { return g.lines().size(); })
      .def("to_json", &write_grid)
      .def_static("from_json", [](const std::string& text) { return read_grid(text); });

  m.def(
      "load_grid",
      [](const std::string& path, const std::string& mode, bool merge_parallel) {
        TransformerRule rule;
        rule.mode = parse_transformer_mode(mode);
        return build_grid(load_case(path), rule, BuildOptions{merge_parallel});
      },
      py::arg("path"), py::arg("mode") = "tap-ratio", py::arg("merge_parallel") = true,
      "Parse a MATPOWER case file into a grid.");
  m.def(
      "fixture_grid", [](const std::string& name) { return find_fixture(name).grid(); },
      py::arg("name"), "Grid of a bundled benchmark, e.g. 'ieee14'.");
  m.def("fixture_names", [] {
    std::vector<std::string> names;
    for (const Fixture& f : load_fixtures()) names.push_back(f.name);
    return names;
  });

  py::class_<MonitorInstance>(m, "MonitorInstance")
      .def_property_readonly("k", &MonitorInstance::k)
      .def_property_readonly("targets",
                             [](const MonitorInstance& mi) {
                               std::vector<std::string> names;
                               for (const Target& t : mi.targets()) names.push_back(t.name);
                               return names;
                             })
      .def_property_readonly("candidates",
                             [](const MonitorInstance& mi) {
                               std::vector<NodeId> ids;
                               for (const Candidate& c : mi.candidates()) ids.push_back(c.id);
                               return ids;
                             })
      .def_property_readonly("observers", &MonitorInstance::observers)
      .def_property_readonly("viable", &MonitorInstance::viable_candidates)
      .def_property_readonly("edge_count", &MonitorInstance::edge_count)
      .def("to_json", &write_monitor)
      .def_static("from_json", [](const std::string& text) { return read_monitor(text); });

  m.def(
      "build_monitor",
      [](const GridGraph& g, int k, const std::string& metric, bool any_k) {
        return build_monitor(g, enumerate_sites(g),
                             ReachRule{k, parse_reach_metric(metric), any_k});
      },
      py::arg("grid"), py::arg("k") = 2, py::arg("metric") = "bus", py::arg("any_k") = false);

  m.def(
      "solve",
      [](const MonitorInstance& mi, const std::string& solver, bool any_optimum) {
        const Solution s = solve(mi, solver, any_optimum);
        py::dict d;
        d["selected"] = s.selected;
        d["optimal"] = s.optimal;
        d["nodes"] = s.stats.nodes;
        d["seconds"] = s.stats.seconds;
        return d;
      },
      py::arg("instance"), py::arg("solver") = "exact", py::arg("any_optimum") = false);
  m.def(
      "enumerate_optima",
      [](const MonitorInstance& mi, std::size_t limit) {
        return enumerate_optima(reduce(mi), limit);
      },
      py::arg("instance"), py::arg("limit") = 100);
  m.def(
      "verify",
      [](const MonitorInstance& mi, const std::vector<NodeId>& selected) {
        return report_dict(verify(mi, selected));
      },
      py::arg("instance"), py::arg("selected"));
  m.def(
      "export_lp", [](const MonitorInstance& mi) { return export_lp(reduce(mi)); },
      py::arg("instance"));

  py::class_<Placement>(m, "Placement")
      .def_property_readonly("sites", &Placement::sites)
      .def_property_readonly("labels", &Placement::labels)
      .def_property_readonly("signatures",
                             [](const Placement& p) {
                               std::vector<std::string> out;
                               for (const auto& s : p.signatures()) out.push_back(format_signature(s));
                               return out;
                             })
      .def("table", &signature_table)
      .def("to_json", &write_placement)
      .def_static("from_json", [](const std::string& text) { return read_placement(text); });

  m.def(
      "assign_codes",
      [](const MonitorInstance& mi, const std::vector<NodeId>& selected) {
        return assign_codes(mi, selected);
      },
      py::arg("instance"), py::arg("selected"));
  m.def(
      "decode",
      [](const Placement& p, const std::string& alarms) -> py::object {
        const DecodeResult r = decode(p, parse_signature(alarms));
        if (!r.identified()) return py::none();
        return py::str(p.instance().targets()[*r.target].name);
      },
      py::arg("placement"), py::arg("alarms"),
      "Name of the identified transformer, or None.");

  m.def("snr_db", &snr_db, py::arg("samples"));
  m.def(
      "snr_series",
      [](const std::vector<double>& signal, std::size_t window, std::size_t stride) {
        const SnrSeries s = snr_series(signal, window, stride);
        py::dict d;
        d["values"] = s.values;
        d["band_width"] = s.band_width;
        d["band_sigma"] = s.band_sigma;
        return d;
      },
      py::arg("signal"), py::arg("window") = kDefaultWindow, py::arg("stride") = 0);
  m.def(
      "synth_signal",
      [](int hop, std::uint64_t seed, double duration) {
        SynthSpec spec;
        spec.hop = hop;
        spec.seed = seed;
        spec.duration = duration;
        spec.failure_time = duration;
        return synth_signal(spec);
      },
      py::arg("hop") = 1, py::arg("seed") = 1, py::arg("duration") = 600.0);

  m.def(
      "run_demo",
      [](const GridGraph& g, const Placement& p, const std::string& transformer,
         const std::string& metric, double threshold) {
        std::size_t target = p.instance().targets().size();
        for (std::size_t t = 0; t < p.instance().targets().size(); ++t) {
          if (p.instance().targets()[t].name == transformer) target = t;
        }
        if (target == p.instance().targets().size()) {
          throw NotFound("unknown transformer '" + transformer + "'");
        }
        DemoConfig config;
        config.threshold = threshold;
        const DemoRun run = run_demo(g, p, parse_reach_metric(metric), target, config);
        py::dict d;
        d["alarms"] = format_signature(run.raised);
        d["identified"] = run.result.identified()
                              ? py::object(py::str(p.instance().targets()[*run.result.target].name))
                              : py::object(py::none());
        d["correct"] = run.correct();
        return d;
      },
      py::arg("grid"), py::arg("placement"), py::arg("transformer"), py::arg("metric") = "bus",
      py::arg("threshold") = 6.0);
}
