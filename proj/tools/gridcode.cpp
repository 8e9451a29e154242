// gridcode: sensor placement for transformer monitoring.
//
//   ingest     MATPOWER case -> native grid file
//   build      grid -> monitor instance at reach k
//   solve      monitor instance -> sensor sites, signature table, LP file
//   table2     sensor counts over every bundled fixture
//   decode     placement + raised lamps -> failing transformer
//   snr        windowed SNR band of a measured or synthetic signal
//   demo       simulated failures, alarms and decoding end to end
//   export-lp  monitor instance -> CPLEX LP text

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gridcode/codes.hpp"
#include "gridcode/construct.hpp"
#include "gridcode/demo.hpp"
#include "gridcode/errors.hpp"
#include "gridcode/fixtures.hpp"
#include "gridcode/ingest.hpp"
#include "gridcode/report.hpp"
#include "gridcode/snr.hpp"
#include "gridcode/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gridcode;

namespace {

// One code per error class.
enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kConfig = 3,
  kParse = 4,
  kSchema = 5,
  kNotFound = 6,
  kInfeasible = 7,
  kTooLarge = 8,
  kNotACode = 9,
  kNoMatch = 10,
  kDegenerate = 11,
  kDomain = 12,
};

// A decode or demo run that ended without identifying the expected target.
struct Unidentified {
  std::string message;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("failed writing " + path);
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string join(const std::vector<NodeId>& ids) {
  std::string out;
  for (NodeId id : ids) {
    if (!out.empty()) out += ' ';
    out += std::to_string(id);
  }
  return out;
}

// Options shared by every subcommand that needs a monitor instance.
struct InstanceArgs {
  std::string grid;      // grid file or bundled fixture name
  std::string instance;  // monitor instance file
  int k = 2;
  std::string metric;    // empty: fixture default, else bus
  bool any_k = false;
  std::string data_dir;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--grid", a.grid, "Native grid file or bundled fixture name (e.g. ieee14)");
  cmd->add_option("--instance", a.instance, "Monitor instance file (replaces --grid)");
  cmd->add_option("--k", a.k, "Reach in hops")->capture_default_str();
  cmd->add_option("--metric", a.metric,
                  "Reach metric: node or bus (default: the fixture's, else bus)")
      ->check(CLI::IsMember({"node", "bus"}));
  cmd->add_flag("--any-k", a.any_k, "Allow k outside {1, 2}");
  cmd->add_option("--data-dir", a.data_dir, "Fixture directory (default: bundled data)");
}

std::string data_dir_of(const std::string& dir) {
  return dir.empty() ? default_data_dir() : dir;
}

struct LoadedGrid {
  GridGraph grid;
  ReachMetric metric = ReachMetric::BusDistance;
  std::string name;
};

LoadedGrid load_grid(const InstanceArgs& a) {
  LoadedGrid out;
  if (fs::is_regular_file(a.grid)) {
    out.grid = read_grid(read_text(a.grid));
    out.name = out.grid.name();
  } else {
    Fixture f;
    try {
      f = find_fixture(a.grid, data_dir_of(a.data_dir));
    } catch (const NotFound&) {
      throw ConfigError("no grid file or bundled fixture named '" + a.grid + "'");
    }
    out.grid = f.grid();
    out.metric = f.metric;
    out.name = f.name;
  }
  if (!a.metric.empty()) out.metric = parse_reach_metric(a.metric);
  return out;
}

ReachRule rule_of(const InstanceArgs& a, ReachMetric metric) {
  return ReachRule{a.k, metric, a.any_k};
}

struct LoadedInstance {
  MonitorInstance instance;
  std::string name;
};

LoadedInstance load_instance(const InstanceArgs& a) {
  if (!a.instance.empty() && !a.grid.empty()) {
    throw ConfigError("give either --grid or --instance, not both");
  }
  if (!a.instance.empty()) {
    MonitorInstance m = read_monitor(read_text(a.instance));
    return {std::move(m), fs::path(a.instance).stem().string()};
  }
  if (a.grid.empty()) throw ConfigError("one of --grid or --instance is required");
  LoadedGrid g = load_grid(a);
  MonitorInstance m = build_monitor(g.grid, enumerate_sites(g.grid), rule_of(a, g.metric));
  return {std::move(m), g.name};
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
  std::string case_path;
  std::string rule = "tap-ratio";
  std::vector<std::int64_t> rows;
  bool keep_parallel = false;
  std::string out;
};

int cmd_ingest(const IngestArgs& a) {
  TransformerRule rule;
  rule.mode = parse_transformer_mode(a.rule);
  rule.rows = a.rows;
  if (rule.mode != TransformerMode::ExplicitList && !a.rows.empty()) {
    throw ConfigError("--rows applies to the explicit-list rule only");
  }
  const CaseFile c = parse_case(read_text(a.case_path));
  BuildOptions options;
  options.merge_parallel = !a.keep_parallel;
  const GridGraph g = build_grid(c, rule, options);
  std::cout << "grid: " << g.name() << "\n"
            << "buses: " << g.buses().size() << "\n"
            << "lines: " << g.lines().size() << "\n"
            << "transformers: " << g.transformers().size() << "\n";
  if (!a.out.empty()) write_text(a.out, write_grid(g));
  return kOk;
}

// ---------------------------------------------------------------- build

int cmd_build(const InstanceArgs& a, const std::string& out) {
  if (a.grid.empty()) throw ConfigError("--grid is required");
  LoadedGrid g = load_grid(a);
  const auto sites = enumerate_sites(g.grid);
  const MonitorInstance m = build_monitor(g.grid, sites, rule_of(a, g.metric));
  std::cout << "grid: " << g.name << "\n"
            << "k: " << a.k << "\n"
            << "metric: " << to_string(g.metric) << "\n"
            << "targets: " << m.targets().size() << "\n"
            << "sites: " << m.candidates().size() << "\n"
            << "viable sites: " << m.viable_candidates().size() << "\n"
            << "edges: " << m.edge_count() << "\n";
  if (!out.empty()) write_text(out, write_monitor(m));
  return kOk;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  InstanceArgs in;
  std::string solver = "exact";
  std::size_t all_optima = 0;
  bool any_optimum = false;
  bool no_timing = false;
  std::string out;
  std::string table;
  std::string placement;
  std::string lp;
};

int cmd_solve(const SolveArgs& a) {
  const LoadedInstance li = load_instance(a.in);
  const MonitorInstance& m = li.instance;
  const SetCoverInstance sc = reduce(m);

  Solution s;
  if (a.solver == "exact") {
    ExactOptions options;
    if (a.any_optimum) options.tie_break = TieBreak::Any;
    s = solve_exact(sc, options);
  } else if (a.solver == "greedy") {
    s = solve_greedy(sc);
  } else {
    s = solve_bruteforce(sc);
  }
  const Placement p = assign_codes(m, s.selected);

  std::cout << "instance: " << li.name << " (k=" << m.k() << ", metric "
            << (m.metric().empty() ? "-" : m.metric()) << ")\n"
            << "targets: " << m.targets().size() << "\n"
            << "solver: " << a.solver << "\n"
            << "sensors: " << s.size() << "\n"
            << "optimal: " << (s.optimal ? "yes" : "unknown") << "\n"
            << "sites: " << join(s.selected) << "\n"
            << "nodes: " << s.stats.nodes << "\n";
  if (!a.no_timing) std::cout << "seconds: " << fixed(s.stats.seconds, 3) << "\n";
  std::cout << "\n" << signature_table(p);

  if (a.all_optima > 0) {
    const auto optima = enumerate_optima(sc, a.all_optima);
    std::cout << "\noptima (first " << a.all_optima << " in lexicographic order): "
              << optima.size() << "\n";
    for (const auto& o : optima) std::cout << "  " << join(o) << "\n";
  }

  if (!a.out.empty()) {
    json doc = {{"instance", li.name},
                {"k", m.k()},
                {"solver", a.solver},
                {"size", s.size()},
                {"optimal", s.optimal},
                {"sites", s.selected},
                {"nodes", s.stats.nodes}};
    if (!a.no_timing) doc["seconds"] = s.stats.seconds;
    write_text(a.out, doc.dump(2) + "\n");
  }
  if (!a.table.empty()) write_text(a.table, signature_csv(p));
  if (!a.placement.empty()) write_text(a.placement, write_placement(p));
  if (!a.lp.empty()) write_text(a.lp, export_lp(sc));
  return kOk;
}

// ---------------------------------------------------------------- table2

struct TableArgs {
  std::vector<std::string> only;
  std::string data_dir;
  std::string csv;
  bool lexicographic = false;
  bool no_timing = false;
};

int cmd_table2(const TableArgs& a) {
  std::vector<Fixture> fixtures;
  try {
    fixtures = load_fixtures(data_dir_of(a.data_dir));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("no fixtures: ") + e.what());
  }
  if (!a.only.empty()) {
    std::vector<Fixture> picked;
    for (const auto& name : a.only) {
      bool found = false;
      for (const auto& f : fixtures) {
        if (f.name == name) {
          picked.push_back(f);
          found = true;
        }
      }
      if (!found) throw ConfigError("no bundled fixture named '" + name + "'");
    }
    fixtures = std::move(picked);
  }
  ExactOptions options;
  options.tie_break = a.lexicographic ? TieBreak::Lexicographic : TieBreak::Any;
  const auto rows = summarize_fixtures(fixtures, options);
  std::cout << format_summary(rows, !a.no_timing);
  bool matches = true;
  for (const auto& r : rows) {
    if (r.transformers != r.reference.transformers) matches = false;
  }
  if (!matches) {
    std::cout << "note: some fixture transformer counts differ from the reference"
                 " table, so sensor counts there are not comparable:\n";
    for (const auto& r : rows) {
      if (r.transformers == r.reference.transformers) continue;
      std::cout << "  " << r.title << ": " << r.transformers << " transformers, reference "
                << r.reference.transformers << " (" << r.reference.k1 << "/"
                << r.reference.k2 << ")\n";
    }
  }
  if (!a.csv.empty()) write_text(a.csv, summary_csv(rows));
  return kOk;
}

// ---------------------------------------------------------------- decode

int cmd_decode(const std::string& placement, const std::string& alarms) {
  const Placement p = read_placement(read_text(placement));
  const DecodeResult r = decode(p, parse_signature(alarms));
  const std::string text = describe(p, r);
  if (!r.identified()) throw Unidentified{text};
  std::cout << text << "\n";
  return kOk;
}

// ---------------------------------------------------------------- snr

struct SnrArgs {
  std::string signal;
  std::string synth;
  bool synth_defaults = false;
  std::size_t window = kDefaultWindow;
  std::size_t stride = 0;
  std::optional<double> threshold;
  std::string out;
  std::string write_signal;
};

int cmd_snr(const SnrArgs& a) {
  if (a.signal.empty() == (a.synth.empty() && !a.synth_defaults)) {
    throw ConfigError("give exactly one of --signal, --synth or --synth-defaults");
  }
  std::vector<double> samples;
  double rate = 30.0;
  if (!a.signal.empty()) {
    samples = read_signal_csv(read_text(a.signal));
  } else {
    const SynthSpec spec = a.synth.empty() ? SynthSpec{} : parse_synth_spec(read_text(a.synth));
    rate = spec.rate;
    samples = synth_signal(spec);
  }
  if (!a.write_signal.empty()) write_text(a.write_signal, write_signal_csv(samples, rate));
  const SnrSeries s = snr_series(samples, a.window, a.stride);
  std::cout << "samples: " << samples.size() << "\n"
            << "windows: " << s.values.size() << " (length " << s.window_len << ", stride "
            << s.stride << ")\n"
            << "band width: " << fixed(s.band_width, 6) << " dB\n"
            << "band sigma: " << fixed(s.band_sigma, 6) << " dB\n";
  if (a.threshold) {
    std::cout << "alarm: " << (alarm(s, *a.threshold) ? "yes" : "no") << " (threshold "
              << fixed(*a.threshold, 6) << " dB)\n";
  }
  if (!a.out.empty()) write_text(a.out, write_series_csv(s));
  return kOk;
}

// ---------------------------------------------------------------- demo

struct DemoArgs {
  InstanceArgs in;
  std::vector<std::string> inject;
  std::string synth;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
};

int cmd_demo(DemoArgs a) {
  if (a.in.grid.empty()) a.in.grid = "ieee14";
  const LoadedGrid g = load_grid(a.in);
  const MonitorInstance m =
      build_monitor(g.grid, enumerate_sites(g.grid), rule_of(a.in, g.metric));
  const Solution s = solve_exact(reduce(m));
  const Placement p = assign_codes(m, s.selected);

  DemoConfig config;
  if (!a.synth.empty()) config.signal = parse_synth_spec(read_text(a.synth));
  if (a.threshold) config.threshold = *a.threshold;
  if (a.seed) config.signal.seed = *a.seed;

  std::vector<std::size_t> targets;
  if (a.inject.empty()) {
    for (std::size_t t = 0; t < m.targets().size(); ++t) targets.push_back(t);
  } else {
    for (const auto& name : a.inject) {
      bool found = false;
      for (std::size_t t = 0; t < m.targets().size(); ++t) {
        if (m.targets()[t].name == name) {
          targets.push_back(t);
          found = true;
        }
      }
      if (!found) throw ConfigError("no transformer named '" + name + "'");
    }
  }

  std::cout << "grid: " << g.name << " (k=" << m.k() << ", metric " << to_string(g.metric)
            << ")\n"
            << "sensors: " << p.sites().size() << "\n";
  for (std::size_t i = 0; i < p.sites().size(); ++i) {
    std::cout << "  lamp " << p.labels()[i] << " at site " << p.sites()[i] << "\n";
  }
  std::cout << "threshold: " << fixed(config.threshold, 2) << " dB\n\n"
            << signature_table(p);

  std::size_t correct = 0;
  std::string failures;
  for (std::size_t t : targets) {
    const DemoRun run = run_demo(g.grid, p, g.metric, t, config);
    const std::string& name = m.targets()[t].name;
    std::cout << "\ninject " << name << "\n";
    for (const auto& r : run.readings) {
      std::cout << "  lamp " << r.label << ": hop " << r.hop << ", band width "
                << fixed(r.band_width, 3) << " dB -> " << (r.alarm ? "red" : "green") << "\n";
    }
    std::cout << "  alarms: {" << format_signature(run.raised) << "}\n"
              << "  " << describe(p, run.result) << "\n";
    if (run.correct()) {
      ++correct;
    } else {
      failures += " " + name;
    }
  }
  std::cout << "\ncorrect: " << correct << "/" << targets.size() << "\n";
  if (correct != targets.size()) throw Unidentified{"misidentified:" + failures};
  return kOk;
}

// ---------------------------------------------------------------- export-lp

int cmd_export_lp(const InstanceArgs& a, const std::string& out) {
  const LoadedInstance li = load_instance(a);
  const SetCoverInstance sc = reduce(li.instance);
  std::size_t cover = 0;
  for (const auto& e : sc.universe) cover += e.kind == ElementKind::Cover;
  const std::string lp = export_lp(sc);
  if (out != "-") {
    std::cout << "instance: " << li.name << " (k=" << li.instance.k() << ")\n"
              << "coloring rows: " << cover << "\n"
              << "unique-coloring rows: " << sc.universe.size() - cover << "\n"
              << "binaries: " << sc.candidate_ids.size() << "\n";
  }
  write_text(out, lp);
  return kOk;
}

int run(int argc, char** argv) {
  CLI::App app{"Sensor placement for transformer failure identification"};
  app.set_config("--config", "", "TOML config file; command-line flags override it");
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Parse a MATPOWER case into a grid file");
  c_ingest->add_option("--case", ingest.case_path, "MATPOWER case file")->required();
  c_ingest->add_option("--rule", ingest.rule, "tap-ratio, voltage-mismatch or explicit-list")
      ->capture_default_str();
  c_ingest->add_option("--rows", ingest.rows, "Branch rows (1-based) for explicit-list")
      ->delimiter(',');
  c_ingest->add_flag("--keep-parallel", ingest.keep_parallel, "Keep parallel lines apart");
  c_ingest->add_option("--out", ingest.out, "Grid file to write ('-' for stdout)");

  InstanceArgs build;
  std::string build_out;
  auto* c_build = app.add_subcommand("build", "Build the monitor instance of a grid");
  add_instance_options(c_build, build);
  c_build->add_option("--out", build_out, "Monitor instance file to write ('-' for stdout)");

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Place sensors and print the signature table");
  add_instance_options(c_solve, solve.in);
  c_solve->add_option("--solver", solve.solver, "exact, greedy or bruteforce")
      ->check(CLI::IsMember({"exact", "greedy", "bruteforce"}))
      ->capture_default_str();
  c_solve->add_option("--all-optima", solve.all_optima,
                      "Also list up to N optimal site sets in lexicographic order");
  c_solve->add_flag("--any-optimum", solve.any_optimum,
                    "Return any optimum instead of the lexicographically smallest");
  c_solve->add_flag("--no-timing", solve.no_timing, "Omit wall time from all output");
  c_solve->add_option("--out", solve.out, "Solution JSON file");
  c_solve->add_option("--table", solve.table, "Signature table CSV file");
  c_solve->add_option("--placement", solve.placement, "Placement file for decode");
  c_solve->add_option("--export-lp", solve.lp, "Also write the integer program as LP text");

  TableArgs table;
  auto* c_table = app.add_subcommand("table2", "Sensor counts for every bundled fixture");
  c_table->add_option("--only", table.only, "Restrict to these fixture names")
      ->delimiter(',');
  c_table->add_option("--data-dir", table.data_dir, "Fixture directory");
  c_table->add_option("--csv", table.csv, "Summary CSV file");
  c_table->add_flag("--lexicographic", table.lexicographic,
                    "Compute lexicographically smallest optima (slower)");
  c_table->add_flag("--no-timing", table.no_timing, "Omit wall times");

  std::string placement, alarms;
  auto* c_decode = app.add_subcommand("decode", "Name the transformer behind a lamp pattern");
  c_decode->add_option("--placement", placement, "Placement file from solve")->required();
  c_decode->add_option("--alarms", alarms, "Raised lamps, e.g. AC or A,C")->required();

  SnrArgs snr;
  auto* c_snr = app.add_subcommand("snr", "SNR band of a signal");
  c_snr->add_option("--signal", snr.signal, "Two-column CSV (timestamp, value)");
  c_snr->add_option("--synth", snr.synth, "Synthetic generator config (JSON)");
  c_snr->add_flag("--synth-defaults", snr.synth_defaults,
                  "Synthesize with the default generator config");
  c_snr->add_option("--window", snr.window, "Window length in samples")->capture_default_str();
  c_snr->add_option("--stride", snr.stride, "Window stride (default: window length)");
  c_snr->add_option("--threshold", snr.threshold, "Alarm threshold on band width (dB)");
  c_snr->add_option("--out", snr.out, "SNR series CSV file");
  c_snr->add_option("--write-signal", snr.write_signal, "Write the analysed signal as CSV");

  DemoArgs demo;
  demo.in.k = 2;
  auto* c_demo = app.add_subcommand("demo", "Simulate transformer failures and decode alarms");
  add_instance_options(c_demo, demo.in);
  c_demo->add_option("--inject", demo.inject, "Transformers to fail (default: each in turn)")
      ->delimiter(',');
  c_demo->add_option("--synth", demo.synth, "Generator config (JSON) for sensor signals");
  c_demo->add_option("--threshold", demo.threshold, "Alarm threshold on band width (dB)");
  c_demo->add_option("--seed", demo.seed, "Base noise seed");

  InstanceArgs lp;
  std::string lp_out = "-";
  auto* c_lp = app.add_subcommand("export-lp", "Write the integer program as CPLEX LP text");
  add_instance_options(c_lp, lp);
  c_lp->add_option("--out", lp_out, "LP file ('-' for stdout)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (c_ingest->parsed()) return cmd_ingest(ingest);
  if (c_build->parsed()) return cmd_build(build, build_out);
  if (c_solve->parsed()) return cmd_solve(solve);
  if (c_table->parsed()) return cmd_table2(table);
  if (c_decode->parsed()) return cmd_decode(placement, alarms);
  if (c_snr->parsed()) return cmd_snr(snr);
  if (c_demo->parsed()) return cmd_demo(demo);
  if (c_lp->parsed()) return cmd_export_lp(lp, lp_out);
  return kUsage;
}

int fail(int code, const char* kind, const std::string& what) {
  std::cout.flush();
  std::cerr << "error (" << kind << "): " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Unidentified& e) {
    return fail(kNoMatch, "no match", e.message);
  } catch (const Infeasible& e) {
    return fail(kInfeasible, "infeasible", e.what());
  } catch (const NotACode& e) {
    return fail(kNotACode, "not a code", e.what());
  } catch (const NoMatch& e) {
    return fail(kNoMatch, "no match", e.what());
  } catch (const ParseError& e) {
    return fail(kParse, "parse", e.what());
  } catch (const SchemaError& e) {
    return fail(kSchema, "schema", e.what());
  } catch (const NotFound& e) {
    return fail(kNotFound, "not found", e.what());
  } catch (const ConfigError& e) {
    return fail(kConfig, "config", e.what());
  } catch (const TooLarge& e) {
    return fail(kTooLarge, "too large", e.what());
  } catch (const DegenerateSignal& e) {
    return fail(kDegenerate, "degenerate signal", e.what());
  } catch (const DomainError& e) {
    return fail(kDomain, "domain", e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, "internal", e.what());
  }
}
