#include "gridcode/report.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "gridcode/errors.hpp"

namespace gridcode {

double savings_percent(std::size_t transformers, std::size_t sensors) {
  if (transformers == 0) return 0.0;
  return 100.0 * (static_cast<double>(transformers) - static_cast<double>(sensors)) /
         static_cast<double>(transformers);
}

std::vector<SummaryRow> summarize_fixtures(const std::vector<Fixture>& fixtures,
                                           const ExactOptions& options) {
  std::vector<SummaryRow> rows;
  for (const Fixture& f : fixtures) {
    if (!std::filesystem::exists(f.case_path)) {
      throw ConfigError("fixture " + f.name + " is missing its case file " + f.case_path);
    }
    const GridGraph g = f.grid();
    const auto sites = enumerate_sites(g);
    SummaryRow row;
    row.name = f.name;
    row.title = f.title;
    row.transformers = g.transformers().size();
    row.reference = f.reference;
    for (int k = 1; k <= 2; ++k) {
      const MonitorInstance m = build_monitor(g, sites, ReachRule{k, f.metric});
      const Solution s = solve_exact(reduce(m), options);
      row.sensors[k - 1] = s.size();
      row.seconds[k - 1] = s.stats.seconds;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

std::string format_summary(const std::vector<SummaryRow>& rows, bool timing) {
  std::ostringstream out;
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.title.size());
  auto cell = [&](const std::string& s, std::size_t w) {
    out << std::setw(static_cast<int>(w)) << s;
  };
  out << std::left << std::setw(static_cast<int>(width)) << "system" << std::right;
  cell("trans", 7);
  cell("k=1", 6);
  cell("k=2", 6);
  cell("save1%", 9);
  cell("save2%", 9);
  cell("ref", 14);
  if (timing) {
    cell("t1 s", 10);
    cell("t2 s", 10);
  }
  out << '\n';
  double total[2] = {0.0, 0.0};
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width)) << r.title << std::right;
    cell(std::to_string(r.transformers), 7);
    cell(std::to_string(r.sensors[0]), 6);
    cell(std::to_string(r.sensors[1]), 6);
    for (int k = 0; k < 2; ++k) {
      const double pct = savings_percent(r.transformers, r.sensors[k]);
      total[k] += pct;
      cell(fixed(pct, 2), 9);
    }
    cell(std::to_string(r.reference.transformers) + ":" + std::to_string(r.reference.k1) +
             "/" + std::to_string(r.reference.k2),
         14);
    if (timing) {
      cell(fixed(r.seconds[0], 3), 10);
      cell(fixed(r.seconds[1], 3), 10);
    }
    out << '\n';
  }
  if (!rows.empty()) {
    const double n = static_cast<double>(rows.size());
    out << "average savings: k=1 " << fixed(total[0] / n, 2) << "%, k=2 "
        << fixed(total[1] / n, 2) << "%\n";
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "name,transformers,k1,k2,savings_k1,savings_k2,seconds_k1,seconds_k2\n";
  for (const auto& r : rows) {
    out << r.name << ',' << r.transformers << ',' << r.sensors[0] << ',' << r.sensors[1]
        << ',' << fixed(savings_percent(r.transformers, r.sensors[0]), 2) << ','
        << fixed(savings_percent(r.transformers, r.sensors[1]), 2) << ','
        << fixed(r.seconds[0], 6) << ',' << fixed(r.seconds[1], 6) << '\n';
  }
  return out.str();
}

}  // namespace gridcode
