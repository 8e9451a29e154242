#include <algorithm>
#include <iterator>
#include <map>
#include <sstream>

#include "gridcode/solver.hpp"

namespace gridcode {

SetCoverInstance reduce(const MonitorInstance& m) {
  SetCoverInstance sc;
  sc.candidate_ids.reserve(m.candidates().size());
  for (const Candidate& c : m.candidates()) sc.candidate_ids.push_back(c.id);
  for (const Target& t : m.targets()) sc.target_names.push_back(t.name);

  const std::size_t n = m.targets().size();
  std::vector<std::vector<std::size_t>> observed_by(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId c : m.observers_of(i)) observed_by[i].push_back(m.candidate_index(c));
    std::sort(observed_by[i].begin(), observed_by[i].end());
  }

  sc.columns.assign(sc.candidate_ids.size(), {});
  auto add = [&](const Element& e, const std::vector<std::size_t>& support) {
    const std::size_t index = sc.universe.size();
    sc.universe.push_back(e);
    for (std::size_t col : support) sc.columns[col].push_back(index);
  };
  for (std::size_t j = 0; j < n; ++j) add({ElementKind::Cover, j, j}, observed_by[j]);
  std::vector<std::size_t> diff;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      diff.clear();
      std::set_symmetric_difference(observed_by[j].begin(), observed_by[j].end(),
                                    observed_by[k].begin(), observed_by[k].end(),
                                    std::back_inserter(diff));
      add({ElementKind::Discriminate, j, k}, diff);
    }
  }
  return sc;
}

std::string FeasibilityReport::describe() const {
  if (feasible()) return "feasible";
  auto name = [&](std::size_t i) {
    return i < target_names.size() ? target_names[i] : "#" + std::to_string(i);
  };
  std::ostringstream out;
  if (!unobservable.empty()) {
    out << "unobservable";
    for (std::size_t i : unobservable) out << ' ' << name(i);
  }
  if (!twins.empty()) {
    if (!unobservable.empty()) out << "; ";
    out << "twins";
    for (const auto& [a, b] : twins) out << ' ' << name(a) << '/' << name(b);
  }
  return out.str();
}

FeasibilityReport check_feasible(const SetCoverInstance& sc) {
  std::vector<char> supported(sc.universe.size(), 0);
  for (const auto& col : sc.columns) {
    for (std::size_t e : col) supported[e] = 1;
  }
  FeasibilityReport report;
  report.target_names = sc.target_names;
  for (std::size_t e = 0; e < sc.universe.size(); ++e) {
    if (supported[e]) continue;
    const Element& el = sc.universe[e];
    if (el.kind == ElementKind::Cover) {
      report.unobservable.push_back(el.first);
    } else {
      report.twins.emplace_back(el.first, el.second);
    }
  }
  return report;
}

bool covers(const SetCoverInstance& sc, const std::vector<NodeId>& selected) {
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < sc.candidate_ids.size(); ++i) index[sc.candidate_ids[i]] = i;
  std::vector<char> hit(sc.universe.size(), 0);
  for (NodeId id : selected) {
    auto it = index.find(id);
    if (it == index.end()) throw NotFound("unknown candidate id " + std::to_string(id));
    for (std::size_t e : sc.columns[it->second]) hit[e] = 1;
  }
  return std::all_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
}

VerificationReport verify(const MonitorInstance& m,
                          const std::vector<NodeId>& selected) {
  std::vector<NodeId> chosen(selected);
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  for (NodeId id : chosen) (void)m.candidate_index(id);

  VerificationReport report;
  for (std::size_t i = 0; i < m.targets().size(); ++i) {
    std::vector<NodeId> trace;
    const auto& obs = m.observers_of(i);
    std::set_intersection(obs.begin(), obs.end(), chosen.begin(), chosen.end(),
                          std::back_inserter(trace));
    if (trace.empty()) report.empty.push_back(i);
    report.traces.push_back(std::move(trace));
  }
  std::map<std::vector<NodeId>, std::size_t> first_seen;
  for (std::size_t i = 0; i < report.traces.size(); ++i) {
    if (report.traces[i].empty()) continue;
    auto [it, inserted] = first_seen.emplace(report.traces[i], i);
    if (!inserted) report.collisions.emplace_back(it->second, i);
  }
  return report;
}

std::string export_lp(const SetCoverInstance& sc) {
  constexpr std::size_t kTermsPerLine = 12;
  std::ostringstream out;
  auto var = [&](std::size_t col) { return "x" + std::to_string(sc.candidate_ids[col]); };
  auto name = [&](std::size_t t) {
    std::string s = sc.target_names[t];
    for (char& c : s) {
      if (c == ' ' || c == ':' || c == '+' || c == '-') c = '_';
    }
    return s;
  };

  out << "\\ discriminating-code covering ILP: " << sc.target_count() << " targets, "
      << sc.candidate_ids.size() << " candidates\n";
  out << "Minimize\n sensors:";
  for (std::size_t c = 0; c < sc.candidate_ids.size(); ++c) {
    if (c && c % kTermsPerLine == 0) out << "\n  ";
    out << (c ? " + " : " ") << var(c);
  }
  out << "\nSubject To\n";

  std::vector<std::vector<std::size_t>> support(sc.universe.size());
  for (std::size_t c = 0; c < sc.columns.size(); ++c) {
    for (std::size_t e : sc.columns[c]) support[e].push_back(c);
  }
  for (std::size_t e = 0; e < sc.universe.size(); ++e) {
    const Element& el = sc.universe[e];
    if (el.kind == ElementKind::Cover) {
      out << " color_" << name(el.first) << ":";
    } else {
      out << " unique_" << name(el.first) << "_" << name(el.second) << ":";
    }
    if (support[e].empty()) {
      // Twin or unobservable target: the row is written unsatisfiable.
      out << " 0 " << (sc.candidate_ids.empty() ? "x0" : var(0));
    }
    for (std::size_t i = 0; i < support[e].size(); ++i) {
      if (i && i % kTermsPerLine == 0) out << "\n  ";
      out << (i ? " + " : " ") << var(support[e][i]);
    }
    out << " >= 1\n";
  }
  out << "Binaries\n";
  for (std::size_t c = 0; c < sc.candidate_ids.size(); ++c) {
    out << (c % kTermsPerLine == 0 ? (c ? "\n " : " ") : " ") << var(c);
  }
  out << "\nEnd\n";
  return out.str();
}

}  // namespace gridcode
