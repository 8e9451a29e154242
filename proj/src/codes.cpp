#include "gridcode/codes.hpp"

#include <algorithm>
#include <array>
#include <iterator>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gridcode/construct.hpp"

namespace gridcode {

namespace {

using nlohmann::json;

std::string join_ids(const std::vector<NodeId>& ids, char sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(ids[i]);
  }
  return out;
}

std::string failure_text(const MonitorInstance& m, const VerificationReport& r) {
  std::ostringstream out;
  out << "selection is not a discriminating code:";
  for (std::size_t i : r.empty) out << ' ' << m.targets()[i].name << " unobserved;";
  for (const auto& [a, b] : r.collisions) {
    out << ' ' << m.targets()[a].name << " and " << m.targets()[b].name
        << " share a trace;";
  }
  std::string s = out.str();
  s.pop_back();
  return s;
}

// Spreadsheet labels sort A..Z, AA, AB, ...: by length, then text.
std::vector<Label> ordered(const Signature& s) {
  std::vector<Label> out(s.begin(), s.end());
  std::sort(out.begin(), out.end(), [](const Label& a, const Label& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

std::vector<NodeId> sites_of(const Placement& p, const Signature& s) {
  std::vector<NodeId> out;
  for (const Label& l : s) out.push_back(p.site_of(l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Label label_for(std::size_t index) {
  Label out;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return out;
}

Signature parse_signature(std::string_view text) {
  Signature out;
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return out;
  if (text.find(',') == std::string_view::npos) {
    for (char c : text) out.insert(Label(1, c));
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view part = trim(text.substr(start, end - start));
    if (!part.empty()) out.insert(Label(part));
    start = end + 1;
  }
  return out;
}

std::string format_signature(const Signature& s) {
  const bool single = std::all_of(s.begin(), s.end(),
                                  [](const Label& l) { return l.size() == 1; });
  std::vector<Label> sorted = ordered(s);
  std::string out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i && !single) out += ',';
    out += sorted[i];
  }
  return out;
}

const Label& Placement::label_of(NodeId site) const {
  auto it = std::lower_bound(sites_.begin(), sites_.end(), site);
  if (it == sites_.end() || *it != site) {
    throw NotFound("site " + std::to_string(site) + " is not in the placement");
  }
  return labels_[static_cast<std::size_t>(it - sites_.begin())];
}

NodeId Placement::site_of(const Label& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw NotFound("unknown label '" + label + "'");
  return sites_[static_cast<std::size_t>(it - labels_.begin())];
}

Placement assign_codes(const MonitorInstance& m, const std::vector<NodeId>& selected) {
  std::vector<NodeId> sites(selected);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  std::vector<Label> labels;
  for (std::size_t i = 0; i < sites.size(); ++i) labels.push_back(label_for(i));
  return assign_codes(m, sites, labels);
}

Placement assign_codes(const MonitorInstance& m, const std::vector<NodeId>& selected,
                       const std::vector<Label>& labels) {
  std::vector<NodeId> sites(selected);
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  if (labels.size() != sites.size()) {
    throw ConfigError("expected " + std::to_string(sites.size()) + " labels, got " +
                      std::to_string(labels.size()));
  }
  std::set<Label> seen;
  for (const Label& l : labels) {
    if (l.empty() || !seen.insert(l).second) {
      throw ConfigError("labels must be non-empty and unique");
    }
  }
  VerificationReport report = verify(m, sites);
  if (!report.passed()) {
    std::string what = failure_text(m, report);
    throw NotACode(std::move(report), what);
  }

  Placement p;
  p.instance_ = m;
  p.sites_ = std::move(sites);
  p.labels_ = labels;
  for (const auto& trace : report.traces) {
    Signature sig;
    for (NodeId site : trace) sig.insert(p.label_of(site));
    p.signatures_.push_back(std::move(sig));
  }
  return p;
}

DecodeResult decode(const Placement& p, const Signature& raised) {
  for (const Label& l : raised) (void)p.site_of(l);
  DecodeResult result;
  std::size_t best = static_cast<std::size_t>(-1);
  for (std::size_t t = 0; t < p.signatures().size(); ++t) {
    const Signature& sig = p.signature(t);
    if (sig == raised) {
      result.target = t;
      result.nearest.clear();
      return result;
    }
    std::vector<Label> diff;
    std::set_symmetric_difference(sig.begin(), sig.end(), raised.begin(), raised.end(),
                                  std::back_inserter(diff));
    if (diff.size() < best) {
      best = diff.size();
      result.nearest.clear();
    }
    if (diff.size() == best) result.nearest.push_back({t, diff.size()});
  }
  return result;
}

std::string describe(const Placement& p, const DecodeResult& r) {
  const auto& targets = p.instance().targets();
  if (r.identified()) return "Identified(" + targets[*r.target].name + ")";
  std::string out = "NoMatch";
  if (!r.nearest.empty()) {
    out += ": nearest";
    for (const NearMiss& n : r.nearest) {
      out += " " + targets[n.target].name + " [" +
             format_signature(p.signature(n.target)) + "]";
    }
    out += " at distance " + std::to_string(r.nearest.front().distance);
  }
  return out;
}

std::string signature_table(const Placement& p) {
  const auto& targets = p.instance().targets();
  if (targets.empty()) return {};
  std::vector<std::array<std::string, 3>> rows;
  rows.push_back({"target", "signature", "sites"});
  std::size_t w0 = rows[0][0].size(), w1 = rows[0][1].size();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    rows.push_back({targets[t].name, format_signature(p.signature(t)),
                    join_ids(sites_of(p, p.signature(t)), ' ')});
    w0 = std::max(w0, rows.back()[0].size());
    w1 = std::max(w1, rows.back()[1].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    out << r[0] << std::string(w0 - r[0].size() + 2, ' ') << r[1]
        << std::string(w1 - r[1].size() + 2, ' ') << r[2] << '\n';
  }
  return out.str();
}

std::string signature_csv(const Placement& p) {
  // Labels in a signature never contain commas; the sites field is
  // space-separated.
  std::ostringstream out;
  out << "target,name,signature,sites\n";
  const auto& targets = p.instance().targets();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    std::string sig;
    for (const Label& l : ordered(p.signature(t))) sig += (sig.empty() ? "" : " ") + l;
    out << targets[t].id << ',' << targets[t].name << ',' << sig << ','
        << join_ids(sites_of(p, p.signature(t)), ' ') << '\n';
  }
  return out.str();
}

std::string write_placement(const Placement& p) {
  json doc;
  doc["schema_version"] = kPlacementSchemaVersion;
  doc["instance"] = json::parse(write_monitor(p.instance()));
  doc["sites"] = p.sites();
  doc["labels"] = p.labels();
  return doc.dump(2) + "\n";
}

Placement read_placement(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed placement document: ") + e.what());
  }
  std::vector<NodeId> sites;
  std::vector<Label> labels;
  std::string instance_text;
  try {
    if (!doc.is_object()) throw ParseError("placement document must be an object");
    for (const auto& item : doc.items()) {
      const auto& key = item.key();
      if (key != "schema_version" && key != "instance" && key != "sites" &&
          key != "labels") {
        throw ParseError("unknown field '" + key + "' in placement document");
      }
    }
    if (doc.at("schema_version").get<int>() != kPlacementSchemaVersion) {
      throw ParseError("unsupported placement schema version");
    }
    instance_text = doc.at("instance").dump();
    sites = doc.at("sites").get<std::vector<NodeId>>();
    if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<Label>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid placement document: ") + e.what());
  }
  MonitorInstance m = read_monitor(instance_text);
  if (labels.empty()) return assign_codes(m, sites);
  return assign_codes(m, sites, labels);
}

}  // namespace gridcode
