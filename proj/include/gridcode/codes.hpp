#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gridcode/errors.hpp"
#include "gridcode/graph.hpp"
#include "gridcode/solver.hpp"

namespace gridcode {

using Label = std::string;
using Signature = std::set<Label>;

class NotACode : public Error {
 public:
  explicit NotACode(VerificationReport report, const std::string& what)
      : Error(what), report_(std::move(report)) {}
  const VerificationReport& report() const { return report_; }

 private:
  VerificationReport report_;
};

class NoMatch : public Error {
 public:
  using Error::Error;
};

// 0 -> A, 25 -> Z, 26 -> AA, 27 -> AB, ...
Label label_for(std::size_t index);

// "AC" -> {A, C}; "A,BC" -> {A, BC}. Single letters concatenate only when no
// comma is present.
Signature parse_signature(std::string_view text);
// {A, C} -> "AC" when every label is one letter, otherwise "A,AA".
std::string format_signature(const Signature& s);

class Placement {
 public:
  const MonitorInstance& instance() const { return instance_; }
  const std::vector<NodeId>& sites() const { return sites_; }
  const std::vector<Label>& labels() const { return labels_; }
  // One signature per target, in target order.
  const std::vector<Signature>& signatures() const { return signatures_; }
  const Signature& signature(std::size_t target_index) const {
    return signatures_.at(target_index);
  }
  const Label& label_of(NodeId site) const;
  NodeId site_of(const Label& label) const;  // NotFound

 private:
  friend Placement assign_codes(const MonitorInstance&, const std::vector<NodeId>&);
  friend Placement assign_codes(const MonitorInstance&, const std::vector<NodeId>&,
                                const std::vector<Label>&);
  MonitorInstance instance_;
  std::vector<NodeId> sites_;
  std::vector<Label> labels_;
  std::vector<Signature> signatures_;
};

// Sites are sorted ascending and labelled A, B, ... in that order. The
// placement keeps its own copy of `m`. Throws NotACode when verify fails.
Placement assign_codes(const MonitorInstance& m, const std::vector<NodeId>& selected);
// Same, with caller-supplied labels (one per site, in ascending site order).
Placement assign_codes(const MonitorInstance& m, const std::vector<NodeId>& selected,
                       const std::vector<Label>& labels);

struct NearMiss {
  std::size_t target = 0;
  std::size_t distance = 0;  // Hamming distance between label sets
};

struct DecodeResult {
  std::optional<std::size_t> target;  // set when identified
  std::vector<NearMiss> nearest;      // ties at the minimum distance, target order

  bool identified() const { return target.has_value(); }
};

// Identified when `raised` equals one signature exactly. Throws NotFound for
// labels the placement does not use.
DecodeResult decode(const Placement& p, const Signature& raised);
std::string describe(const Placement& p, const DecodeResult& r);

// Aligned text table: target, signature, sites.
std::string signature_table(const Placement& p);
// target,name,signature,sites
std::string signature_csv(const Placement& p);

// Placement file: the monitor instance plus the selected sites and labels.
std::string write_placement(const Placement& p);
// Re-verifies the stored sites. Throws ParseError or NotACode.
Placement read_placement(std::string_view text);

inline constexpr int kPlacementSchemaVersion = 1;

}  // namespace gridcode
