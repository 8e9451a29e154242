#pragma once

// Sensor-count summary over the bundled fixtures: transformer counts, exact
// sensor counts at k = 1 and k = 2, and savings against one sensor per
// transformer.

#include <cstddef>
#include <string>
#include <vector>

#include "gridcode/fixtures.hpp"
#include "gridcode/solver.hpp"

namespace gridcode {

struct SummaryRow {
  std::string name;
  std::string title;
  std::size_t transformers = 0;
  std::size_t sensors[2] = {0, 0};  // k = 1, k = 2
  double seconds[2] = {0.0, 0.0};
  Reference reference;
};

// Percent saved by `sensors` against `transformers` one-per-transformer.
double savings_percent(std::size_t transformers, std::size_t sensors);

// Solves every fixture at k = 1 and k = 2. Throws ConfigError when a
// fixture's case file is missing.
std::vector<SummaryRow> summarize_fixtures(const std::vector<Fixture>& fixtures,
                                           const ExactOptions& options = {});

// Aligned text table with a trailing average-savings line. The ref column
// holds the reference transformers:k1/k2 counts. Timing columns
// are omitted when `timing` is false, which makes the text byte-stable.
std::string format_summary(const std::vector<SummaryRow>& rows, bool timing);
// name,transformers,k1,k2,savings_k1,savings_k2,seconds_k1,seconds_k2
std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace gridcode
