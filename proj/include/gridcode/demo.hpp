#pragma once

// End-to-end failure scenario: a failing transformer raises the noise seen
// by the sensors that observe it, attenuated per hop; sensors whose SNR band
// widens past the threshold raise their lamp, and the lamp pattern is
// decoded back to a transformer.

#include <cstddef>
#include <vector>

#include "gridcode/codes.hpp"
#include "gridcode/construct.hpp"
#include "gridcode/graph.hpp"
#include "gridcode/snr.hpp"

namespace gridcode {

struct DemoConfig {
  SynthSpec signal;  // hop and seed are set per sensor
  std::size_t window = kDefaultWindow;
  double threshold = 6.0;  // dB of band width
};

struct SensorReading {
  NodeId site = 0;
  Label label;
  int hop = 0;  // 0 when the site does not observe the failing transformer
  double band_width = 0.0;
  double band_sigma = 0.0;
  bool alarm = false;
};

struct DemoRun {
  std::size_t injected = 0;  // target index
  std::vector<SensorReading> readings;  // one per site, ascending
  Signature raised;
  DecodeResult result;

  bool correct() const { return result.target == injected; }
};

// Sensor i of the placement uses seed signal.seed + i. `metric` must be the
// one the placement's instance was built with.
DemoRun run_demo(const GridGraph& g, const Placement& p, ReachMetric metric,
                 std::size_t target, const DemoConfig& config = {});

}  // namespace gridcode
