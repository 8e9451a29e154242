#include "gridcode/demo.hpp"

#include <algorithm>

namespace gridcode {

DemoRun run_demo(const GridGraph& g, const Placement& p, ReachMetric metric,
                 std::size_t target, const DemoConfig& config) {
  const MonitorInstance& m = p.instance();
  if (target >= m.targets().size()) throw ConfigError("no such target");
  // Targets are the grid's transformers in order.
  if (g.transformers().size() != m.targets().size() ||
      g.transformers()[target].name != m.targets()[target].name) {
    throw ConfigError("placement was not built from this grid");
  }
  const Transformer& t = g.transformers()[target];
  const auto& observers = m.observers_of(target);

  DemoRun run;
  run.injected = target;
  for (std::size_t i = 0; i < p.sites().size(); ++i) {
    const NodeId site = p.sites()[i];
    SensorReading r;
    r.site = site;
    r.label = p.labels()[i];
    if (std::find(observers.begin(), observers.end(), site) != observers.end()) {
      const Candidate& c = m.candidates()[m.candidate_index(site)];
      r.hop = reach_distance(g, t, c.host, metric);
    }
    SynthSpec spec = config.signal;
    spec.hop = r.hop;
    spec.seed = config.signal.seed + i;
    const SnrSeries series = snr_series(synth_signal(spec), config.window);
    r.band_width = series.band_width;
    r.band_sigma = series.band_sigma;
    r.alarm = alarm(series, config.threshold);
    if (r.alarm) run.raised.insert(r.label);
    run.readings.push_back(r);
  }
  run.result = decode(p, run.raised);
  return run;
}

}  // namespace gridcode
