#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gridcode {

// 10 * log10(mean / sample stddev). Throws DegenerateSignal when the window
// has fewer than two samples or zero spread, DomainError when mean <= 0.
double snr_db(const std::vector<double>& samples);

inline constexpr std::size_t kDefaultWindow = 30;  // 1 s at 30 Hz

struct SnrSeries {
  std::vector<double> values;  // dB, one per full window
  std::size_t window_len = 0;
  std::size_t stride = 0;
  double band_width = 0.0;  // max - min of values
  double band_sigma = 0.0;  // sample stddev of values, 0 for a single window
};

// Band statistics over a list of SNR values.
SnrSeries summarize(std::vector<double> values, std::size_t window_len,
                    std::size_t stride);

// Throws ConfigError for window_len < 2, stride 0 or a signal shorter than
// one window; DegenerateSignal naming the first bad window.
SnrSeries snr_series(const std::vector<double>& signal,
                     std::size_t window_len = kDefaultWindow, std::size_t stride = 0);

// True iff band_width > threshold.
bool alarm(const SnrSeries& series, double threshold);

// Synthetic PMU magnitude trace: level + sigma(t) * z(t), z standard normal.
// sigma(t) = sigma0 * (1 + growth * attenuation^(hop-1) * ramp(t)), where ramp
// rises linearly from 0 at onset to 1 at failure time and stays at 1 after.
// hop = 0 means "not observing the failing transformer": sigma stays sigma0.
// The noise draws depend only on the seed, so traces that differ only in
// hop share the same z sequence.
struct SynthSpec {
  double level = 1.0;           // per-unit magnitude
  double sigma0 = 0.002;        // baseline noise
  double growth = 16.0;         // relative noise growth at failure, hop 1
  double attenuation = 0.5;     // per extra hop
  int hop = 1;
  double rate = 30.0;           // samples per second
  double duration = 600.0;      // seconds
  double onset = 0.0;           // seconds
  double failure_time = 600.0;  // seconds
  std::uint64_t seed = 1;
};

// Throws ConfigError for non-positive rate or duration, negative sigma0,
// hop < 0 or failure_time < onset.
std::vector<double> synth_signal(const SynthSpec& spec);

// JSON generator config; missing keys keep their defaults, unknown keys are
// rejected (ConfigError).
SynthSpec parse_synth_spec(std::string_view text);
std::string write_synth_spec(const SynthSpec& spec);

// Two-column CSV (timestamp, value). An optional header row is skipped.
// Throws ParseError.
std::vector<double> read_signal_csv(std::string_view text);
std::string write_signal_csv(const std::vector<double>& samples, double rate);
// window,snr_db
std::string write_series_csv(const SnrSeries& series);

}  // namespace gridcode
