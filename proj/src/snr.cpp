#include "gridcode/snr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gridcode/errors.hpp"

namespace gridcode {

namespace {

using nlohmann::json;

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Two-pass sample moments (n - 1 denominator).
template <typename It>
Moments moments(It first, It last) {
  const auto n = static_cast<double>(std::distance(first, last));
  double sum = 0.0;
  for (It it = first; it != last; ++it) sum += *it;
  const double mean = sum / n;
  double ss = 0.0;
  for (It it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
  return {mean, n > 1 ? std::sqrt(ss / (n - 1)) : 0.0};
}

template <typename It>
double window_snr(It first, It last) {
  if (std::distance(first, last) < 2) {
    throw DegenerateSignal("window needs at least two samples");
  }
  const Moments m = moments(first, last);
  if (!(m.stddev > 0.0)) throw DegenerateSignal("window has zero standard deviation");
  if (!(m.mean > 0.0)) throw DomainError("window mean is not positive");
  return 10.0 * std::log10(m.mean / m.stddev);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

double snr_db(const std::vector<double>& samples) {
  return window_snr(samples.begin(), samples.end());
}

SnrSeries summarize(std::vector<double> values, std::size_t window_len,
                    std::size_t stride) {
  SnrSeries s;
  s.values = std::move(values);
  s.window_len = window_len;
  s.stride = stride;
  if (!s.values.empty()) {
    auto [lo, hi] = std::minmax_element(s.values.begin(), s.values.end());
    s.band_width = *hi - *lo;
    s.band_sigma = moments(s.values.begin(), s.values.end()).stddev;
  }
  return s;
}

SnrSeries snr_series(const std::vector<double>& signal, std::size_t window_len,
                     std::size_t stride) {
  if (stride == 0) stride = window_len;
  if (window_len < 2) throw ConfigError("window length must be at least 2");
  if (signal.size() < window_len) {
    throw ConfigError("signal has " + std::to_string(signal.size()) +
                      " samples, shorter than one window of " +
                      std::to_string(window_len));
  }
  std::vector<double> values;
  for (std::size_t start = 0, w = 0; start + window_len <= signal.size();
       start += stride, ++w) {
    auto first = signal.begin() + static_cast<std::ptrdiff_t>(start);
    try {
      values.push_back(window_snr(first, first + static_cast<std::ptrdiff_t>(window_len)));
    } catch (const DegenerateSignal& e) {
      throw DegenerateSignal("window " + std::to_string(w) + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("window " + std::to_string(w) + ": " + e.what());
    }
  }
  return summarize(std::move(values), window_len, stride);
}

bool alarm(const SnrSeries& series, double threshold) {
  return series.band_width > threshold;
}

std::vector<double> synth_signal(const SynthSpec& spec) {
  if (!(spec.rate > 0.0)) throw ConfigError("rate must be positive");
  if (!(spec.duration > 0.0)) throw ConfigError("duration must be positive");
  if (spec.sigma0 < 0.0) throw ConfigError("sigma0 must not be negative");
  if (spec.hop < 0) throw ConfigError("hop must not be negative");
  if (spec.failure_time < spec.onset) throw ConfigError("failure_time precedes onset");

  const auto n = static_cast<std::size_t>(std::llround(spec.rate * spec.duration));
  const double scale =
      spec.hop == 0 ? 0.0 : spec.growth * std::pow(spec.attenuation, spec.hop - 1);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.rate;
    double ramp = 0.0;
    if (t >= spec.failure_time) {
      ramp = 1.0;
    } else if (t > spec.onset) {
      ramp = (t - spec.onset) / (spec.failure_time - spec.onset);
    }
    out[i] = spec.level + spec.sigma0 * (1.0 + scale * ramp) * normal(rng);
  }
  return out;
}

SynthSpec parse_synth_spec(std::string_view text) {
  SynthSpec s;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed generator config: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("generator config must be an object");
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "level") s.level = value.get<double>();
      else if (key == "sigma0") s.sigma0 = value.get<double>();
      else if (key == "growth") s.growth = value.get<double>();
      else if (key == "attenuation") s.attenuation = value.get<double>();
      else if (key == "hop") s.hop = value.get<int>();
      else if (key == "rate") s.rate = value.get<double>();
      else if (key == "duration") s.duration = value.get<double>();
      else if (key == "onset") s.onset = value.get<double>();
      else if (key == "failure_time") s.failure_time = value.get<double>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else throw ConfigError("unknown generator field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid generator config: ") + e.what());
  }
  return s;
}

std::string write_synth_spec(const SynthSpec& s) {
  json doc = {{"level", s.level},       {"sigma0", s.sigma0},
              {"growth", s.growth},     {"attenuation", s.attenuation},
              {"hop", s.hop},           {"rate", s.rate},
              {"duration", s.duration}, {"onset", s.onset},
              {"failure_time", s.failure_time}, {"seed", s.seed}};
  return doc.dump(2) + "\n";
}

std::vector<double> read_signal_csv(std::string_view text) {
  std::vector<double> out;
  std::size_t line = 0;
  while (!text.empty()) {
    ++line;
    std::size_t end = text.find('\n');
    std::string_view row = trim(text.substr(0, end));
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    if (row.empty() || row.front() == '#') continue;
    const std::size_t comma = row.find(',');
    double t = 0.0, v = 0.0;
    if (comma == std::string_view::npos || !parse_double(row.substr(0, comma), t)) {
      if (out.empty() && line == 1) continue;  // header
      throw ParseError(line, 1, "timestamp,value");
    }
    if (!parse_double(row.substr(comma + 1), v)) {
      throw ParseError(line, comma + 2, "numeric value");
    }
    out.push_back(v);
  }
  return out;
}

std::string write_signal_csv(const std::vector<double>& samples, double rate) {
  std::ostringstream out;
  out << "timestamp,value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << static_cast<double>(i) / rate << ',' << samples[i] << '\n';
  }
  return out.str();
}

std::string write_series_csv(const SnrSeries& series) {
  std::ostringstream out;
  out << "window,snr_db\n" << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    out << i << ',' << series.values[i] << '\n';
  }
  return out.str();
}

}  // namespace gridcode
