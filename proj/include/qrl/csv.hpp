#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qrl/ppo.hpp"

namespace qrl {

// Shortest decimal form that parses back to the identical double.
inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

struct SeedCurve {
  std::uint64_t seed = 0;
  std::vector<EpisodeRecord> records;
};

inline double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

// Population standard deviation.
inline double stddev_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

// Schema: episode,return,moving_avg_100,seconds - one row per episode.
inline void write_curve_csv(const std::filesystem::path& path,
                            const std::vector<EpisodeRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "episode,return,moving_avg_100,seconds\n";
  for (const EpisodeRecord& r : records)
    out << r.episode << ',' << format_double(r.total_return) << ','
        << format_double(r.moving_avg_100) << ',' << format_double(r.seconds) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Cross-seed aggregate curve, one row per episode.
inline void write_summary_csv(const std::filesystem::path& path,
                              const std::vector<SeedCurve>& curves) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "episode,mean_return,std_return,mean_moving_avg_100\n";
  if (curves.empty()) return;
  std::size_t episodes = curves.front().records.size();
  for (const SeedCurve& c : curves) episodes = std::min(episodes, c.records.size());
  for (std::size_t e = 0; e < episodes; ++e) {
    std::vector<double> returns;
    std::vector<double> mas;
    returns.reserve(curves.size());
    mas.reserve(curves.size());
    for (const SeedCurve& c : curves) {
      returns.push_back(c.records[e].total_return);
      mas.push_back(c.records[e].moving_avg_100);
    }
    out << (e + 1) << ',' << format_double(mean_of(returns)) << ','
        << format_double(stddev_of(returns)) << ',' << format_double(mean_of(mas)) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// One row per seed with overall return statistics.
inline void write_stats_csv(const std::filesystem::path& path,
                            const std::vector<SeedCurve>& curves) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "seed,episodes,mean_return,std_return\n";
  for (const SeedCurve& c : curves) {
    std::vector<double> returns;
    returns.reserve(c.records.size());
    for (const EpisodeRecord& r : c.records) returns.push_back(r.total_return);
    out << c.seed << ',' << c.records.size() << ',' << format_double(mean_of(returns)) << ','
        << format_double(stddev_of(returns)) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Per-seed return statistics over consecutive episode windows (the last
// window may be partial). Start/end are 1-based inclusive episode numbers.
inline void write_window_stats_csv(const std::filesystem::path& path,
                                   const std::vector<SeedCurve>& curves, std::size_t window = 100) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "seed,window_start,window_end,mean_return,std_return\n";
  for (const SeedCurve& c : curves) {
    for (std::size_t start = 0; start < c.records.size(); start += window) {
      const std::size_t end = std::min(start + window, c.records.size());
      std::vector<double> returns;
      returns.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) returns.push_back(c.records[i].total_return);
      out << c.seed << ',' << (start + 1) << ',' << end << ',' << format_double(mean_of(returns))
          << ',' << format_double(stddev_of(returns)) << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace qrl
