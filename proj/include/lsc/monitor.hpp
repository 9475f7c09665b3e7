#ifndef LSC_MONITOR_HPP
#define LSC_MONITOR_HPP

// Watches a prediction stream for repeated hits on unlabeled centers. Many
// queries landing on the same unlabeled center hint at a class the label map
// does not know about.

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "lsc/closest_center.hpp"

namespace lsc {

struct Alert {
  CenterCode code;
  std::uint64_t count = 0;       // hits inside the window when the alert fired
  std::uint64_t first_seen = 0;  // stream index of the earliest counted hit
  std::uint64_t last_seen = 0;   // stream index of the hit that fired the alert
};

struct MonitorConfig {
  std::uint64_t threshold = 10;
  /// Sliding window length in predictions; nullopt counts over the whole stream.
  std::optional<std::uint64_t> window;
};

/// Alerts fire once per code; with a window, a code re-arms once `window`
/// predictions have passed since its last alert.
class UnlabeledMonitor {
 public:
  explicit UnlabeledMonitor(MonitorConfig config = {}) : config_(config) {
    if (config_.threshold == 0) throw ParameterError("monitor threshold must be positive");
    if (config_.window && *config_.window == 0) throw ParameterError("monitor window must be positive");
  }

  std::optional<Alert> observe(const Prediction& p) {
    const std::uint64_t index = next_index_++;
    expire(index);
    if (p.label != kUnlabeled) return std::nullopt;

    const PackedKey key = p.code.key();
    Tracked& t = tracked_[key];
    if (t.count == 0) t.first_seen = index;
    ++t.count;
    if (config_.window) {
      t.hits.push_back(index);
      window_.push_back({index, key});
    }

    if (t.alerted_at && config_.window && index - *t.alerted_at >= *config_.window) t.alerted_at.reset();
    if (t.count >= config_.threshold && !t.alerted_at) {
      t.alerted_at = index;
      return Alert{p.code, t.count, t.first_seen, index};
    }
    return std::nullopt;
  }

  /// Hit count for a code inside the current window.
  std::uint64_t count(const CenterCode& code) const {
    auto it = tracked_.find(code.key());
    return it == tracked_.end() ? 0 : it->second.count;
  }

  std::size_t tracked_codes() const {
    std::size_t n = 0;
    for (const auto& [key, t] : tracked_) n += t.count > 0;
    return n;
  }

  std::uint64_t observed() const { return next_index_; }
  const MonitorConfig& config() const { return config_; }

 private:
  struct Tracked {
    std::uint64_t count = 0;
    std::uint64_t first_seen = 0;
    std::deque<std::uint64_t> hits;  // windowed mode only
    std::optional<std::uint64_t> alerted_at;
  };
  struct Hit {
    std::uint64_t index;
    PackedKey key;
  };

  void expire(std::uint64_t index) {
    if (!config_.window) return;
    while (!window_.empty() && index - window_.front().index >= *config_.window) {
      Tracked& t = tracked_[window_.front().key];
      t.hits.pop_front();
      --t.count;
      if (!t.hits.empty()) t.first_seen = t.hits.front();
      window_.pop_front();
    }
  }

  MonitorConfig config_;
  std::unordered_map<PackedKey, Tracked, PackedKeyHash> tracked_;
  std::deque<Hit> window_;
  std::uint64_t next_index_ = 0;
};

inline nlohmann::json alert_to_json(const Alert& a) {
  nlohmann::json maxes = nlohmann::json::array(), mins = nlohmann::json::array();
  for (auto i : a.code.maxes()) maxes.push_back(i);
  for (auto i : a.code.mins()) mins.push_back(i);
  return {{"event", "unlabeled_center"}, {"maxes", maxes}, {"mins", mins}, {"count", a.count},
          {"first_seen", a.first_seen}, {"last_seen", a.last_seen}};
}

}  // namespace lsc

#endif  // LSC_MONITOR_HPP
