#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tripod/metric.hpp"
#include "tripod/scalar.hpp"

namespace tripod {

// Canonical optimal offline solution: per request, exactly one taxi moves to
// the pick-up point and then relocates to the drop-off. Taxi 0 is considered
// active before the first request; afterwards the server of the previous
// request is active, mirroring the online convention.
template <class S>
struct OfflineSchedule {
  std::vector<int> server;                        // per request
  std::vector<std::array<PointId, 3>> configs;    // configs[t] = C_t, configs[0] = C_0
  std::vector<S> per_request;                     // OPT_t
  S total;

  // Active offline taxi at the start of request t (0-based).
  int active_before(std::size_t t) const {
    return t == 0 ? 0 : server[t - 1];
  }
};

template <class S>
class OfflineSolver {
 public:
  explicit OfflineSolver(const MetricInstance<S>& m) : m_(&m) {}

  OfflineSchedule<S> opt_dp() {
    const auto& reqs = m_->requests;
    std::array<PointId, 3> cfg = m_->initial;
    OfflineSchedule<S> sched;
    sched.total = value(0, cfg);
    sched.configs.push_back(cfg);
    for (std::size_t t = 0; t < reqs.size(); ++t) {
      S rest = value(t, cfg);
      int pick = -1;
      for (int i = 0; i < 3; ++i) {
        auto next = cfg;
        next[i] = reqs[t].second;
        if (m_->d(cfg[i], reqs[t].first) + value(t + 1, next) == rest) {
          pick = i;
          break;  // lexicographically smallest serving sequence
        }
      }
      sched.server.push_back(pick);
      sched.per_request.push_back(m_->d(cfg[pick], reqs[t].first));
      cfg[pick] = reqs[t].second;
      sched.configs.push_back(cfg);
    }
    return sched;
  }

  // Exhaustive minimum over all 3^T serving assignments.
  S opt_bruteforce() const {
    if (m_->requests.size() > 10)
      throw std::invalid_argument("opt_bruteforce: T > 10 refused");
    return brute(0, m_->initial);
  }

 private:
  S value(std::size_t t, const std::array<PointId, 3>& cfg) {
    if (t == m_->requests.size()) return S(0);
    std::uint64_t key = encode(t, cfg);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto& [r, s] = m_->requests[t];
    bool have = false;
    S best(0);
    for (int i = 0; i < 3; ++i) {
      auto next = cfg;
      next[i] = s;
      S cand = m_->d(cfg[i], r) + value(t + 1, next);
      if (!have || cand < best) {
        best = cand;
        have = true;
      }
    }
    memo_.emplace(key, best);
    return best;
  }

  S brute(std::size_t t, std::array<PointId, 3> cfg) const {
    if (t == m_->requests.size()) return S(0);
    const auto& [r, s] = m_->requests[t];
    bool have = false;
    S best(0);
    for (int i = 0; i < 3; ++i) {
      auto next = cfg;
      next[i] = s;
      S cand = m_->d(cfg[i], r) + brute(t + 1, next);
      if (!have || cand < best) {
        best = cand;
        have = true;
      }
    }
    return best;
  }

  std::uint64_t encode(std::size_t t, const std::array<PointId, 3>& cfg) const {
    std::uint64_t n = m_->size();
    return ((t * n + cfg[0]) * n + cfg[1]) * n + cfg[2];
  }

  const MetricInstance<S>* m_;
  std::unordered_map<std::uint64_t, S> memo_;
};

}  // namespace tripod
