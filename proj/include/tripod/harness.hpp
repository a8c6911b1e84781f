#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tripod/augmented.hpp"
#include "tripod/generator.hpp"
#include "tripod/metric.hpp"
#include "tripod/offline.hpp"
#include "tripod/potential.hpp"
#include "tripod/scalar.hpp"
#include "tripod/simulator.hpp"

namespace tripod {

// Nearest-taxi-serves comparison baseline (hard-cost model).
template <class S>
S baseline_greedy(const MetricInstance<S>& m) {
  std::array<PointId, 3> pos = m.initial;
  S cost(0);
  for (const auto& [r, s] : m.requests) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (m.d(pos[i], r) < m.d(pos[best], r)) best = i;
    cost += m.d(pos[best], r);
    pos[best] = s;
  }
  return cost;
}

template <class S>
struct InstanceResult {
  bool failed = false;
  std::string error;
  S cost, realized, opt, greedy;
  std::optional<S> ratio;  // only when opt > 0
  bool audit_pass = true;
  std::optional<S> max_min_kappa;
  std::size_t audit_violations = 0;
};

template <class S>
struct ExperimentResult {
  std::vector<InstanceResult<S>> rows;
  std::size_t failures = 0;
  std::size_t violations = 0;
  std::optional<S> max_ratio;
  std::optional<S> max_min_kappa;
};

template <class S>
InstanceResult<S> run_instance(const MetricInstance<S>& m,
                               const AlgoConstants<S>& c, const S& kappa_cfg) {
  InstanceResult<S> row;
  try {
    AugmentedMetric<S> am(m);
    Simulator<S> sim(am, c);
    auto run = sim.run();
    OfflineSolver<S> solver(m);
    auto sched = solver.opt_dp();
    Auditor<S> auditor(am, c, kappa_cfg);
    auto audit = auditor.audit_run(run, sched);
    row.cost = run.simulated_cost;
    row.realized = run.realized_cost;
    row.opt = sched.total;
    row.greedy = baseline_greedy(m);
    if (row.opt.sign() > 0) row.ratio = row.cost / row.opt;
    row.audit_pass = audit.all_pass;
    row.max_min_kappa = audit.max_min_kappa;
    for (const auto& r : audit.rows)
      if (!r.all_pass()) ++row.audit_violations;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

template <class S>
ExperimentResult<S> run_experiment(const std::vector<MetricInstance<S>>& ms,
                                   const AlgoConstants<S>& c,
                                   const S& kappa_cfg) {
  ExperimentResult<S> res;
  for (const auto& m : ms) {
    auto row = run_instance(m, c, kappa_cfg);
    if (row.failed) ++res.failures;
    res.violations += row.audit_violations;
    if (row.ratio && (!res.max_ratio || *row.ratio > *res.max_ratio))
      res.max_ratio = *row.ratio;
    if (row.max_min_kappa &&
        (!res.max_min_kappa || *row.max_min_kappa > *res.max_min_kappa))
      res.max_min_kappa = *row.max_min_kappa;
    res.rows.push_back(std::move(row));
  }
  return res;
}

template <class S>
std::string experiment_report(const ExperimentResult<S>& res) {
  std::ostringstream out;
  out << "#idx  cost          realized      opt           greedy        "
         "ratio         audit\n";
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    if (r.failed) {
      out << i << "  FAILED: " << r.error << "\n";
      continue;
    }
    auto col = [](const std::string& s) {
      std::string t = s;
      if (t.size() < 13) t += std::string(13 - t.size(), ' ');
      return t + " ";
    };
    out << i << (i < 10 ? "     " : "    ") << col(r.cost.str())
        << col(r.realized.str()) << col(r.opt.str()) << col(r.greedy.str())
        << col(r.ratio ? r.ratio->str() : "-")
        << (r.audit_pass ? "pass" : "FAIL") << "\n";
  }
  out << "# instances=" << res.rows.size() << " failures=" << res.failures
      << " violations=" << res.violations
      << " max_ratio=" << (res.max_ratio ? res.max_ratio->str() : "-")
      << " max_min_kappa="
      << (res.max_min_kappa ? res.max_min_kappa->str() : "-") << "\n";
  return out.str();
}

}  // namespace tripod
