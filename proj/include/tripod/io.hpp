#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripod/metric.hpp"
#include "tripod/offline.hpp"
#include "tripod/potential.hpp"
#include "tripod/scalar.hpp"
#include "tripod/simulator.hpp"

namespace tripod {

using json = nlohmann::json;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class S>
S scalar_from_json(const json& j) {
  if (j.is_string()) return S::parse(j.get<std::string>());
  if (j.is_number_integer()) return S(j.get<long>());
  if (j.is_number_float()) return S::parse(j.dump());
  throw InputError("expected a number or numeric string");
}

namespace detail {

inline std::string round6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

// Min-plus closure; repairs tiny triangle violations left by rounding.
template <class S>
void metric_closure(std::vector<std::vector<S>>& d) {
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
}

template <class S>
std::vector<std::vector<S>> coords_to_matrix(
    const std::vector<std::vector<S>>& coords, const std::string& norm) {
  const std::size_t n = coords.size();
  std::vector<std::vector<S>> d(n, std::vector<S>(n, S(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      S v(0);
      if (norm == "l1") {
        for (std::size_t k = 0; k < coords[i].size(); ++k)
          v += abs(coords[i][k] - coords[j][k]);
      } else if (norm == "linf") {
        for (std::size_t k = 0; k < coords[i].size(); ++k)
          v = max(v, abs(coords[i][k] - coords[j][k]));
      } else if (norm == "l2") {
        double acc = 0;
        for (std::size_t k = 0; k < coords[i].size(); ++k) {
          double t = (coords[i][k] - coords[j][k]).to_double();
          acc += t * t;
        }
        v = S::parse(round6(std::sqrt(acc)));
      } else {
        throw InputError("unknown norm tag: " + norm);
      }
      d[i][j] = d[j][i] = v;
    }
  if (norm == "l2") metric_closure(d);
  return d;
}

}  // namespace detail

template <class S>
MetricInstance<S> instance_from_json(const json& j) {
  MetricInstance<S> m;
  if (!j.contains("points") || !j.contains("initial") || !j.contains("requests"))
    throw InputError("instance requires 'points', 'initial' and 'requests'");
  const json& pts = j.at("points");
  if (pts.contains("matrix")) {
    for (const auto& row : pts.at("matrix")) {
      std::vector<S> r;
      for (const auto& v : row) r.push_back(scalar_from_json<S>(v));
      m.dist.push_back(std::move(r));
    }
  } else if (pts.contains("coords")) {
    std::vector<std::vector<S>> coords;
    for (const auto& row : pts.at("coords")) {
      std::vector<S> c;
      for (const auto& v : row) c.push_back(scalar_from_json<S>(v));
      coords.push_back(std::move(c));
    }
    std::string norm = pts.value("norm", "l2");
    m.dist = detail::coords_to_matrix(coords, norm);
  } else {
    throw InputError("'points' requires either 'matrix' or 'coords'");
  }
  if (pts.contains("names"))
    m.names = pts.at("names").get<std::vector<std::string>>();
  auto init = j.at("initial");
  if (init.size() != 3) throw InputError("'initial' must list 3 point indices");
  for (int i = 0; i < 3; ++i) m.initial[i] = init.at(i).get<PointId>();
  for (const auto& rq : j.at("requests")) {
    if (rq.size() != 2) throw InputError("each request is an [r, s] pair");
    m.requests.emplace_back(rq.at(0).get<PointId>(), rq.at(1).get<PointId>());
  }
  return m;
}

template <class S>
MetricInstance<S> load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("instance parse error: ") + e.what());
  }
  return instance_from_json<S>(j);
}

template <class S>
json instance_to_json(const MetricInstance<S>& m) {
  json j;
  json matrix = json::array();
  for (const auto& row : m.dist) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v.str());
    matrix.push_back(std::move(r));
  }
  j["points"]["matrix"] = std::move(matrix);
  if (!m.names.empty()) j["points"]["names"] = m.names;
  j["initial"] = {m.initial[0], m.initial[1], m.initial[2]};
  json reqs = json::array();
  for (const auto& [r, s] : m.requests) reqs.push_back({r, s});
  j["requests"] = std::move(reqs);
  return j;
}

template <class S>
json segment_to_json(const Segment<S>& seg) {
  json j;
  j["mode"] = seg.single ? "single" : "both";
  if (seg.single) j["mover_role"] = seg.mover_role;
  j["duration"] = seg.duration.str();
  j["speeds"] = {seg.speed_active.str(), seg.speed2.str(), seg.speed3.str()};
  j["start"] = {{"adv", seg.adv0.str()},   {"u2", seg.u2_0.str()},
                {"u3", seg.u3_0.str()},    {"z2", seg.z2_0.str()},
                {"z3", seg.z3_0.str()},    {"travel", seg.travel0.str()},
                {"ell2", seg.ell2_0.str()}, {"ell3", seg.ell3_0.str()}};
  j["event"] = {{"kind", to_string(seg.event.kind)},
                {"role", seg.event.role},
                {"time", seg.event.time.str()}};
  j["pos_after"] = {seg.pos_after[0], seg.pos_after[1], seg.pos_after[2]};
  j["ell_after"] = {seg.ell2_1.str(), seg.ell3_1.str()};
  j["pair_dist_after"] = seg.pair_dist_after.str();
  return j;
}

template <class S>
json trace_to_json(const RequestTrace<S>& tr) {
  json j;
  j["index"] = tr.index;
  j["request"] = {tr.r, tr.s};
  j["pos_before"] = {tr.pos_before[0], tr.pos_before[1], tr.pos_before[2]};
  j["active_before"] = tr.active_before;
  j["ell_before"] = {tr.ell_before[0].str(), tr.ell_before[1].str(),
                     tr.ell_before[2].str()};
  j["roles"] = {{"p2", tr.p2}, {"p3", tr.p3}};
  j["tripod"] = {{"center", tr.center}, {"u2", tr.u2_0.str()},
                 {"u3", tr.u3_0.str()}, {"ar", tr.ar.str()},
                 {"d1r", tr.d1r.str()}, {"z2", tr.z2_0.str()},
                 {"z3", tr.z3_0.str()}};
  j["segments"] = json::array();
  for (const auto& s : tr.segments) j["segments"].push_back(segment_to_json(s));
  j["cost"] = tr.cost.str();
  j["server"] = tr.server;
  if (tr.reorg.fired) {
    j["reorg"] = {{"f", tr.reorg.f},
                  {"d_x1f", tr.reorg.d_x1f.str()},
                  {"d_x1x2", tr.reorg.d_x1x2.str()},
                  {"d_x1x3", tr.reorg.d_x1x3.str()},
                  {"ell2_before", tr.reorg.ell2_before.str()},
                  {"ell3_before", tr.reorg.ell3_before.str()},
                  {"ell2_after", tr.reorg.ell2_after.str()},
                  {"ell3_after", tr.reorg.ell3_after.str()}};
  }
  j["pos_after"] = {tr.pos_after[0], tr.pos_after[1], tr.pos_after[2]};
  j["active_after"] = tr.active_after;
  j["ell_after"] = {tr.ell_after[0].str(), tr.ell_after[1].str(),
                    tr.ell_after[2].str()};
  return j;
}

template <class S>
json run_to_json(const RunResult<S>& res) {
  json j;
  j["simulated_cost"] = res.simulated_cost.str();
  j["realized_cost"] = res.realized_cost.str();
  j["traces"] = json::array();
  for (const auto& tr : res.traces) j["traces"].push_back(trace_to_json(tr));
  return j;
}

template <class S>
json schedule_to_json(const OfflineSchedule<S>& sched) {
  json j;
  j["total"] = sched.total.str();
  j["server"] = sched.server;
  json per = json::array();
  for (const auto& c : sched.per_request) per.push_back(c.str());
  j["per_request"] = std::move(per);
  json cfgs = json::array();
  for (const auto& c : sched.configs) cfgs.push_back({c[0], c[1], c[2]});
  j["configs"] = std::move(cfgs);
  return j;
}

template <class S>
json check_to_json(const CheckResult<S>& c) {
  json j;
  j["applicable"] = c.applicable;
  if (c.applicable) {
    j["pass"] = c.pass;
    j["slack"] = c.slack.str();
  }
  return j;
}

template <class S>
json audit_to_json(const AuditReport<S>& rep) {
  json j;
  j["all_pass"] = rep.all_pass;
  if (rep.max_min_kappa) j["max_min_kappa"] = rep.max_min_kappa->str();
  j["rows"] = json::array();
  for (const auto& row : rep.rows) {
    json r;
    r["index"] = row.index;
    r["opt_t"] = row.opt_t.str();
    r["cost_t"] = row.cost_t.str();
    r["offline_server"] = row.offline_server;
    r["offline_active_served"] = row.offline_active_served;
    r["offline_charge"] = check_to_json(row.offline_charge);
    r["movement_paid"] = check_to_json(row.movement_paid);
    r["movement_paid_segments"] = check_to_json(row.movement_paid_segments);
    r["sigma_org"] = check_to_json(row.sigma_org);
    r["reorg_matching"] = check_to_json(row.reorg_matching);
    r["reloc"] = check_to_json(row.reloc);
    r["aggregate"] = check_to_json(row.aggregate);
    if (row.min_kappa) r["min_kappa"] = row.min_kappa->str();
    json phis = json::array();
    for (const auto& p : row.phi) phis.push_back(p.str());
    r["phi"] = std::move(phis);
    r["server_matched_ok"] = row.server_matched_ok;
    j["rows"].push_back(std::move(r));
  }
  return j;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

}  // namespace tripod
