#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tripod/augmented.hpp"
#include "tripod/offline.hpp"
#include "tripod/scalar.hpp"
#include "tripod/simulator.hpp"

namespace tripod {

// Distorted contribution of one passive pair: the (x_i, y_i) path through
// the branching point g_i, discounted by (1-psi) inside x_i's interval and
// on the whole y_i edge.
template <class S>
S pair_contribution(const S& ell_i, const S& d_xi_gi, const S& d_gi_yi,
                    const S& psi) {
  S one(1);
  return (one - psi) * min(ell_i, d_xi_gi) + max(S(0), d_xi_gi - ell_i) +
         (one - psi) * d_gi_yi;
}

template <class S>
struct PairGeometry {
  NodeId g;      // branching point of B(x2, x3, y)
  S d_x2_g, d_x3_g, d_g_y;
};

// Minimum-weight distorted matching between the online and offline
// configurations, with the two active taxis pinned together.
template <class S>
struct MatchingEval {
  S active_term;            // d(x1, y1)
  bool swapped;             // false: x2<->ya, x3<->yb (ya = lower passive id)
  S c2, c3;                 // contributions of the chosen assignment
  S cost_direct, cost_swapped;
  PairGeometry<S> geom_a, geom_b;  // tripods B(x2,x3,ya), B(x2,x3,yb)
  S value;                  // M
};

// Online snapshot fed to the potential: role-ordered passive data.
template <class S>
struct OnlineSnapshot {
  NodeId x1, x2, x3;
  S ell2, ell3;
  S pair_dist;  // d(x2, x3)
};

template <class S>
struct OfflineSnapshot {
  NodeId y1;            // active offline taxi position
  NodeId ya, yb;        // passive offline positions (lower taxi id first)
};

template <class S>
MatchingEval<S> matching_potential(AugmentedMetric<S>& am,
                                   const OnlineSnapshot<S>& on,
                                   const OfflineSnapshot<S>& off,
                                   const S& psi) {
  MatchingEval<S> ev;
  ev.active_term = am.dist(on.x1, off.y1);
  auto ta = am.materialize_tripod(on.x2, on.x3, off.ya);
  auto tb = am.materialize_tripod(on.x2, on.x3, off.yb);
  ev.geom_a = {ta.center, ta.xe, ta.ye, ta.ze};
  ev.geom_b = {tb.center, tb.xe, tb.ye, tb.ze};
  S c2a = pair_contribution(on.ell2, ta.xe, ta.ze, psi);
  S c3a = pair_contribution(on.ell3, ta.ye, ta.ze, psi);
  S c2b = pair_contribution(on.ell2, tb.xe, tb.ze, psi);
  S c3b = pair_contribution(on.ell3, tb.ye, tb.ze, psi);
  ev.cost_direct = c2a + c3b;   // x2<->ya, x3<->yb
  ev.cost_swapped = c2b + c3a;  // x2<->yb, x3<->ya
  ev.swapped = ev.cost_swapped < ev.cost_direct;
  ev.c2 = ev.swapped ? c2b : c2a;
  ev.c3 = ev.swapped ? c3a : c3b;
  ev.value = ev.active_term + min(ev.cost_direct, ev.cost_swapped);
  return ev;
}

// Overlap potential of the two intervals.
template <class S>
S sigma(const S& ell2, const S& ell3, const S& pair_dist) {
  if (ell2.sign() < 0 || ell3.sign() < 0 || ell2 + ell3 > pair_dist)
    throw InvariantViolation("sigma: interval disjointness violated");
  S gap = pair_dist - ell2 - ell3;
  return max(S(0), min(ell2, ell3) - gap);
}

// Safe default for the aggregate per-request bound. The binding case is an
// active offline server: the movement phase then lasts at most OPT/a, all
// taxis together move O(OPT/a), and the potential weighs that by alpha, so
// the feasible ratio scales like alpha/a (a per-epsilon constant).
template <class S>
S default_kappa(const AlgoConstants<S>& c) {
  return S(8) * c.alpha / c.a;
}

template <class S>
struct PhaseSnapshot {
  std::string phase;
  S m, sig, phi;
  MatchingEval<S> matching;
};

template <class S>
struct CheckResult {
  bool applicable = false;
  bool pass = true;
  S slack;  // RHS - LHS, nonnegative iff pass
};

template <class S>
struct RequestAudit {
  std::size_t index = 0;
  S opt_t, cost_t;
  int offline_server = 0;
  bool offline_active_served = false;
  CheckResult<S> offline_charge;          // (a)
  CheckResult<S> movement_paid;          // (b), aggregate over the movement phase
  CheckResult<S> movement_paid_segments; // (b), worst per-segment slack
  CheckResult<S> sigma_org;       // (c)
  CheckResult<S> reorg_matching;          // (d)
  CheckResult<S> reloc;           // (e)
  CheckResult<S> aggregate;       // (f) against kappa_cfg
  std::optional<S> min_kappa;     // (COST_t + dPhi_t)/OPT_t when OPT_t > 0
  std::array<S, 5> phi;           // pre, post-offline, post-online, post-reorg, post-reloc
  bool server_matched_ok = true;          // x1 or x3 matched to the offline taxi at r
  bool all_pass() const {
    for (const CheckResult<S>* c :
         {&offline_charge, &movement_paid, &movement_paid_segments, &sigma_org, &reorg_matching, &reloc,
          &aggregate})
      if (c->applicable && !c->pass) return false;
    return server_matched_ok;
  }
};

template <class S>
struct AuditReport {
  std::vector<RequestAudit<S>> rows;
  bool all_pass = true;
  std::optional<S> max_min_kappa;
};

// Mechanical audit of the competitive-analysis inequalities on one run,
// against the canonical offline schedule. Four phase boundaries per request:
// the offline server moves to r first, then the online movement, then
// reorganization (including the offline active-role reindexing), then
// relocation of both servers to s.
template <class S>
class Auditor {
 public:
  Auditor(AugmentedMetric<S>& am, const AlgoConstants<S>& c, S kappa_cfg)
      : am_(&am), c_(c), kappa_cfg_(std::move(kappa_cfg)) {}

  AuditReport<S> audit_run(const RunResult<S>& run,
                           const OfflineSchedule<S>& sched) {
    AuditReport<S> rep;
    for (std::size_t t = 0; t < run.traces.size(); ++t) {
      auto row = audit_request(run.traces[t], sched, t);
      rep.all_pass = rep.all_pass && row.all_pass();
      if (row.min_kappa &&
          (!rep.max_min_kappa || *row.min_kappa > *rep.max_min_kappa))
        rep.max_min_kappa = *row.min_kappa;
      rep.rows.push_back(std::move(row));
    }
    return rep;
  }

  RequestAudit<S> audit_request(const RequestTrace<S>& tr,
                                const OfflineSchedule<S>& sched,
                                std::size_t t) {
    RequestAudit<S> row;
    row.index = t;
    row.opt_t = sched.per_request[t];
    row.cost_t = tr.cost;
    row.offline_server = sched.server[t];
    int off_active0 = sched.active_before(t);
    row.offline_active_served = sched.server[t] == off_active0;

    const auto& cfg0 = sched.configs[t];      // offline config before request
    auto cfg1 = cfg0;                         // after the offline move to r
    cfg1[sched.server[t]] = tr.r;

    // Online boundary states.
    OnlineSnapshot<S> on0 = online_before(tr);
    OnlineSnapshot<S> on2 = online_post_movement(tr);
    OnlineSnapshot<S> on3 = online_post_reorg(tr);
    OnlineSnapshot<S> on4 = online_post_reloc(tr);

    int off_active3 = sched.server[t];  // reindexed during reorganization

    auto s0 = snapshot("pre", on0, cfg0, off_active0);
    auto s1 = snapshot("post-offline", on0, cfg1, off_active0);
    auto s2 = snapshot("post-online", on2, cfg1, off_active0);
    auto s3 = snapshot("post-reorg", on3, cfg1, off_active3);
    auto cfg4 = cfg1;
    cfg4[sched.server[t]] = tr.s;
    auto s4 = snapshot("post-reloc", on4, cfg4, off_active3);
    row.phi = {s0.phi, s1.phi, s2.phi, s3.phi, s4.phi};

    // (a) the offline move raises Phi by at most alpha * OPT_t.
    row.offline_charge = check(c_.alpha * row.opt_t - (s1.phi - s0.phi));

    // (b) with a passive offline server, the online movement pays
    // for itself out of the potential; checked in aggregate and per segment.
    if (!row.offline_active_served) {
      row.movement_paid = check(-(tr.cost + (s2.phi - s1.phi)));
      row.movement_paid_segments = check_segments(tr, cfg1, off_active0);
    }

    // (c),(d) reorganization: Sigma never grows, M grows by at most psi*OPT_t.
    row.sigma_org = check(-(s3.sig - s2.sig));
    row.reorg_matching = check(c_.psi * row.opt_t - (s3.m - s2.m));

    // (e) relocation is free.
    row.reloc = check(-(s4.phi - s3.phi));

    // (f) aggregate request inequality.
    S lhs = tr.cost + (s4.phi - s0.phi);
    row.aggregate = check(kappa_cfg_ * row.opt_t - lhs);
    if (row.opt_t.sign() > 0) row.min_kappa = lhs / row.opt_t;

    row.server_matched_ok = check_server_matched(tr, s2, cfg1, off_active0);
    return row;
  }

  // Branching-point order criterion against the enumerated minimum
  // assignment: x2<->yb (and x3<->ya) is minimal iff d(x2,g_b) <= d(x2,g_a).
  static bool check_branching_order(const MatchingEval<S>& ev) {
    bool crit = ev.geom_b.d_x2_g <= ev.geom_a.d_x2_g;
    bool swapped_minimal = ev.cost_swapped <= ev.cost_direct;
    bool direct_minimal = ev.cost_direct <= ev.cost_swapped;
    if (crit && !swapped_minimal) return false;
    if (!crit && !direct_minimal) return false;
    return true;
  }

  OnlineSnapshot<S> online_post_reorg(const RequestTrace<S>& tr) const {
    OnlineSnapshot<S> moved = online_post_movement(tr);
    std::array<NodeId, 3> pos;
    pos[tr.active_before] = moved.x1;
    pos[tr.p2] = moved.x2;
    pos[tr.p3] = moved.x3;
    TaxiState<S> st;
    st.active = tr.active_after;
    auto [p2, p3] = st.passives();
    OnlineSnapshot<S> on;
    on.x1 = pos[tr.active_after];
    on.x2 = pos[p2];
    on.x3 = pos[p3];
    on.ell2 = tr.ell_after[p2];
    on.ell3 = tr.ell_after[p3];
    on.pair_dist = am_->dist(on.x2, on.x3);
    return on;
  }

  OnlineSnapshot<S> online_post_reloc(const RequestTrace<S>& tr) const {
    OnlineSnapshot<S> on = online_post_reorg(tr);
    on.x1 = NodeId(tr.s);
    return on;
  }

  PhaseSnapshot<S> snapshot(const char* phase, const OnlineSnapshot<S>& on,
                            const std::array<PointId, 3>& offline_cfg,
                            int offline_active) {
    PhaseSnapshot<S> s;
    s.phase = phase;
    OfflineSnapshot<S> off = offline_snapshot(offline_cfg, offline_active);
    s.matching = matching_potential(*am_, on, off, c_.psi);
    s.m = s.matching.value;
    s.sig = sigma(on.ell2, on.ell3, on.pair_dist);
    s.phi = c_.alpha * s.m + c_.beta * s.sig;
    return s;
  }

  OnlineSnapshot<S> online_before(const RequestTrace<S>& tr) const {
    OnlineSnapshot<S> on;
    on.x1 = tr.pos_before[tr.active_before];
    on.x2 = tr.pos_before[tr.p2];
    on.x3 = tr.pos_before[tr.p3];
    on.ell2 = tr.ell_before[tr.p2];
    on.ell3 = tr.ell_before[tr.p3];
    on.pair_dist = am_->dist(on.x2, on.x3);
    return on;
  }

  OnlineSnapshot<S> online_post_movement(const RequestTrace<S>& tr) const {
    if (tr.segments.empty()) return online_before(tr);
    const auto& seg = tr.segments.back();
    OnlineSnapshot<S> on;
    on.x1 = seg.pos_after[tr.active_before];
    on.x2 = seg.pos_after[tr.p2];
    on.x3 = seg.pos_after[tr.p3];
    on.ell2 = seg.ell2_1;
    on.ell3 = seg.ell3_1;
    on.pair_dist = seg.pair_dist_after;
    return on;
  }

 private:
  static CheckResult<S> check(S slack) {
    CheckResult<S> c;
    c.applicable = true;
    c.pass = slack.sign() >= 0;
    c.slack = std::move(slack);
    return c;
  }

  OfflineSnapshot<S> offline_snapshot(const std::array<PointId, 3>& cfg,
                                      int active) const {
    OfflineSnapshot<S> off;
    off.y1 = cfg[active];
    std::vector<NodeId> ps;
    for (int i = 0; i < 3; ++i)
      if (i != active) ps.push_back(cfg[i]);
    off.ya = ps[0];
    off.yb = ps[1];
    return off;
  }

  // Online snapshot at a movement-segment start (k-th segment).
  OnlineSnapshot<S> online_at_segment_start(const RequestTrace<S>& tr,
                                            std::size_t k) const {
    if (k == 0) {
      OnlineSnapshot<S> on = online_before(tr);
      on.pair_dist = tr.u2_0 + tr.u3_0;  // bridge length of the fresh tripod
      return on;
    }
    const auto& prev = tr.segments[k - 1];
    OnlineSnapshot<S> on;
    on.x1 = prev.pos_after[tr.active_before];
    on.x2 = prev.pos_after[tr.p2];
    on.x3 = prev.pos_after[tr.p3];
    on.ell2 = prev.ell2_1;
    on.ell3 = prev.ell3_1;
    on.pair_dist = prev.pair_dist_after;
    return on;
  }

  CheckResult<S> check_segments(const RequestTrace<S>& tr,
                                const std::array<PointId, 3>& offline_cfg,
                                int offline_active) {
    CheckResult<S> res;
    res.applicable = !tr.segments.empty();
    if (!res.applicable) return res;
    bool first = true;
    for (std::size_t k = 0; k < tr.segments.size(); ++k) {
      const auto& seg = tr.segments[k];
      auto a = snapshot("seg-start", online_at_segment_start(tr, k),
                        offline_cfg, offline_active);
      OnlineSnapshot<S> end;
      end.x1 = seg.pos_after[tr.active_before];
      end.x2 = seg.pos_after[tr.p2];
      end.x3 = seg.pos_after[tr.p3];
      end.ell2 = seg.ell2_1;
      end.ell3 = seg.ell3_1;
      end.pair_dist = seg.pair_dist_after;
      auto b = snapshot("seg-end", end, offline_cfg, offline_active);
      S seg_cost =
          seg.duration * (seg.speed_active + seg.speed2 + seg.speed3);
      S slack = -(seg_cost + (b.phi - a.phi));
      if (first || slack < res.slack) res.slack = slack;
      first = false;
    }
    res.pass = res.slack.sign() >= 0;
    return res;
  }

  // Just before reorganization, when a passive online taxi serves,
  // some minimum matching pairs the offline taxi at r with the serving taxi
  // (or the offline active is at r and is pinned to x1 anyway).
  bool check_server_matched(const RequestTrace<S>& tr, const PhaseSnapshot<S>& s2,
                    const std::array<PointId, 3>& cfg1, int off_active) {
    int server_role = tr.server == tr.p2 ? 2 : (tr.server == tr.p3 ? 3 : 1);
    if (server_role == 1) return true;  // active served, nothing to check
    auto off = offline_snapshot(cfg1, off_active);
    if (am_->dist(off.y1, NodeId(tr.r)).is_zero()) return true;
    bool at_r_a = am_->dist(off.ya, NodeId(tr.r)).is_zero();
    bool at_r_b = am_->dist(off.yb, NodeId(tr.r)).is_zero();
    if (at_r_a && at_r_b) return true;  // either assignment pairs r with the server
    if (!at_r_a && !at_r_b) return true;
    const auto& ev = s2.matching;
    // direct = (x2<->ya, x3<->yb); the assignment pairing the server with
    // the offline taxi at r must achieve the minimum.
    bool serving_is_direct = (server_role == 2) == at_r_a;
    if (serving_is_direct) return ev.cost_direct <= ev.cost_swapped;
    return ev.cost_swapped <= ev.cost_direct;
  }

  AugmentedMetric<S>* am_;
  AlgoConstants<S> c_;
  S kappa_cfg_;

 public:
  struct GrowthReport {
    int segments_checked = 0;
    bool pass = true;
    std::optional<S> min_slack;
  };

  // Growth bound for the passive taxi not matched to r. The bound only
  // speaks about the assignment that is minimal while the taxis move, so a
  // segment is checked under an assignment exactly when that assignment is
  // minimal at both segment endpoints (the matching can switch mid-request;
  // such segments carry no claim and are skipped). Within one segment the
  // speeds are constant, so endpoint differencing is exact.
  GrowthReport check_growth_bound(const RequestTrace<S>& tr,
                                    const OfflineSchedule<S>& sched,
                                    std::size_t t) {
    GrowthReport rep;
    int off_active = sched.active_before(t);
    if (sched.server[t] == off_active) return rep;  // active offline served
    auto cfg1 = sched.configs[t];
    cfg1[sched.server[t]] = tr.r;
    auto off = offline_snapshot(cfg1, off_active);
    bool at_r_a = am_->dist(off.ya, NodeId(tr.r)).is_zero();
    bool at_r_b = am_->dist(off.yb, NodeId(tr.r)).is_zero();
    if (at_r_a == at_r_b) return rep;  // degenerate or absent, nothing to pin
    for (std::size_t k = 0; k < tr.segments.size(); ++k) {
      const auto& seg = tr.segments[k];
      if (seg.single) continue;
      auto a = snapshot("seg-start", online_at_segment_start(tr, k), cfg1,
                        off_active);
      OnlineSnapshot<S> end;
      end.x1 = seg.pos_after[tr.active_before];
      end.x2 = seg.pos_after[tr.p2];
      end.x3 = seg.pos_after[tr.p3];
      end.ell2 = seg.ell2_1;
      end.ell3 = seg.ell3_1;
      end.pair_dist = seg.pair_dist_after;
      auto b = snapshot("seg-end", end, cfg1, off_active);

      // The segment passes if the bound holds for some assignment that is
      // minimal at both endpoints; the best such slack is recorded.
      std::optional<S> best;
      for (bool swapped : {false, true}) {
        bool min_at_start = swapped
                                ? a.matching.cost_swapped <= a.matching.cost_direct
                                : a.matching.cost_direct <= a.matching.cost_swapped;
        bool min_at_end = swapped
                              ? b.matching.cost_swapped <= b.matching.cost_direct
                              : b.matching.cost_direct <= b.matching.cost_swapped;
        if (!min_at_start || !min_at_end) continue;
        // Under this assignment: the role paired with the offline taxi at r.
        int matched_role = at_r_a ? (swapped ? 3 : 2) : (swapped ? 2 : 3);
        int j = matched_role == 2 ? 3 : 2;
        S speed_j = j == 2 ? seg.speed2 : seg.speed3;
        // j's partner is the offline passive away from r; contributions are
        // taken under the same fixed assignment at both endpoints.
        auto contrib = [&](const PhaseSnapshot<S>& s, const S& ell_j) {
          const PairGeometry<S>& geom =
              at_r_a ? s.matching.geom_b : s.matching.geom_a;
          S d_xj_g = j == 2 ? geom.d_x2_g : geom.d_x3_g;
          return pair_contribution(ell_j, d_xj_g, geom.d_g_y, c_.psi);
        };
        OnlineSnapshot<S> start = online_at_segment_start(tr, k);
        S contrib_start = contrib(a, j == 2 ? start.ell2 : start.ell3);
        S contrib_end = contrib(b, j == 2 ? end.ell2 : end.ell3);
        S slack = speed_j * (S(1) - c_.psi) * seg.duration -
                  (contrib_end - contrib_start);
        if (!best || slack > *best) best = slack;
      }
      if (!best) continue;
      if (!rep.min_slack || *best < *rep.min_slack) rep.min_slack = *best;
      if (best->sign() < 0) rep.pass = false;
      ++rep.segments_checked;
    }
    return rep;
  }
};

// Tripod edge-length changes follow from the endpoint distance changes
// (half-sum closed forms). Exact in rational mode; tol absorbs float noise.
template <class S>
bool check_bridge_derivatives(const S& d_x2y_0, const S& d_x3y_0,
                              const S& d_x2x3_0, const S& d_x2y_1,
                              const S& d_x3y_1, const S& d_x2x3_1,
                              const PairGeometry<S>& g0,
                              const PairGeometry<S>& g1, const S& tol) {
  S half(1, 2);
  S dy = d_x2y_1 - d_x2y_0;
  S dz = d_x3y_1 - d_x3y_0;
  S dp = d_x2x3_1 - d_x2x3_0;
  S e2 = (g1.d_x2_g - g0.d_x2_g) - (dy - dz + dp) * half;
  S e3 = (g1.d_x3_g - g0.d_x3_g) - (dz - dy + dp) * half;
  S ey = (g1.d_g_y - g0.d_g_y) - (dy + dz - dp) * half;
  return abs(e2) <= tol && abs(e3) <= tol && abs(ey) <= tol;
}

}  // namespace tripod
