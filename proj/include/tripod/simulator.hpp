#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tripod/augmented.hpp"
#include "tripod/metric.hpp"
#include "tripod/scalar.hpp"

namespace tripod {

// Speed and potential constants derived from a single knob epsilon.
template <class S>
struct AlgoConstants {
  S eps, a, b, psi, beta, alpha;

  static AlgoConstants from_epsilon(const S& eps) {
    if (eps.sign() <= 0 || eps >= S(1))
      throw std::domain_error("epsilon must lie in (0,1)");
    S e2 = eps * eps;
    S e4 = e2 * e2;
    AlgoConstants c{eps, e4, e2, eps, S(1) / e2, S(1) / (e4 * eps)};
    // a < b < psi < 1 < alpha*a < beta < alpha*b
    S one(1);
    if (!(c.a < c.b && c.b < c.psi && c.psi < one && one < c.alpha * c.a &&
          c.alpha * c.a < c.beta && c.beta < c.alpha * c.b))
      throw std::domain_error("constants hierarchy violated");
    return c;
  }
};

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Online state between requests: taxi positions (possibly virtual nodes),
// the active taxi, and the interval length of each passive taxi.
template <class S>
struct TaxiState {
  std::array<NodeId, 3> pos{};
  int active = 0;
  std::array<S, 3> ell{};  // ell[active] is unused and kept at 0

  // Passive taxi ids in ascending order; first is role x2, second role x3.
  std::pair<int, int> passives() const {
    switch (active) {
      case 0: return {1, 2};
      case 1: return {0, 2};
      default: return {0, 1};
    }
  }
};

enum class EventKind {
  ActiveReachesR,
  PassiveReachesR,
  PassiveReachesCenter,
  QReachesCenter,
  SpeedThresholdCrossed,
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::ActiveReachesR: return "active_reaches_r";
    case EventKind::PassiveReachesR: return "passive_reaches_r";
    case EventKind::PassiveReachesCenter: return "passive_reaches_center";
    case EventKind::QReachesCenter: return "q_reaches_center";
    case EventKind::SpeedThresholdCrossed: return "speed_threshold_crossed";
  }
  return "?";
}

template <class S>
struct Event {
  EventKind kind;
  int role;  // 2 or 3 for passive events, 0 for the active taxi
  S time;
};

// Continuous-movement state of one request, in tripod coordinates.
// u_i is the distance from passive role i to the center e, z_i the signed
// offset of the interval endpoint q_i from e on role i's side (negative
// when q_i lies beyond e on the other leg), so that ell_i = u_i - z_i.
// In single-mover mode the mover sits at e and travels along the r edge;
// all interval data is frozen.
template <class S>
struct MovementGeom {
  S u2, u3;
  S z2, z3;
  S ell2, ell3;
  S ar;      // center-to-r edge length
  S d1r;     // active taxi's distance to r at phase start
  S adv;     // distance traveled by the active taxi
  bool single = false;
  int mover_role = 0;  // valid in single mode
  S travel;            // mover's progress along the r edge

  S u(int role) const { return role == 2 ? u2 : u3; }
  S z(int role) const { return role == 2 ? z2 : z3; }
  S ell(int role) const { return role == 2 ? ell2 : ell3; }
};

// Speed of an unobstructed passive taxi (Algorithm speed rule): fast iff the
// branching point lies inside the taxi's interval but not at the taxi itself.
template <class S>
S passive_speed(const S& ell_i, const S& d_xi_e, const S& b) {
  if (ell_i >= d_xi_e && d_xi_e.sign() > 0) return S(1) + b;
  return S(1);
}

template <class S>
struct Segment {
  bool single;
  int mover_role;
  S duration;
  S speed_active, speed2, speed3;  // role speeds; 0 means stopped
  S adv0, u2_0, u3_0, z2_0, z3_0, travel0;
  S ell2_0, ell3_0;
  Event<S> event;
  std::array<NodeId, 3> pos_after{};  // by taxi id, materialized nodes
  S ell2_1, ell3_1;
  S pair_dist_after;  // d(x2,x3) at the boundary
};

template <class S>
struct ReorgRecord {
  bool fired = false;
  NodeId f = 0;
  S d_x1f, d_x1x2, d_x1x3;
  S ell2_before, ell3_before;
  S ell2_after, ell3_after;  // ell2: stays with the other passive,
                             // ell3: inherited by the newly passive taxi
};

template <class S>
struct RequestTrace {
  std::size_t index = 0;
  PointId r = 0, s = 0;
  std::array<NodeId, 3> pos_before{};
  int active_before = 0;
  std::array<S, 3> ell_before{};
  int p2 = 0, p3 = 0;  // passive taxi ids in role order
  NodeId center = 0;
  S u2_0, u3_0, ar, d1r, z2_0, z3_0;
  std::vector<Segment<S>> segments;
  S cost;
  int server = 0;
  ReorgRecord<S> reorg;
  std::array<NodeId, 3> pos_after{};
  int active_after = 0;
  std::array<S, 3> ell_after{};
};

template <class S>
struct RunResult {
  S simulated_cost;
  S realized_cost;
  std::vector<RequestTrace<S>> traces;
  TaxiState<S> final_state;
};

template <class S>
class Simulator {
 public:
  static constexpr int kMaxEventsPerRequest = 64;

  Simulator(AugmentedMetric<S>& am, AlgoConstants<S> constants)
      : am_(&am), c_(std::move(constants)) {
    state_.pos = {am.base().initial[0], am.base().initial[1],
                  am.base().initial[2]};
    state_.active = 0;
    state_.ell = {S(0), S(0), S(0)};
  }

  const TaxiState<S>& state() const { return state_; }
  const AlgoConstants<S>& constants() const { return c_; }
  AugmentedMetric<S>& metric() { return *am_; }

  // Places the interval endpoints on the passive bridge of the given tripod
  // and returns the signed q offsets (z2, z3) from the center.
  static std::pair<S, S> place_interval_endpoints(const S& ell2, const S& ell3,
                                                  const S& u2, const S& u3) {
    if (ell2.sign() < 0 || ell3.sign() < 0 || ell2 + ell3 > u2 + u3)
      throw InvariantViolation("interval disjointness violated at placement");
    return {u2 - ell2, u3 - ell3};
  }

  // Movement mode at phase start. Returns 0 for both-unobstructed, else the
  // mover's role (the passive taxi sitting at the branching point; role 2 on
  // the co-located tie).
  static int classify_obstruction(const S& u2, const S& u3) {
    bool at2 = u2.is_zero();
    bool at3 = u3.is_zero();
    if (!at2 && !at3) return 0;
    if (at2) return 2;
    return 3;
  }

  // Minimum-time next event. Tie priority: passive center/terminal arrivals
  // (role 2 first), then the active taxi reaching r, then q arrivals, then
  // speed-threshold crossings; a passive and the active taxi reaching r
  // simultaneously resolves to the active taxi.
  Event<S> next_event(const MovementGeom<S>& g) const {
    std::vector<Event<S>> cands;
    S rem_active = g.d1r - g.adv;
    if (g.single) {
      cands.push_back({EventKind::PassiveReachesR, g.mover_role,
                       g.ar - g.travel});
      cands.push_back({EventKind::ActiveReachesR, 0, rem_active / c_.a});
    } else {
      for (int role : {2, 3}) {
        S speed = passive_speed(g.ell(role), g.u(role), c_.b);
        cands.push_back({g.ar.is_zero() ? EventKind::PassiveReachesR
                                        : EventKind::PassiveReachesCenter,
                         role, g.u(role) / speed});
        S zr = g.z(role);
        if (!zr.is_zero())
          cands.push_back({zr.sign() > 0 ? EventKind::SpeedThresholdCrossed
                                         : EventKind::QReachesCenter,
                           role, abs(zr)});
      }
      cands.push_back({EventKind::ActiveReachesR, 0, rem_active / c_.a});
    }
    const Event<S>* best = nullptr;
    for (const auto& e : cands) {
      if (e.time.sign() < 0)
        throw std::logic_error("negative candidate event time");
      if (!best || e.time < best->time ||
          (e.time == best->time && beats(e, *best)))
        best = &e;
    }
    return *best;
  }

  // Linear motion over dt (which must not exceed the next event time).
  void advance(MovementGeom<S>& g, const S& dt) const {
    g.adv += c_.a * dt;
    if (g.single) {
      g.travel += dt;
      return;
    }
    for (int role : {2, 3}) {
      S& u = role == 2 ? g.u2 : g.u3;
      S& z = role == 2 ? g.z2 : g.z3;
      S& ell = role == 2 ? g.ell2 : g.ell3;
      S speed = passive_speed(ell, u, c_.b);
      u -= speed * dt;
      if (z.sign() > 0)
        z -= dt;
      else if (z.sign() < 0)
        z += dt;
      ell = u - z;
    }
  }

  RequestTrace<S> serve_request(PointId r, PointId s) {
    RequestTrace<S> tr;
    tr.index = request_index_++;
    tr.r = r;
    tr.s = s;
    tr.pos_before = state_.pos;
    tr.active_before = state_.active;
    tr.ell_before = state_.ell;

    auto [p2, p3] = state_.passives();
    tr.p2 = p2;
    tr.p3 = p3;

    NodeId rn = r;
    auto trip = am_->materialize_tripod(state_.pos[p2], state_.pos[p3], rn);
    tr.center = trip.center;

    MovementGeom<S> g;
    g.u2 = trip.xe;
    g.u3 = trip.ye;
    g.ar = trip.ze;
    g.ell2 = state_.ell[p2];
    g.ell3 = state_.ell[p3];
    std::tie(g.z2, g.z3) =
        place_interval_endpoints(g.ell2, g.ell3, g.u2, g.u3);
    g.d1r = am_->dist(state_.pos[state_.active], rn);
    g.adv = S(0);
    g.travel = S(0);
    tr.u2_0 = g.u2;
    tr.u3_0 = g.u3;
    tr.ar = g.ar;
    tr.d1r = g.d1r;
    tr.z2_0 = g.z2;
    tr.z3_0 = g.z3;
    tr.cost = S(0);

    int server = server_at_r(rn);
    if (server < 0) {
      int mover = classify_obstruction(g.u2, g.u3);
      if (mover != 0) enter_single(g, mover);
      server = movement_phase(tr, g, rn);
      // Final positions and intervals come from the last segment boundary.
      state_.pos = tr.segments.back().pos_after;
      state_.ell[p2] = g.ell2;
      state_.ell[p3] = g.ell3;
      state_.ell[state_.active] = S(0);
      state_.pos[server] = rn;
    }
    tr.server = server;

    if (server != state_.active) reorganize(tr, server);
    check_credit_sum();
    state_.pos[state_.active] = s;  // relocation, no cost
    tr.pos_after = state_.pos;
    tr.active_after = state_.active;
    tr.ell_after = state_.ell;
    return tr;
  }

  RunResult<S> run() {
    RunResult<S> res;
    res.simulated_cost = S(0);
    res.realized_cost = S(0);
    std::array<PointId, 3> physical = am_->base().initial;
    check_credit_sum();
    for (const auto& [r, s] : am_->base().requests) {
      auto tr = serve_request(r, s);
      res.simulated_cost += tr.cost;
      res.realized_cost += am_->base().d(physical[tr.server], r);
      physical[tr.server] = s;
      res.traces.push_back(std::move(tr));
    }
    res.final_state = state_;
    return res;
  }

 private:
  static bool beats(const Event<S>& a, const Event<S>& b) {
    auto rank = [](const Event<S>& e) {
      switch (e.kind) {
        case EventKind::PassiveReachesCenter: return 0;
        case EventKind::ActiveReachesR: return 1;
        case EventKind::PassiveReachesR: return 2;
        case EventKind::QReachesCenter: return 3;
        case EventKind::SpeedThresholdCrossed: return 4;
      }
      return 5;
    };
    if (rank(a) != rank(b)) return rank(a) < rank(b);
    return a.role < b.role;
  }

  // Taxi already at r, if any: the active taxi first, then role 2, role 3.
  int server_at_r(NodeId rn) const {
    auto [p2, p3] = state_.passives();
    for (int id : {state_.active, p2, p3})
      if (am_->dist(state_.pos[id], rn).is_zero()) return id;
    return -1;
  }

  void enter_single(MovementGeom<S>& g, int mover) {
    g.single = true;
    g.mover_role = mover;
    // The mover is at the center; its interval data is frozen from here on.
  }

  // Event loop of one request. Returns the serving taxi id.
  int movement_phase(RequestTrace<S>& tr, MovementGeom<S>& g, NodeId rn) {
    auto [p2, p3] = state_.passives();
    NodeId start2 = state_.pos[p2];
    NodeId start3 = state_.pos[p3];
    NodeId start1 = state_.pos[state_.active];
    for (int iter = 0; iter < kMaxEventsPerRequest; ++iter) {
      Segment<S> seg;
      seg.single = g.single;
      seg.mover_role = g.single ? g.mover_role : 0;
      seg.adv0 = g.adv;
      seg.u2_0 = g.u2;
      seg.u3_0 = g.u3;
      seg.z2_0 = g.z2;
      seg.z3_0 = g.z3;
      seg.travel0 = g.travel;
      seg.ell2_0 = g.ell2;
      seg.ell3_0 = g.ell3;
      seg.speed_active = c_.a;
      if (g.single) {
        seg.speed2 = g.mover_role == 2 ? S(1) : S(0);
        seg.speed3 = g.mover_role == 3 ? S(1) : S(0);
      } else {
        seg.speed2 = passive_speed(g.ell2, g.u2, c_.b);
        seg.speed3 = passive_speed(g.ell3, g.u3, c_.b);
      }

      Event<S> ev = next_event(g);
      seg.event = ev;
      seg.duration = ev.time;
      tr.cost += ev.time * (seg.speed_active + seg.speed2 + seg.speed3);
      advance(g, ev.time);

      int server = -1;
      switch (ev.kind) {
        case EventKind::ActiveReachesR:
          server = state_.active;
          break;
        case EventKind::PassiveReachesR:
          server = ev.role == 2 ? p2 : p3;
          break;
        case EventKind::PassiveReachesCenter:
          enter_single(g, ev.role);
          break;
        case EventKind::QReachesCenter:
        case EventKind::SpeedThresholdCrossed:
          break;
      }

      seg.pos_after[state_.active] =
          am_->point_on_segment(start1, rn, g.adv);
      seg.pos_after[p2] = passive_node(g, 2, start2, tr.center, tr.u2_0, rn);
      seg.pos_after[p3] = passive_node(g, 3, start3, tr.center, tr.u3_0, rn);
      if (server >= 0) seg.pos_after[server] = rn;
      seg.ell2_1 = g.ell2;
      seg.ell3_1 = g.ell3;
      seg.pair_dist_after = am_->dist(seg.pos_after[p2], seg.pos_after[p3]);
      if (g.ell2.sign() < 0 || g.ell3.sign() < 0 ||
          g.ell2 + g.ell3 > seg.pair_dist_after)
        throw InvariantViolation("interval disjointness violated at event");
      tr.segments.push_back(std::move(seg));
      if (server >= 0) return server;
    }
    throw std::logic_error("movement phase exceeded the event cap");
  }

  NodeId passive_node(const MovementGeom<S>& g, int role, NodeId start,
                      NodeId center, const S& u0, NodeId rn) {
    if (g.single && g.mover_role == role) {
      if (g.travel == g.ar) return rn;
      return am_->point_on_segment(center, rn, g.travel);
    }
    return am_->point_on_segment(start, center, u0 - g.u(role));
  }

  // A passive taxi served: interval update and active/passive role swap.
  void reorganize(RequestTrace<S>& tr, int server) {
    int a_id = state_.active;
    auto [p2, p3] = state_.passives();
    int other = server == p2 ? p3 : p2;

    auto trip = am_->materialize_tripod(state_.pos[a_id], state_.pos[other],
                                        state_.pos[server]);
    ReorgRecord<S>& rec = tr.reorg;
    rec.fired = true;
    rec.f = trip.center;
    rec.d_x1f = trip.xe;
    rec.d_x1x2 = am_->dist(state_.pos[a_id], state_.pos[other]);
    rec.d_x1x3 = am_->dist(state_.pos[a_id], state_.pos[server]);
    rec.ell2_before = state_.ell[other];
    rec.ell3_before = state_.ell[server];

    state_.ell[other] =
        min(state_.ell[other] + rec.d_x1f, rec.d_x1x2);
    state_.ell[a_id] = max(S(0), state_.ell[server] - rec.d_x1x3);
    state_.ell[server] = S(0);
    state_.active = server;

    rec.ell2_after = state_.ell[other];
    rec.ell3_after = state_.ell[a_id];
  }

  void check_credit_sum() const {
    auto [p2, p3] = state_.passives();
    const S& l2 = state_.ell[p2];
    const S& l3 = state_.ell[p3];
    if (l2.sign() < 0 || l3.sign() < 0 ||
        l2 + l3 > am_->dist(state_.pos[p2], state_.pos[p3]))
      throw InvariantViolation("interval disjointness violated at boundary");
  }

  AugmentedMetric<S>* am_;
  AlgoConstants<S> c_;
  TaxiState<S> state_;
  std::size_t request_index_ = 0;
};

}  // namespace tripod
