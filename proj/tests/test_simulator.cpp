#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "tripod/augmented.hpp"
#include "tripod/metric.hpp"
#include "tripod/simulator.hpp"

using tripod::AlgoConstants;
using tripod::AugmentedMetric;
using tripod::Event;
using tripod::EventKind;
using tripod::Fp;
using tripod::InvariantViolation;
using tripod::MetricInstance;
using tripod::MovementGeom;
using tripod::NodeId;
using tripod::passive_speed;
using tripod::PointId;
using tripod::Rat;
using tripod::RequestTrace;
using tripod::Simulator;

namespace {

template <class S>
MetricInstance<S> line_metric(std::vector<long> xs) {
  MetricInstance<S> m;
  m.dist.assign(xs.size(), std::vector<S>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      m.dist[i][j] = S(std::labs(xs[i] - xs[j]));
  m.initial = {0, 1, 2};
  return m;
}

AlgoConstants<Rat> tenth() { return AlgoConstants<Rat>::from_epsilon(Rat(1, 10)); }

template <class S>
oracle::PhaseInput phase_input(const RequestTrace<S>& tr,
                               const AlgoConstants<S>& c) {
  oracle::PhaseInput in;
  in.d1r = tr.d1r.to_double();
  in.u2 = tr.u2_0.to_double();
  in.u3 = tr.u3_0.to_double();
  in.ar = tr.ar.to_double();
  in.ell2 = tr.ell_before[tr.p2].to_double();
  in.ell3 = tr.ell_before[tr.p3].to_double();
  in.a = c.a.to_double();
  in.b = c.b.to_double();
  return in;
}

template <class S>
int server_role(const RequestTrace<S>& tr) {
  if (tr.server == tr.p2) return 2;
  if (tr.server == tr.p3) return 3;
  return 0;
}

}  // namespace

TEST_CASE("constants derive from epsilon and keep their ordering") {
  auto c = tenth();
  CHECK(c.a == Rat(1, 10000));
  CHECK(c.b == Rat(1, 100));
  CHECK(c.psi == Rat(1, 10));
  CHECK(c.beta == Rat(100));
  CHECK(c.alpha == Rat(100000));
  CHECK_THROWS_AS(AlgoConstants<Rat>::from_epsilon(Rat(0)), std::domain_error);
  CHECK_THROWS_AS(AlgoConstants<Rat>::from_epsilon(Rat(1)), std::domain_error);
  CHECK_THROWS_AS(AlgoConstants<Rat>::from_epsilon(Rat(-1, 2)),
                  std::domain_error);
  for (long num : {1L, 3L, 9L, 99L}) {
    auto cc = AlgoConstants<Rat>::from_epsilon(Rat(num, 100));
    CHECK(cc.alpha * cc.a > Rat(1));
  }
}

TEST_CASE("interval endpoint placement") {
  auto [z2, z3] = Simulator<Rat>::place_interval_endpoints(Rat(6), Rat(0),
                                                           Rat(4), Rat(6));
  CHECK(z2 == Rat(-2));
  CHECK(z3 == Rat(6));
  auto [w2, w3] = Simulator<Rat>::place_interval_endpoints(Rat(0), Rat(0),
                                                           Rat(4), Rat(6));
  CHECK(w2 == Rat(4));
  CHECK(w3 == Rat(6));
  CHECK_THROWS_AS(Simulator<Rat>::place_interval_endpoints(Rat(6), Rat(5),
                                                           Rat(4), Rat(6)),
                  InvariantViolation);
  CHECK_THROWS_AS(Simulator<Rat>::place_interval_endpoints(Rat(-1), Rat(0),
                                                           Rat(4), Rat(6)),
                  InvariantViolation);
}

TEST_CASE("obstruction classification") {
  CHECK(Simulator<Rat>::classify_obstruction(Rat(3), Rat(4)) == 0);
  CHECK(Simulator<Rat>::classify_obstruction(Rat(0), Rat(4)) == 2);
  CHECK(Simulator<Rat>::classify_obstruction(Rat(3), Rat(0)) == 3);
  CHECK(Simulator<Rat>::classify_obstruction(Rat(0), Rat(0)) == 2);
}

TEST_CASE("passive speed rule") {
  Rat b(1, 100);
  CHECK(passive_speed(Rat(0), Rat(4), b) == Rat(1));
  CHECK(passive_speed(Rat(4), Rat(4), b) == Rat(1) + b);
  CHECK(passive_speed(Rat(5), Rat(3), b) == Rat(1) + b);
  CHECK(passive_speed(Rat(5), Rat(0), b) == Rat(1));
  CHECK(passive_speed(Rat(3), Rat(4), b) == Rat(1));
}

TEST_CASE("next_event picks the earliest candidate with the tie priority") {
  auto m = line_metric<Rat>({0, 1, 2});
  AugmentedMetric<Rat> am(m);
  Simulator<Rat> sim(am, tenth());
  const Rat b(1, 100);

  MovementGeom<Rat> g;
  g.u2 = Rat(4);
  g.u3 = Rat(6);
  g.z2 = Rat(0);
  g.z3 = Rat(6);
  g.ell2 = Rat(4);
  g.ell3 = Rat(0);
  g.ar = Rat(3);
  g.d1r = Rat(1000);
  g.adv = Rat(0);
  g.travel = Rat(0);
  auto ev = sim.next_event(g);
  CHECK(ev.kind == EventKind::PassiveReachesCenter);
  CHECK(ev.role == 2);
  CHECK(ev.time == Rat(4) / (Rat(1) + b));

  g.ell2 = Rat(0);
  g.z2 = Rat(4);
  ev = sim.next_event(g);  // both passives at speed 1, role 2 closer
  CHECK(ev.kind == EventKind::PassiveReachesCenter);
  CHECK(ev.time == Rat(4));

  g.ar = Rat(0);
  ev = sim.next_event(g);
  CHECK(ev.kind == EventKind::PassiveReachesR);
  CHECK(ev.role == 2);

  // q offset events: positive z crosses e exactly when |z| elapses
  g.ar = Rat(3);
  g.u2 = Rat(10);
  g.z2 = Rat(2);
  g.ell2 = Rat(8);
  ev = sim.next_event(g);
  CHECK(ev.kind == EventKind::SpeedThresholdCrossed);
  CHECK(ev.role == 2);
  CHECK(ev.time == Rat(2));

  g.z2 = Rat(-2);
  g.ell2 = Rat(12);
  ev = sim.next_event(g);
  CHECK(ev.kind == EventKind::QReachesCenter);
  CHECK(ev.time == Rat(2));

  // single mode: simultaneous arrivals resolve to the active taxi
  MovementGeom<Rat> s;
  s.single = true;
  s.mover_role = 2;
  s.ar = Rat(5);
  s.travel = Rat(0);
  s.d1r = Rat(5) * sim.constants().a;
  s.adv = Rat(0);
  s.u2 = s.u3 = s.z2 = s.z3 = s.ell2 = s.ell3 = Rat(0);
  ev = sim.next_event(s);
  CHECK(ev.kind == EventKind::ActiveReachesR);
  CHECK(ev.time == Rat(5));

  s.d1r = Rat(6) * sim.constants().a;
  ev = sim.next_event(s);
  CHECK(ev.kind == EventKind::PassiveReachesR);
  CHECK(ev.role == 2);
}

TEST_CASE("advance moves at the published rates") {
  auto m = line_metric<Rat>({0, 1, 2});
  AugmentedMetric<Rat> am(m);
  Simulator<Rat> sim(am, tenth());
  const Rat b(1, 100);

  MovementGeom<Rat> g;
  g.u2 = Rat(4);
  g.u3 = Rat(6);
  g.z2 = Rat(-2);  // q beyond e: fast mode, ell shrinks at rate 2+b
  g.z3 = Rat(6);
  g.ell2 = Rat(6);
  g.ell3 = Rat(0);
  g.ar = Rat(10);
  g.d1r = Rat(100);
  g.adv = Rat(0);
  g.travel = Rat(0);
  sim.advance(g, Rat(1));
  CHECK(g.u2 == Rat(3) - b);
  CHECK(g.z2 == Rat(-1));
  CHECK(g.ell2 == Rat(4) - b);  // dropped by 2+b
  CHECK(g.u3 == Rat(5));
  CHECK(g.z3 == Rat(5));
  CHECK(g.ell3 == Rat(0));
  CHECK(g.adv == sim.constants().a);

  MovementGeom<Rat> s;
  s.single = true;
  s.mover_role = 3;
  s.ar = Rat(10);
  s.travel = Rat(0);
  s.d1r = Rat(100);
  s.adv = Rat(0);
  s.u2 = s.u3 = s.z2 = s.z3 = s.ell2 = s.ell3 = Rat(0);
  sim.advance(s, Rat(4));
  CHECK(s.travel == Rat(4));
  CHECK(s.adv == Rat(4) * sim.constants().a);
}

TEST_CASE("line run: passive serves, active creeps, exact cost") {
  auto m = line_metric<Rat>({100, 0, 10, 4});
  m.requests = {{3, 3}};
  AugmentedMetric<Rat> am(m);
  Simulator<Rat> sim(am, tenth());
  auto res = sim.run();
  REQUIRE(res.traces.size() == 1);
  const auto& tr = res.traces[0];
  CHECK(tr.p2 == 1);
  CHECK(tr.p3 == 2);
  CHECK(tr.u2_0 == Rat(4));
  CHECK(tr.u3_0 == Rat(6));
  CHECK(tr.ar == Rat(0));
  CHECK(tr.d1r == Rat(96));
  REQUIRE(tr.segments.size() == 1);
  CHECK(tr.segments[0].event.kind == EventKind::PassiveReachesR);
  CHECK(tr.segments[0].event.role == 2);
  CHECK(tr.segments[0].duration == Rat(4));
  CHECK(tr.server == 1);
  CHECK(tr.cost == Rat(20001, 2500));  // 8 + 4a = 8.0004
  CHECK(res.simulated_cost == Rat(20001, 2500));
  CHECK(res.realized_cost == Rat(4));

  // final geometry: active crept 4a, the far passive walked 4
  const auto& st = res.final_state;
  CHECK(st.active == 1);
  CHECK(am.dist(st.pos[0], 0) == Rat(1, 2500));
  CHECK(am.dist(st.pos[1], 3) == Rat(0));
  CHECK(am.dist(st.pos[2], 3) == Rat(2));
  CHECK(am.dist(st.pos[2], 2) == Rat(4));

  // reorganization ran with the served taxi becoming active; the crept
  // active taxi sits on a bridge interior, reachable only via its endpoints,
  // so d(x1, x2) = 4a + 94 rather than the line-coordinate difference
  REQUIRE(tr.reorg.fired);
  CHECK(tr.reorg.d_x1x3 == Rat(239999, 2500));  // 95.9996
  CHECK(tr.reorg.d_x1x2 == Rat(235001, 2500));  // 94.0004
  CHECK(tr.reorg.d_x1f == Rat(94));
  CHECK(st.ell[2] == Rat(94));
  CHECK(st.ell[0] == Rat(0));
}

TEST_CASE("request at an occupied point costs nothing and reorganizes") {
  auto m = line_metric<Rat>({0, 10, 4});
  m.requests = {{2, 2}};
  AugmentedMetric<Rat> am(m);
  Simulator<Rat> sim(am, tenth());
  auto res = sim.run();
  const auto& tr = res.traces[0];
  CHECK(tr.segments.empty());
  CHECK(tr.cost == Rat(0));
  CHECK(tr.server == 2);
  REQUIRE(tr.reorg.fired);
  CHECK(tr.reorg.d_x1f == Rat(4));
  CHECK(tr.reorg.d_x1x2 == Rat(10));
  CHECK(tr.reorg.d_x1x3 == Rat(4));
  CHECK(tr.reorg.ell2_after == Rat(4));
  CHECK(tr.reorg.ell3_after == Rat(0));
  CHECK(res.final_state.active == 2);
  CHECK(res.final_state.ell[1] == Rat(4));
  CHECK(res.final_state.ell[0] == Rat(0));
}

TEST_CASE("active taxi serving skips reorganization") {
  auto m = line_metric<Rat>({4, 100, 200});
  m.requests = {{0, 0}};
  AugmentedMetric<Rat> am(m);
  Simulator<Rat> sim(am, tenth());
  auto res = sim.run();
  CHECK(res.traces[0].server == 0);
  CHECK_FALSE(res.traces[0].reorg.fired);
  CHECK(res.final_state.active == 0);
  CHECK(res.traces[0].cost == Rat(0));
}

TEST_CASE("movement matches the small-step discretization oracle") {
  auto c = tenth();
  std::mt19937_64 eng(9101);
  int phases = 0;
  while (phases < 8) {
    tripod::GeneratorSpec spec;
    spec.family = eng() % 2 == 0 ? tripod::Family::Line : tripod::Family::Graph;
    spec.n = 5;
    spec.T = 2;
    spec.seed = eng();
    spec.range = 3;
    auto m = tripod::generate<Rat>(spec);
    AugmentedMetric<Rat> am(m);
    Simulator<Rat> sim(am, c);
    auto res = sim.run();
    for (const auto& tr : res.traces) {
      if (tr.segments.empty()) continue;
      auto out = oracle::discretize_phase(phase_input(tr, c), 1e-5);
      double cost = tr.cost.to_double();
      Rat dur(0);
      for (const auto& s : tr.segments) dur += s.duration;
      CHECK(cost == doctest::Approx(out.cost).epsilon(1e-3));
      CHECK(dur.to_double() == doctest::Approx(out.duration).epsilon(1e-3));
      CHECK(server_role(tr) == out.server_role);
      ++phases;
    }
  }
}

TEST_CASE("recorded events reproduce exactly from segment start data") {
  auto c = tenth();
  std::mt19937_64 eng(9102);
  for (int rep = 0; rep < 12; ++rep) {
    auto m = oracle::random_metric<Rat>(eng, 6, 4);
    AugmentedMetric<Rat> am(m);
    Simulator<Rat> sim(am, c);
    auto res = sim.run();
    for (const auto& tr : res.traces) {
      Rat total(0);
      for (const auto& seg : tr.segments) {
        MovementGeom<Rat> g;
        g.single = seg.single;
        g.mover_role = seg.mover_role;
        g.u2 = seg.u2_0;
        g.u3 = seg.u3_0;
        g.z2 = seg.z2_0;
        g.z3 = seg.z3_0;
        g.ell2 = seg.ell2_0;
        g.ell3 = seg.ell3_0;
        g.ar = tr.ar;
        g.d1r = tr.d1r;
        g.adv = seg.adv0;
        g.travel = seg.travel0;
        auto ev = sim.next_event(g);
        REQUIRE(ev.kind == seg.event.kind);
        REQUIRE(ev.role == seg.event.role);
        REQUIRE(ev.time == seg.event.time);
        REQUIRE(seg.duration == ev.time);
        total += seg.duration * (seg.speed_active + seg.speed2 + seg.speed3);
      }
      REQUIRE(total == tr.cost);
    }
  }
}

TEST_CASE("random runs keep invariants, terminate, and stay single-moded") {
  auto c = tenth();
  std::mt19937_64 eng(9103);
  for (int rep = 0; rep < 30; ++rep) {
    auto m = oracle::random_metric<Rat>(eng, 4 + eng() % 5, 3 + eng() % 6);
    AugmentedMetric<Rat> am(m);
    Simulator<Rat> sim(am, c);
    auto res = sim.run();  // throws on any invariant breach
    REQUIRE(res.realized_cost <= res.simulated_cost);
    REQUIRE(res.realized_cost.sign() >= 0);
    for (const auto& tr : res.traces) {
      REQUIRE(tr.segments.size() <= 10);
      bool single_seen = false;
      for (const auto& seg : tr.segments) {
        if (single_seen) REQUIRE(seg.single);
        single_seen = single_seen || seg.single;
        REQUIRE(seg.duration.sign() >= 0);
      }
    }
  }
}

TEST_CASE("float mode tracks rational mode on small instances") {
  std::mt19937_64 eng(9104);
  for (int rep = 0; rep < 6; ++rep) {
    auto mr = oracle::random_metric<Rat>(eng, 5, 4);
    MetricInstance<Fp> mf;
    mf.initial = mr.initial;
    mf.requests = mr.requests;
    mf.dist.assign(mr.size(), std::vector<Fp>(mr.size()));
    for (std::size_t i = 0; i < mr.size(); ++i)
      for (std::size_t j = 0; j < mr.size(); ++j)
        mf.dist[i][j] = Fp(mr.dist[i][j].to_double());

    AugmentedMetric<Rat> ar(mr);
    Simulator<Rat> sr(ar, AlgoConstants<Rat>::from_epsilon(Rat(1, 10)));
    auto rr = sr.run();
    AugmentedMetric<Fp> af(mf);
    Simulator<Fp> sf(af, AlgoConstants<Fp>::from_epsilon(Fp(1, 10)));
    auto rf = sf.run();
    CHECK(rf.simulated_cost.to_double() ==
          doctest::Approx(rr.simulated_cost.to_double()).epsilon(1e-6));
    CHECK(rf.realized_cost.to_double() ==
          doctest::Approx(rr.realized_cost.to_double()).epsilon(1e-6));
  }
}
