#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tripod/metric.hpp"
#include "tripod/scalar.hpp"

namespace tripod {

enum class Family { Line, Euclidean, Graph, Ultrametric, AdversarialCycle };

inline Family family_from_string(const std::string& s) {
  if (s == "line") return Family::Line;
  if (s == "euclidean") return Family::Euclidean;
  if (s == "graph") return Family::Graph;
  if (s == "ultrametric") return Family::Ultrametric;
  if (s == "adversarial-cycle") return Family::AdversarialCycle;
  throw std::invalid_argument("unknown family: " + s);
}

struct GeneratorSpec {
  Family family = Family::Line;
  std::size_t n = 6;
  std::size_t T = 5;
  std::uint64_t seed = 0;
  long range = 20;          // coordinate / weight range
  std::size_t dim = 2;      // euclidean only
  std::string norm = "l1";  // euclidean only
};

namespace detail {

// Engine draws are used raw so instances do not depend on the standard
// library's distribution implementations.
inline long rnd(std::mt19937_64& eng, long lo, long hi) {
  return lo + static_cast<long>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
}

template <class S>
void floyd_warshall(std::vector<std::vector<S>>& d) {
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
}

template <class S>
void ultrametric_split(std::vector<std::vector<S>>& d,
                       std::vector<std::size_t>& pts, std::size_t lo,
                       std::size_t hi, long height, std::mt19937_64& eng) {
  if (hi - lo <= 1 || height <= 0) {
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = lo; j < hi; ++j)
        if (i != j && d[pts[i]][pts[j]].is_zero())
          d[pts[i]][pts[j]] = S(height > 0 ? height : 1);
    return;
  }
  std::size_t cut = lo + 1 + static_cast<std::size_t>(
                                 eng() % static_cast<std::uint64_t>(hi - lo - 1));
  for (std::size_t i = lo; i < cut; ++i)
    for (std::size_t j = cut; j < hi; ++j)
      d[pts[i]][pts[j]] = d[pts[j]][pts[i]] = S(height);
  long next = height > 1 ? rnd(eng, 1, height - 1) : 1;
  ultrametric_split(d, pts, lo, cut, next, eng);
  next = height > 1 ? rnd(eng, 1, height - 1) : 1;
  ultrametric_split(d, pts, cut, hi, next, eng);
}

}  // namespace detail

template <class S>
MetricInstance<S> generate(const GeneratorSpec& spec) {
  if (spec.n < 3) throw std::invalid_argument("need at least 3 points");
  if (spec.range < 1) throw std::invalid_argument("range must be positive");
  std::mt19937_64 eng(spec.seed ^ (static_cast<std::uint64_t>(spec.family) << 32));
  const std::size_t n = spec.n;
  MetricInstance<S> m;
  m.dist.assign(n, std::vector<S>(n, S(0)));

  switch (spec.family) {
    case Family::Line: {
      std::vector<long> xs(n);
      for (auto& x : xs) x = detail::rnd(eng, 0, spec.range * 4);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m.dist[i][j] = abs(S(xs[i]) - S(xs[j]));
      break;
    }
    case Family::Euclidean: {
      std::vector<std::vector<S>> coords(n, std::vector<S>(spec.dim));
      for (auto& c : coords)
        for (auto& v : c) v = S(detail::rnd(eng, 0, spec.range));
      if (spec.norm == "l1") {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            S v(0);
            for (std::size_t k = 0; k < spec.dim; ++k)
              v += abs(coords[i][k] - coords[j][k]);
            m.dist[i][j] = v;
          }
      } else if (spec.norm == "linf") {
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            S v(0);
            for (std::size_t k = 0; k < spec.dim; ++k)
              v = max(v, abs(coords[i][k] - coords[j][k]));
            m.dist[i][j] = v;
          }
      } else {  // l2: squared-distance surrogate is not a metric; round the
                // root to a rational and repair by metric closure
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            double acc = 0;
            for (std::size_t k = 0; k < spec.dim; ++k) {
              double t = (coords[i][k] - coords[j][k]).to_double();
              acc += t * t;
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", std::sqrt(acc));
            m.dist[i][j] = S::parse(buf);
          }
        detail::floyd_warshall(m.dist);
        for (std::size_t i = 0; i < n; ++i) m.dist[i][i] = S(0);
      }
      break;
    }
    case Family::Graph: {
      const S inf(spec.range * static_cast<long>(n) * 10);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) m.dist[i][j] = inf;
      auto add_edge = [&](std::size_t u, std::size_t v, long w) {
        S sw(w);
        if (sw < m.dist[u][v]) m.dist[u][v] = m.dist[v][u] = sw;
      };
      // random spanning tree, then extra edges
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = n - 1; i > 0; --i)
        std::swap(order[i], order[eng() % (i + 1)]);
      for (std::size_t i = 1; i < n; ++i)
        add_edge(order[i], order[detail::rnd(eng, 0, i - 1)],
                 detail::rnd(eng, 1, spec.range));
      std::size_t extra = n;
      for (std::size_t e = 0; e < extra; ++e)
        add_edge(eng() % n, eng() % n, detail::rnd(eng, 1, spec.range));
      for (std::size_t i = 0; i < n; ++i) m.dist[i][i] = S(0);
      detail::floyd_warshall(m.dist);
      break;
    }
    case Family::Ultrametric: {
      std::vector<std::size_t> pts(n);
      std::iota(pts.begin(), pts.end(), 0);
      detail::ultrametric_split(m.dist, pts, 0, n, spec.range, eng);
      for (std::size_t i = 0; i < n; ++i) m.dist[i][i] = S(0);
      break;
    }
    case Family::AdversarialCycle: {
      // cycle metric with far-apart hot spots revisited in rotation
      std::vector<long> arc(n);
      long total = 0;
      for (auto& a : arc) {
        a = detail::rnd(eng, 1, spec.range);
        total += a;
      }
      std::vector<long> pref(n, 0);
      for (std::size_t i = 1; i < n; ++i) pref[i] = pref[i - 1] + arc[i - 1];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          long along = std::labs(pref[i] - pref[j]);
          m.dist[i][j] = S(std::min(along, total - along));
        }
      break;
    }
  }

  for (int i = 0; i < 3; ++i)
    m.initial[i] = static_cast<PointId>(eng() % n);
  if (spec.family == Family::AdversarialCycle) {
    // rotate among a few spread-out points to force repeated reorganizations
    std::size_t hot = std::min<std::size_t>(4, n);
    for (std::size_t t = 0; t < spec.T; ++t) {
      PointId r = static_cast<PointId>((t * (n / hot)) % n);
      PointId s = eng() % 3 == 0 ? static_cast<PointId>(eng() % n) : r;
      m.requests.emplace_back(r, s);
    }
  } else {
    for (std::size_t t = 0; t < spec.T; ++t) {
      PointId r = static_cast<PointId>(eng() % n);
      PointId s = eng() % 2 == 0 ? r : static_cast<PointId>(eng() % n);
      m.requests.emplace_back(r, s);
    }
  }
  return m;
}

}  // namespace tripod
