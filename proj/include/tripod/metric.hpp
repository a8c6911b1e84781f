#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tripod/scalar.hpp"

namespace tripod {

using PointId = std::size_t;

// A finitely presented metric space plus the taxi problem data attached to it:
// an initial configuration of three taxis and a request sequence.
template <class S>
struct MetricInstance {
  std::vector<std::string> names;      // optional, may be empty
  std::vector<std::vector<S>> dist;    // symmetric, zero diagonal
  std::array<PointId, 3> initial{};
  std::vector<std::pair<PointId, PointId>> requests;

  std::size_t size() const { return dist.size(); }

  const S& d(PointId i, PointId j) const { return dist[i][j]; }
};

struct MetricViolation {
  enum class Kind { Dimension, Diagonal, Negative, Asymmetry, Triangle, BadIndex };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;
  std::string describe() const {
    auto t = [&](const char* s) {
      return std::string(s) + " at (" + std::to_string(i) + "," +
             std::to_string(j) + "," + std::to_string(k) + ")";
    };
    switch (kind) {
      case Kind::Dimension: return "matrix dimension mismatch";
      case Kind::Diagonal: return t("nonzero diagonal");
      case Kind::Negative: return t("negative distance");
      case Kind::Asymmetry: return t("asymmetry");
      case Kind::Triangle: return t("triangle inequality violation");
      case Kind::BadIndex: return t("point index out of range");
    }
    return "unknown violation";
  }
};

struct ValidationReport {
  std::vector<MetricViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every metric axiom and every point reference of the instance.
// Structural problems (non-square matrix) are reported as a single violation
// and abort further checking, since indices would be meaningless.
template <class S>
ValidationReport validate_metric(const MetricInstance<S>& m) {
  ValidationReport rep;
  const std::size_t n = m.dist.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (m.dist[i].size() != n) {
      rep.violations.push_back({MetricViolation::Kind::Dimension});
      return rep;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!m.dist[i][i].is_zero())
      rep.violations.push_back({MetricViolation::Kind::Diagonal, i, i});
    for (std::size_t j = 0; j < n; ++j) {
      if (m.dist[i][j].sign() < 0)
        rep.violations.push_back({MetricViolation::Kind::Negative, i, j});
      if (j > i && m.dist[i][j] != m.dist[j][i])
        rep.violations.push_back({MetricViolation::Kind::Asymmetry, i, j});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (m.dist[i][k] > m.dist[i][j] + m.dist[j][k])
          rep.violations.push_back({MetricViolation::Kind::Triangle, i, j, k});
  for (PointId p : m.initial)
    if (p >= n) rep.violations.push_back({MetricViolation::Kind::BadIndex, p});
  for (const auto& [r, s] : m.requests) {
    if (r >= n) rep.violations.push_back({MetricViolation::Kind::BadIndex, r});
    if (s >= n) rep.violations.push_back({MetricViolation::Kind::BadIndex, s});
  }
  return rep;
}

}  // namespace tripod
