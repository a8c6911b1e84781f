#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "tripod/metric.hpp"
#include "tripod/scalar.hpp"

namespace tripod {

using NodeId = std::size_t;

template <class S>
struct Tripod {
  NodeId x, y, z;
  NodeId center;
  S xe, ye, ze;  // edge lengths from x, y, z to the center
};

// Gromov-product edge lengths of the tripod over a metric triple.
// Throws if the triple violates the triangle inequality (negative edge).
template <class S>
std::array<S, 3> tripod_lengths(const S& dxy, const S& dxz, const S& dyz) {
  const S half(1, 2);
  S xe = (dxy + dxz - dyz) * half;
  S ye = (dxy - dxz + dyz) * half;
  S ze = (dyz + dxz - dxy) * half;
  if (xe.sign() < 0 || ye.sign() < 0 || ze.sign() < 0)
    throw std::domain_error("tripod_lengths: triangle inequality violated");
  return {xe, ye, ze};
}

// The base metric augmented with virtual nodes (tripod centers and points
// placed on bridges). Every virtual node is attached by at most three edges
// to nodes that already existed when it was created, with lengths chosen so
// that no distance between older nodes changes. Distances are therefore
// computed by recursing from the younger node over its attachment edges,
// with base-to-base distances read from the matrix.
template <class S>
class AugmentedMetric {
 public:
  explicit AugmentedMetric(const MetricInstance<S>& base) : base_(&base) {}

  std::size_t base_count() const { return base_->size(); }
  std::size_t node_count() const { return base_->size() + virt_.size(); }
  bool is_base(NodeId p) const { return p < base_->size(); }
  const MetricInstance<S>& base() const { return *base_; }

  // Attachment edges of a virtual node.
  const std::vector<std::pair<NodeId, S>>& edges(NodeId p) const {
    return virt_.at(p - base_->size());
  }

  S dist(NodeId p, NodeId q) const {
    check_node(p);
    check_node(q);
    if (p == q) return S(0);
    NodeId hi = p > q ? p : q;
    NodeId lo = p > q ? q : p;
    if (is_base(hi)) return base_->d(hi, lo);
    auto key = std::make_pair(hi, lo);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool have = false;
    S best(0);
    for (const auto& [u, len] : edges(hi)) {
      S cand = len + dist(u, lo);
      if (!have || cand < best) {
        best = cand;
        have = true;
      }
    }
    if (!have) throw std::logic_error("virtual node with no attachment edges");
    memo_.emplace(key, best);
    return best;
  }

  Tripod<S> materialize_tripod(NodeId x, NodeId y, NodeId z) {
    auto [xe, ye, ze] = tripod_lengths(dist(x, y), dist(x, z), dist(y, z));
    NodeId e = add_node({{x, xe}, {y, ye}, {z, ze}});
    return Tripod<S>{x, y, z, e, xe, ye, ze};
  }

  // Point at distance delta from u on a (fresh) bridge between u and v.
  // The bridge endpoints are reused when delta lands on them.
  NodeId point_on_segment(NodeId u, NodeId v, const S& delta) {
    S len = dist(u, v);
    if (delta.sign() < 0 || delta > len)
      throw std::out_of_range("point_on_segment: offset outside [0, len]");
    if (delta.is_zero()) return u;
    if (delta == len) return v;
    return add_node({{u, delta}, {v, len - delta}});
  }

 private:
  void check_node(NodeId p) const {
    if (p >= node_count()) throw std::out_of_range("unknown node id");
  }

  NodeId add_node(std::vector<std::pair<NodeId, S>> es) {
    for (const auto& [u, len] : es) {
      check_node(u);
      if (len.sign() < 0)
        throw std::domain_error("negative attachment edge length");
    }
    virt_.push_back(std::move(es));
    return base_->size() + virt_.size() - 1;
  }

  struct PairHash {
    std::size_t operator()(const std::pair<NodeId, NodeId>& p) const noexcept {
      return p.first * 0x9e3779b97f4a7c15ULL ^ p.second;
    }
  };

  const MetricInstance<S>* base_;
  std::vector<std::vector<std::pair<NodeId, S>>> virt_;
  mutable std::unordered_map<std::pair<NodeId, NodeId>, S, PairHash> memo_;
};

}  // namespace tripod
