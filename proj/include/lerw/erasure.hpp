#ifndef LERW_ERASURE_HPP
#define LERW_ERASURE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "lerw/graph.hpp"
#include "lerw/walk.hpp"

namespace lerw {

/// Polyline in the plane, parameterised by index with linear interpolation
/// between consecutive points.
struct Curve {
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  /// Position at parameter t in [0, size()-1].
  Point at(double t) const {
    if (points.empty()) throw std::out_of_range("empty curve");
    if (t <= 0.0) return points.front();
    const double last = static_cast<double>(points.size() - 1);
    if (t >= last) return points.back();
    const auto k = static_cast<std::size_t>(std::floor(t));
    const double f = t - static_cast<double>(k);
    return (1.0 - f) * points[k] + f * points[k + 1];
  }
};

/// Chronological loop-erasure: y(0) = x(0), y(k+1) = x(T+1) with T the last
/// visit to y(k). Linear time via a last-occurrence table.
template <class Id>
std::vector<Id> erase_loops(std::span<const Id> path) {
  if (path.empty()) throw std::invalid_argument("erase_loops: empty path");
  std::unordered_map<Id, std::size_t> last;
  last.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) last[path[i]] = i;
  std::vector<Id> out;
  std::size_t i = last[path[0]];
  out.push_back(path[0]);
  while (i + 1 < path.size()) {
    const Id next = path[i + 1];
    out.push_back(next);
    i = last[next];
  }
  return out;
}

template <class Id>
std::vector<Id> erase_loops(const std::vector<Id>& path) {
  return erase_loops(std::span<const Id>(path));
}

/// x(n), ..., x(0). A sequence operation; no edge validation.
template <class T>
std::vector<T> reverse(std::span<const T> path) {
  return std::vector<T>(path.rbegin(), path.rend());
}

template <class T>
std::vector<T> reverse(const std::vector<T>& path) {
  return reverse(std::span<const T>(path));
}

/// Loop-erased curve from the boundary to the walk's start.
struct LoopErasedCurve {
  /// gamma(0) = exit point on the boundary, then the erased vertices.
  Curve curve;
  /// Vertex ids of gamma(1), gamma(2), ..., ending at the walk's start.
  std::vector<VertexId> vertices;
  /// Exit edge (inside vertex, outside vertex) of the underlying walk.
  EdgeRef exit_edge;
};

/// Loop-erasure of the reversal of w, with the first (outside) vertex
/// replaced by the exit point so that the curve starts on the boundary.
inline LoopErasedCurve lerw_of_reversal(const WalkPath& w, const EmbeddedGraph& g) {
  if (!w.exit_edge) throw std::invalid_argument("lerw_of_reversal: walk has no exit edge");
  const auto erased = erase_loops(reverse(w.vertices));
  LoopErasedCurve out;
  out.exit_edge = *w.exit_edge;
  out.vertices.assign(erased.begin() + 1, erased.end());
  out.curve.points.reserve(erased.size());
  out.curve.points.push_back(w.exit_point);
  for (VertexId v : out.vertices) out.curve.points.push_back(g.position(v));
  return out;
}

/// Forward loop-erasure of a walk that left the domain; the last point is
/// replaced by the exit point.
inline LoopErasedCurve lerw_forward(const WalkPath& w, const EmbeddedGraph& g) {
  if (!w.exit_edge) throw std::invalid_argument("lerw_forward: walk has no exit edge");
  auto erased = erase_loops(w.vertices);
  LoopErasedCurve out;
  out.exit_edge = *w.exit_edge;
  erased.pop_back();
  out.vertices = erased;
  for (VertexId v : out.vertices) out.curve.points.push_back(g.position(v));
  out.curve.points.push_back(w.exit_point);
  return out;
}

/// LERW sample: loop-erasure of the reversal of the walk from `start`
/// stopped on exiting d.
inline LoopErasedCurve sample_lerw(const EmbeddedGraph& g, VertexId start, const Domain& d,
                                   std::uint64_t seed, const WalkOptions& options = {}) {
  return lerw_of_reversal(run_walk(g, start, d, seed, options), g);
}

}  // namespace lerw

#endif  // LERW_ERASURE_HPP
