#ifndef LERW_WALK_HPP
#define LERW_WALK_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lerw/graph.hpp"
#include "lerw/rng.hpp"

namespace lerw {

/// Raised when a walk cannot complete: a vertex without outgoing edges, a
/// graph that does not extend past the domain, or an exhausted step budget.
class WalkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Open disc of the given radius centred at 0, optionally with a set of
/// absorbing vertices removed.
class Domain {
 public:
  enum class Kind { Disc, DiscMinusAbsorbing };

  static Domain unit_disc() { return Domain(1.0, {}); }
  static Domain disc(double radius) { return Domain(radius, {}); }
  static Domain disc_minus(double radius, std::vector<VertexId> absorbing) {
    return Domain(radius, std::move(absorbing));
  }

  Kind kind() const { return absorbing_.empty() ? Kind::Disc : Kind::DiscMinusAbsorbing; }
  double radius() const { return radius_; }
  const std::vector<VertexId>& absorbing() const { return absorbing_; }

  bool contains(Point z) const { return std::norm(z) < radius_ * radius_; }
  bool is_absorbing(VertexId v) const {
    return std::binary_search(absorbing_.begin(), absorbing_.end(), v);
  }

  nlohmann::json describe() const {
    nlohmann::json j{{"kind", absorbing_.empty() ? "disc" : "disc-minus-absorbing"}, {"radius", radius_}};
    if (!absorbing_.empty()) j["absorbing"] = absorbing_;
    return j;
  }

 private:
  Domain(double radius, std::vector<VertexId> absorbing) : radius_(radius), absorbing_(std::move(absorbing)) {
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw std::invalid_argument("domain radius must be positive");
    std::sort(absorbing_.begin(), absorbing_.end());
    absorbing_.erase(std::unique(absorbing_.begin(), absorbing_.end()), absorbing_.end());
  }

  double radius_;
  std::vector<VertexId> absorbing_;
};

/// First point of [v, u] outside the open disc. Requires v inside.
inline Point exit_point(Point v, Point u, const Domain& d) {
  const double r2 = d.radius() * d.radius();
  const double c = std::norm(v) - r2;
  if (!(c < 0.0)) throw std::invalid_argument("exit_point: segment must start inside the domain");
  const Point dir = u - v;
  const double a = std::norm(dir);
  if (a == 0.0) throw std::invalid_argument("exit_point: segment never leaves the domain");
  const double b = dot(v, dir);
  const double disc = std::sqrt(b * b - a * c);
  // Positive root of a s^2 + 2 b s + c = 0, in the cancellation-free form.
  const double s = b >= 0.0 ? -c / (b + disc) : (disc - b) / a;
  if (s > 1.0) {
    if (std::norm(u) < r2) throw std::invalid_argument("exit_point: segment never leaves the domain");
    return u;
  }
  return v + s * dir;
}

struct WalkPath {
  std::vector<VertexId> vertices;
  /// Set when the walk left the domain; the last vertex is then exit_edge.to.
  std::optional<EdgeRef> exit_edge;
  Point exit_point{0.0, 0.0};
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;

  std::size_t steps() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

struct WalkOptions {
  std::uint64_t max_steps = 100'000'000;
};

/// Throws WalkError("graph truncation too small") when the generated region
/// cannot contain every boundary-crossing edge of the domain. Only graphs that
/// record their generation radius are checked.
inline void require_extends_beyond(const EmbeddedGraph& g, const Domain& d) {
  if (!g.meta().contains("radius")) return;
  const double generated = g.meta().at("radius").get<double>();
  if (generated < d.radius() + g.mesh())
    throw WalkError("graph truncation too small: generated radius " + std::to_string(generated) +
                    " does not extend past domain radius " + std::to_string(d.radius()));
}

namespace detail {

enum class StopReason { Exited, Absorbed };

inline StopReason walk_until_stop(const EmbeddedGraph& g, VertexId start, const Domain& d,
                                  const std::vector<VertexId>* extra_absorbing, Rng& rng,
                                  WalkPath& path, const WalkOptions& options) {
  auto absorbing = [&](VertexId v) {
    return d.is_absorbing(v) ||
           (extra_absorbing && std::binary_search(extra_absorbing->begin(), extra_absorbing->end(), v));
  };
  path.vertices.push_back(start);
  if (absorbing(start)) return StopReason::Absorbed;
  VertexId x = start;
  for (std::uint64_t k = 0; k < options.max_steps; ++k) {
    const VertexId u = g.step(x, rng.uniform());
    if (u == kNoVertex)
      throw WalkError("irreducibility violated: vertex " + std::to_string(x) + " has no outgoing edges");
    path.vertices.push_back(u);
    const Point pu = g.position(u);
    if (!d.contains(pu)) {
      path.exit_edge = EdgeRef{x, u};
      path.exit_point = exit_point(g.position(x), pu, d);
      return StopReason::Exited;
    }
    if (absorbing(u)) return StopReason::Absorbed;
    x = u;
  }
  throw WalkError("walk exceeded the step budget of " + std::to_string(options.max_steps) + " steps");
}

inline void check_start(const EmbeddedGraph& g, VertexId start, const Domain& d) {
  if (start >= g.size()) throw std::invalid_argument("start vertex does not exist");
  if (!d.contains(g.position(start))) throw std::invalid_argument("start vertex lies outside the domain");
}

}  // namespace detail

/// Natural random walk from `start`, stopped at the first step whose segment
/// leaves the disc or (for disc-minus-absorbing domains) on arrival at an
/// absorbing vertex, in which case the exit point is that vertex.
inline WalkPath run_walk(const EmbeddedGraph& g, VertexId start, const Domain& d, std::uint64_t seed,
                         const WalkOptions& options = {}) {
  detail::check_start(g, start, d);
  require_extends_beyond(g, d);
  Rng rng(seed, "walk");
  WalkPath path;
  path.seed = seed;
  const auto reason = detail::walk_until_stop(g, start, d, nullptr, rng, path, options);
  if (reason == detail::StopReason::Absorbed) path.exit_point = g.position(path.vertices.back());
  return path;
}

struct HitResult {
  WalkPath path;
  /// Absorbing vertex reached, or nullopt when the walk left the domain first
  /// (path.exit_edge is then set).
  std::optional<VertexId> hit;
};

/// Walk stopped at min(first arrival in `absorbing`, exit time of d).
inline HitResult hitting_time_of_set(const EmbeddedGraph& g, VertexId start, const Domain& d,
                                     std::vector<VertexId> absorbing, std::uint64_t seed,
                                     const WalkOptions& options = {}) {
  detail::check_start(g, start, d);
  require_extends_beyond(g, d);
  std::sort(absorbing.begin(), absorbing.end());
  Rng rng(seed, "walk");
  HitResult result;
  result.path.seed = seed;
  const auto reason = detail::walk_until_stop(g, start, d, &absorbing, rng, result.path, options);
  if (reason == detail::StopReason::Absorbed) {
    result.hit = result.path.vertices.back();
    result.path.exit_point = g.position(*result.hit);
  }
  return result;
}

/// Seed of replica `index` in a Monte Carlo ensemble rooted at `seed`.
inline std::uint64_t replica_seed(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(seed, "replica", index);
}

}  // namespace lerw

#endif  // LERW_WALK_HPP
