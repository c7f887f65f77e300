#ifndef LERW_GRAPH_HPP
#define LERW_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lerw/rng.hpp"
#include "lerw/segment.hpp"

namespace lerw {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct OutEdge {
  VertexId to;
  double weight;
};

/// Directed edge identified by its endpoints.
struct EdgeRef {
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

/// Directed weighted graph embedded in the plane, scaled by its mesh.
/// Immutable once built; concurrent reads are safe.
class EmbeddedGraph {
 public:
  EmbeddedGraph() = default;

  std::size_t size() const { return positions_.size(); }
  std::size_t edge_count() const { return targets_.size(); }
  VertexId origin() const { return origin_; }
  double mesh() const { return mesh_; }
  const nlohmann::json& meta() const { return meta_; }

  Point position(VertexId v) const { return positions_[v]; }
  std::span<const Point> positions() const { return positions_; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::span<const double> weights(VertexId v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }
  double total_weight(VertexId v) const { return totals_[v]; }

  /// Weight of the edge (from, to), summed over parallel edges; 0 if absent.
  double weight(VertexId from, VertexId to) const {
    double w = 0.0;
    const auto nb = neighbors(from);
    const auto ws = weights(from);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (nb[i] == to) w += ws[i];
    return w;
  }

  /// Next vertex of the natural random walk given a uniform draw u in [0,1).
  /// Returns kNoVertex when v has no outgoing weight.
  VertexId step(VertexId v, double u) const {
    const std::size_t lo = offsets_[v];
    const std::size_t hi = offsets_[v + 1];
    if (lo == hi || totals_[v] <= 0.0) return kNoVertex;
    for (std::size_t i = lo; i < hi; ++i)
      if (u < cumulative_[i]) return targets_[i];
    // u lies above the last cumulative only through rounding; take the last
    // positive-weight edge.
    for (std::size_t i = hi; i-- > lo;)
      if (weights_[i] > 0.0) return targets_[i];
    return kNoVertex;
  }

  /// Largest |position| over all vertices.
  double extent() const {
    double r = 0.0;
    for (const auto& p : positions_) r = std::max(r, std::abs(p));
    return r;
  }

  /// Largest edge length.
  double max_edge_length() const {
    double len = 0.0;
    for (VertexId v = 0; v < size(); ++v)
      for (VertexId u : neighbors(v)) len = std::max(len, std::abs(positions_[u] - positions_[v]));
    return len;
  }

 private:
  friend class GraphBuilder;

  std::vector<Point> positions_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> targets_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<double> totals_;
  VertexId origin_ = kNoVertex;
  double mesh_ = 1.0;
  nlohmann::json meta_ = nlohmann::json::object();
};

/// Accumulates vertices and edges, then validates and freezes them.
class GraphBuilder {
 public:
  VertexId add_vertex(Point p) {
    positions_.push_back(p);
    return static_cast<VertexId>(positions_.size() - 1);
  }

  void add_edge(VertexId from, VertexId to, double weight) {
    edges_.push_back({from, to, weight});
  }

  void set_origin(VertexId v) { origin_ = v; }
  void set_mesh(double mesh) { mesh_ = mesh; }
  nlohmann::json& meta() { return meta_; }
  std::size_t vertex_count() const { return positions_.size(); }

  EmbeddedGraph build() && {
    if (!(mesh_ > 0.0) || !std::isfinite(mesh_))
      throw std::invalid_argument("mesh must be positive and finite");
    if (origin_ >= positions_.size())
      throw std::invalid_argument("origin vertex does not exist");
    if (positions_[origin_] != Point{0.0, 0.0})
      throw std::invalid_argument("origin vertex must sit at position 0");
    for (const auto& p : positions_)
      if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
        throw std::invalid_argument("vertex positions must be finite");
    for (const auto& e : edges_) {
      if (e.from >= positions_.size() || e.to >= positions_.size())
        throw std::invalid_argument("edge endpoint does not exist");
      if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
        throw std::invalid_argument("edge weights must be finite and nonnegative");
    }

    EmbeddedGraph g;
    const std::size_t n = positions_.size();
    g.positions_ = std::move(positions_);
    g.origin_ = origin_;
    g.mesh_ = mesh_;
    g.meta_ = std::move(meta_);

    std::vector<std::size_t> counts(n + 1, 0);
    for (const auto& e : edges_) ++counts[e.from + 1];
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    g.offsets_ = counts;
    g.targets_.resize(edges_.size());
    g.weights_.resize(edges_.size());
    std::vector<std::size_t> fill(counts.begin(), counts.end() - 1);
    for (const auto& e : edges_) {
      const std::size_t slot = fill[e.from]++;
      g.targets_[slot] = e.to;
      g.weights_[slot] = e.weight;
    }

    g.totals_.assign(n, 0.0);
    g.cumulative_.resize(edges_.size());
    for (std::size_t v = 0; v < n; ++v) {
      double total = 0.0;
      for (std::size_t i = g.offsets_[v]; i < g.offsets_[v + 1]; ++i) total += g.weights_[i];
      if (!std::isfinite(total)) throw std::invalid_argument("outgoing weight sum is not finite");
      g.totals_[v] = total;
      double acc = 0.0;
      std::size_t last_positive = g.offsets_[v + 1];
      for (std::size_t i = g.offsets_[v]; i < g.offsets_[v + 1]; ++i) {
        acc += g.weights_[i];
        g.cumulative_[i] = total > 0.0 ? acc / total : 0.0;
        if (g.weights_[i] > 0.0) last_positive = i;
      }
      if (last_positive < g.offsets_[v + 1])
        for (std::size_t i = last_positive; i < g.offsets_[v + 1]; ++i) g.cumulative_[i] = 1.0;
    }
    return g;
  }

 private:
  struct PendingEdge {
    VertexId from;
    VertexId to;
    double weight;
  };
  std::vector<Point> positions_;
  std::vector<PendingEdge> edges_;
  VertexId origin_ = kNoVertex;
  double mesh_ = 1.0;
  nlohmann::json meta_ = nlohmann::json::object();
};

/// P(v, .) as (target, probability) pairs in adjacency order.
inline std::vector<std::pair<VertexId, double>> transition_distribution(const EmbeddedGraph& g,
                                                                        VertexId v) {
  if (v >= g.size()) throw std::out_of_range("vertex does not exist");
  const double total = g.total_weight(v);
  if (!(total > 0.0))
    throw std::invalid_argument("vertex " + std::to_string(v) +
                                " has no outgoing weight (irreducibility violated)");
  std::vector<std::pair<VertexId, double>> out;
  const auto nb = g.neighbors(v);
  const auto ws = g.weights(v);
  for (std::size_t i = 0; i < nb.size(); ++i)
    if (ws[i] > 0.0) out.emplace_back(nb[i], ws[i] / total);
  return out;
}

struct PlanarityViolation {
  EdgeRef first;
  EdgeRef second;
};

/// All pairs of vertex-disjoint edges whose closed segments meet. Edges are
/// compared as undirected segments; each crossing pair is reported once.
inline std::vector<PlanarityViolation> check_planarity(const EmbeddedGraph& g) {
  struct Segment {
    EdgeRef edge;
    Point a;
    Point b;
  };
  std::vector<Segment> segments;
  {
    std::vector<std::pair<VertexId, VertexId>> seen;
    for (VertexId v = 0; v < g.size(); ++v)
      for (VertexId u : g.neighbors(v)) seen.emplace_back(std::min(u, v), std::max(u, v));
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    segments.reserve(seen.size());
    for (auto [x, y] : seen) {
      // Report with the orientation present in the graph.
      const auto nb = g.neighbors(x);
      const EdgeRef ref = std::find(nb.begin(), nb.end(), y) != nb.end() ? EdgeRef{x, y} : EdgeRef{y, x};
      segments.push_back({ref, g.position(x), g.position(y)});
    }
  }
  if (segments.empty()) return {};

  double total_length = 0.0;
  for (const auto& s : segments) total_length += std::abs(s.b - s.a);
  double cell = total_length / static_cast<double>(segments.size());
  if (!(cell > 0.0)) cell = 1.0;

  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  auto key = [](std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint32_t>(j);
  };
  for (std::uint32_t s = 0; s < segments.size(); ++s) {
    const auto& seg = segments[s];
    const auto i0 = static_cast<std::int64_t>(std::floor(std::min(seg.a.real(), seg.b.real()) / cell));
    const auto i1 = static_cast<std::int64_t>(std::floor(std::max(seg.a.real(), seg.b.real()) / cell));
    const auto j0 = static_cast<std::int64_t>(std::floor(std::min(seg.a.imag(), seg.b.imag()) / cell));
    const auto j1 = static_cast<std::int64_t>(std::floor(std::max(seg.a.imag(), seg.b.imag()) / cell));
    for (auto i = i0; i <= i1; ++i)
      for (auto j = j0; j <= j1; ++j) buckets[key(i, j)].push_back(s);
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> hits;
  for (const auto& [k, members] : buckets) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto& s = segments[members[x]];
        const auto& t = segments[members[y]];
        if (s.edge.from == t.edge.from || s.edge.from == t.edge.to || s.edge.to == t.edge.from ||
            s.edge.to == t.edge.to)
          continue;
        if (segments_intersect(s.a, s.b, t.a, t.b))
          hits.emplace_back(std::min(members[x], members[y]), std::max(members[x], members[y]));
      }
    }
  }
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  std::vector<PlanarityViolation> out;
  out.reserve(hits.size());
  for (auto [x, y] : hits) out.push_back({segments[x].edge, segments[y].edge});
  return out;
}

/// Vertices reachable from `source` along positive-weight edges.
inline std::vector<bool> reachable_from(const EmbeddedGraph& g, VertexId source) {
  std::vector<bool> seen(g.size(), false);
  std::vector<VertexId> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    const auto nb = g.neighbors(v);
    const auto ws = g.weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (ws[i] > 0.0 && !seen[nb[i]]) {
        seen[nb[i]] = true;
        stack.push_back(nb[i]);
      }
    }
  }
  return seen;
}

/// Human-readable list of violated graph invariants (planarity excluded;
/// see check_planarity). Empty means the graph is well-formed and
/// irreducible on its vertex set.
inline std::vector<std::string> validate(const EmbeddedGraph& g) {
  std::vector<std::string> problems;
  if (g.origin() >= g.size()) {
    problems.emplace_back("origin missing");
    return problems;
  }
  if (g.position(g.origin()) != Point{0.0, 0.0}) problems.emplace_back("origin not at 0");
  if (g.size() == 1) return problems;
  for (VertexId v = 0; v < g.size(); ++v)
    if (!(g.total_weight(v) > 0.0))
      problems.push_back("vertex " + std::to_string(v) + " has no outgoing weight");

  const auto forward = reachable_from(g, g.origin());
  GraphBuilder reversed;
  for (VertexId v = 0; v < g.size(); ++v) reversed.add_vertex(g.position(v));
  for (VertexId v = 0; v < g.size(); ++v) {
    const auto nb = g.neighbors(v);
    const auto ws = g.weights(v);
    for (std::size_t i = 0; i < nb.size(); ++i) reversed.add_edge(nb[i], v, ws[i]);
  }
  reversed.set_origin(g.origin());
  reversed.set_mesh(g.mesh());
  const auto backward = reachable_from(std::move(reversed).build(), g.origin());
  for (VertexId v = 0; v < g.size(); ++v) {
    if (!forward[v]) problems.push_back("vertex " + std::to_string(v) + " unreachable from origin");
    if (!backward[v]) problems.push_back("origin unreachable from vertex " + std::to_string(v));
  }
  return problems;
}

namespace detail {

/// Union-find with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }
  std::size_t component_size(std::size_t i) { return size_[find(i)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Lattice points delta*(n + m i) with |.| <= radius, enumerated row by row.
struct LatticeBox {
  std::int64_t half = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> sites;
  std::vector<std::uint32_t> index;  // (2*half+1)^2 grid -> site index or kNoVertex
  std::uint32_t origin = 0;

  LatticeBox(double mesh, double radius) {
    if (!(mesh > 0.0) || !std::isfinite(mesh)) throw std::invalid_argument("mesh must be positive");
    if (!(radius >= 0.0) || !std::isfinite(radius))
      throw std::invalid_argument("radius must be nonnegative");
    const double k = radius / mesh;
    // Relative slack keeps points exactly on the circle despite rounding in R/delta.
    const double k2 = k * k * (1.0 + 1e-12);
    half = static_cast<std::int64_t>(std::floor(k * (1.0 + 1e-12)));
    const std::int64_t width = 2 * half + 1;
    index.assign(static_cast<std::size_t>(width * width), kNoVertex);
    for (std::int64_t m = -half; m <= half; ++m)
      for (std::int64_t n = -half; n <= half; ++n)
        if (static_cast<double>(n * n + m * m) <= k2) {
          index[slot(n, m)] = static_cast<std::uint32_t>(sites.size());
          if (n == 0 && m == 0) origin = static_cast<std::uint32_t>(sites.size());
          sites.emplace_back(n, m);
        }
  }

  std::size_t slot(std::int64_t n, std::int64_t m) const {
    const std::int64_t width = 2 * half + 1;
    return static_cast<std::size_t>((m + half) * width + (n + half));
  }

  /// Site index of (n, m) or kNoVertex when outside the box.
  std::uint32_t at(std::int64_t n, std::int64_t m) const {
    if (n < -half || n > half || m < -half || m > half) return kNoVertex;
    return index[slot(n, m)];
  }

  // Neighbor order used everywhere: right, up, left, down.
  static constexpr std::int64_t kDx[4] = {1, 0, -1, 0};
  static constexpr std::int64_t kDy[4] = {0, 1, 0, -1};
};

/// Builds the subgraph of the lattice box on sites with keep[site], with
/// edge (site, direction) present when open(site, dir) and weighted by
/// weight(site, dir).
template <class Open, class Weight>
EmbeddedGraph build_from_box(const LatticeBox& box, double mesh, const std::vector<bool>& keep,
                             Open&& open, Weight&& weight, nlohmann::json meta) {
  GraphBuilder b;
  std::vector<VertexId> id(box.sites.size(), kNoVertex);
  for (std::size_t s = 0; s < box.sites.size(); ++s) {
    if (!keep[s]) continue;
    const auto [n, m] = box.sites[s];
    id[s] = b.add_vertex(Point(static_cast<double>(n) * mesh, static_cast<double>(m) * mesh));
  }
  for (std::size_t s = 0; s < box.sites.size(); ++s) {
    if (!keep[s]) continue;
    const auto [n, m] = box.sites[s];
    for (int d = 0; d < 4; ++d) {
      const auto t = box.at(n + LatticeBox::kDx[d], m + LatticeBox::kDy[d]);
      if (t == kNoVertex || !keep[t] || !open(s, d)) continue;
      b.add_edge(id[s], id[t], weight(s, d));
    }
  }
  b.set_origin(id[box.origin]);
  b.set_mesh(mesh);
  b.meta() = std::move(meta);
  return std::move(b).build();
}

}  // namespace detail

/// Square lattice {delta(n + m i) : |delta(n + m i)| <= radius} with unit
/// weights between nearest neighbours.
inline EmbeddedGraph build_square_lattice(double mesh, double radius) {
  const detail::LatticeBox box(mesh, radius);
  const std::vector<bool> keep(box.sites.size(), true);
  nlohmann::json meta{{"generator", "lattice"}, {"radius", radius}};
  return detail::build_from_box(
      box, mesh, keep, [](std::size_t, int) { return true; },
      [](std::size_t, int) { return 1.0; }, std::move(meta));
}

struct PercolationOptions {
  /// Minimum origin-component size as a fraction of the box.
  double min_fraction = 0.25;
  /// Additional seeds tried (seed+1, seed+2, ...) after the first.
  int max_retries = 16;
};

/// Origin's component of bond percolation with open probability p on the
/// lattice box. Each open bond becomes a pair of unit-weight directed edges.
inline EmbeddedGraph build_percolation_cluster(double mesh, double p, double radius,
                                               std::uint64_t seed,
                                               const PercolationOptions& options = {}) {
  if (!(p > 0.5)) throw std::invalid_argument("p must exceed 1/2 (got " + std::to_string(p) + ")");
  if (p > 1.0) throw std::invalid_argument("p must not exceed 1");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const detail::LatticeBox box(mesh, radius);
  const std::size_t n_sites = box.sites.size();

  std::vector<std::uint64_t> tried;
  for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
    const std::uint64_t attempt_seed = seed + static_cast<std::uint64_t>(attempt);
    tried.push_back(attempt_seed);
    Rng rng(attempt_seed, "percolation-bonds");
    // open[s*2 + 0] = bond to the right, open[s*2 + 1] = bond upwards.
    std::vector<bool> bond(2 * n_sites, false);
    detail::DisjointSets sets(n_sites);
    for (std::size_t s = 0; s < n_sites; ++s) {
      const auto [n, m] = box.sites[s];
      for (int d = 0; d < 2; ++d) {
        const auto t = box.at(n + detail::LatticeBox::kDx[d], m + detail::LatticeBox::kDy[d]);
        if (t == kNoVertex) continue;
        // p == 1 consumes no randomness, matching the full lattice exactly.
        const bool is_open = p >= 1.0 || rng.bernoulli(p);
        bond[2 * s + d] = is_open;
        if (is_open) sets.unite(s, t);
      }
    }
    const std::size_t component = sets.component_size(box.origin);
    if (static_cast<double>(component) < options.min_fraction * static_cast<double>(n_sites) ||
        component < 2)
      continue;

    const std::size_t root = sets.find(box.origin);
    std::vector<bool> keep(n_sites);
    for (std::size_t s = 0; s < n_sites; ++s) keep[s] = sets.find(s) == root;
    auto open = [&](std::size_t s, int d) {
      const auto [n, m] = box.sites[s];
      switch (d) {
        case 0:
        case 1:
          return static_cast<bool>(bond[2 * s + d]);
        case 2:
          return static_cast<bool>(bond[2 * box.at(n - 1, m) + 0]);
        default:
          return static_cast<bool>(bond[2 * box.at(n, m - 1) + 1]);
      }
    };
    nlohmann::json meta{{"generator", "percolation"},
                        {"radius", radius},
                        {"p", p},
                        {"seed", seed},
                        {"effective_seed", attempt_seed},
                        {"retries", attempt},
                        {"box_vertices", n_sites},
                        {"component_vertices", component}};
    return detail::build_from_box(
        box, mesh, keep, open, [](std::size_t, int) { return 1.0; }, std::move(meta));
  }
  std::string seeds;
  for (auto s : tried) seeds += (seeds.empty() ? "" : ", ") + std::to_string(s);
  throw std::runtime_error("origin component below the minimum size for every attempted seed: " +
                           seeds);
}

/// Law of the vertical-move probability p(z) in Lawler's random environment.
class EnvironmentLaw {
 public:
  static EnvironmentLaw constant(double value) {
    return EnvironmentLaw({{"kind", "constant"}, {"value", value}}, value,
                          [value](Rng&) { return value; });
  }
  static EnvironmentLaw uniform(double lo, double hi) {
    return EnvironmentLaw({{"kind", "uniform"}, {"lo", lo}, {"hi", hi}}, 0.5 * (lo + hi),
                          [lo, hi](Rng& rng) { return rng.uniform(lo, hi); });
  }
  static EnvironmentLaw custom(std::string name, double mean, std::function<double(Rng&)> draw) {
    return EnvironmentLaw({{"kind", std::move(name)}, {"mean", mean}}, mean, std::move(draw));
  }
  static EnvironmentLaw standard() { return uniform(0.1, 0.9); }

  double mean() const { return mean_; }
  double sample(Rng& rng) const { return draw_(rng); }
  const nlohmann::json& describe() const { return description_; }

 private:
  EnvironmentLaw(nlohmann::json description, double mean, std::function<double(Rng&)> draw)
      : description_(std::move(description)), mean_(mean), draw_(std::move(draw)) {}

  nlohmann::json description_;
  double mean_;
  std::function<double(Rng&)> draw_;
};

/// Lawler's random environment: up/down weight p(z)/2, left/right
/// (1 - p(z))/2, with p(z) drawn once per vertex.
inline EmbeddedGraph build_lawler_environment(double mesh, double radius, std::uint64_t seed,
                                              const EnvironmentLaw& law = EnvironmentLaw::standard()) {
  if (std::abs(law.mean() - 0.5) > 1e-12)
    throw std::invalid_argument("environment law must have mean 1/2");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  const detail::LatticeBox box(mesh, radius);
  Rng rng(seed, "lawler-environment");
  std::vector<double> vertical(box.sites.size());
  for (std::size_t s = 0; s < box.sites.size(); ++s) {
    const double p = law.sample(rng);
    if (!(p > 0.0 && p < 1.0))
      throw std::invalid_argument("environment law produced p(z) = " + std::to_string(p) +
                                  " outside (0,1)");
    vertical[s] = p;
  }
  const std::vector<bool> keep(box.sites.size(), true);
  nlohmann::json meta{{"generator", "lawler"}, {"radius", radius}, {"seed", seed}, {"law", law.describe()}};
  return detail::build_from_box(
      box, mesh, keep, [](std::size_t, int) { return true; },
      [&](std::size_t s, int d) { return d % 2 == 1 ? vertical[s] / 2.0 : (1.0 - vertical[s]) / 2.0; },
      std::move(meta));
}

}  // namespace lerw

#endif  // LERW_GRAPH_HPP
