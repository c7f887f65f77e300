#ifndef LERW_HARMONIC_HPP
#define LERW_HARMONIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "lerw/graph.hpp"
#include "lerw/parallel.hpp"
#include "lerw/walk.hpp"

namespace lerw {

/// Where a stopped walk ends: through a boundary edge, or at an absorbing vertex.
struct HitTarget {
  enum class Kind { BoundaryEdge, Vertex };
  Kind kind = Kind::BoundaryEdge;
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;

  static HitTarget edge(EdgeRef e) { return {Kind::BoundaryEdge, e.from, e.to}; }
  static HitTarget vertex(VertexId v) { return {Kind::Vertex, v, v}; }
  bool is_edge() const { return kind == Kind::BoundaryEdge; }
  EdgeRef as_edge() const { return {from, to}; }

  friend auto operator<=>(const HitTarget&, const HitTarget&) = default;
};

struct HittingDistribution {
  VertexId source = kNoVertex;
  std::map<HitTarget, double> masses;
  /// Max-norm residual of the linear solve (0 for Monte Carlo estimates).
  double residual = 0.0;
  /// Number of walks behind a Monte Carlo estimate (0 for exact solves).
  std::uint64_t samples = 0;

  double mass(const HitTarget& t) const {
    const auto it = masses.find(t);
    return it == masses.end() ? 0.0 : it->second;
  }
  double total() const {
    double s = 0.0;
    for (const auto& [t, m] : masses) s += m;
    return s;
  }
};

/// Raised when the killed chain has a closed class inside the domain.
class IrreducibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Natural random walk killed on leaving the disc or on reaching an absorbing
/// vertex. Factorizes the transposed system (I - Q)^T once, so every source
/// costs one triangular solve and yields the masses of all targets.
class AbsorbingChain {
 public:
  AbsorbingChain(const EmbeddedGraph& g, const Domain& d, std::vector<VertexId> absorbing = {})
      : g_(&g), domain_(d), absorbing_(std::move(absorbing)) {
    for (VertexId v : d.absorbing()) absorbing_.push_back(v);
    std::sort(absorbing_.begin(), absorbing_.end());
    absorbing_.erase(std::unique(absorbing_.begin(), absorbing_.end()), absorbing_.end());

    index_.assign(g.size(), kNoVertex);
    for (VertexId v = 0; v < g.size(); ++v)
      if (d.contains(g.position(v)) && !is_absorbing(v)) {
        index_[v] = static_cast<VertexId>(transient_.size());
        transient_.push_back(v);
      }

    const auto m = static_cast<Eigen::Index>(transient_.size());
    std::vector<Eigen::Triplet<double>> triplets;
    for (VertexId i = 0; i < transient_.size(); ++i) {
      const VertexId v = transient_[i];
      triplets.emplace_back(i, i, 1.0);
      const double total = g.total_weight(v);
      if (!(total > 0.0))
        throw IrreducibilityError("not irreducible in D: vertex " + std::to_string(v) + " has no outgoing edges");
      const auto nb = g.neighbors(v);
      const auto ws = g.weights(v);
      for (std::size_t e = 0; e < nb.size(); ++e) {
        const VertexId u = nb[e];
        if (ws[e] <= 0.0) continue;
        if (index_[u] != kNoVertex) triplets.emplace_back(index_[u], i, -ws[e] / total);
        else if (!d.contains(g.position(u))) boundary_.push_back({v, u});
      }
    }
    matrix_.resize(m, m);
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();
    solver_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    if (m > 0) {
      solver_->analyzePattern(matrix_);
      solver_->factorize(matrix_);
      if (solver_->info() != Eigen::Success)
        throw IrreducibilityError("not irreducible in D: singular absorbing-chain system");
    }
    std::sort(boundary_.begin(), boundary_.end());
  }

  bool is_absorbing(VertexId v) const { return std::binary_search(absorbing_.begin(), absorbing_.end(), v); }
  bool is_transient(VertexId v) const { return index_[v] != kNoVertex; }
  const std::vector<VertexId>& transient() const { return transient_; }
  /// Edges (inside transient vertex, outside vertex) in sorted order.
  const std::vector<EdgeRef>& boundary_edges() const { return boundary_; }

  /// Expected visits G(a, x) to each transient x (indexed like transient()).
  Eigen::VectorXd green_row(VertexId a, double* residual = nullptr) const {
    const auto m = static_cast<Eigen::Index>(transient_.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs[index_.at(a)] = 1.0;
    Eigen::VectorXd x = solver_->solve(rhs);
    Eigen::VectorXd r = rhs - matrix_ * x;
    // One step of iterative refinement.
    x += solver_->solve(r);
    r = rhs - matrix_ * x;
    if (residual) *residual = r.lpNorm<Eigen::Infinity>();
    if (!x.allFinite()) throw IrreducibilityError("not irreducible in D: solve produced non-finite values");
    return x;
  }

  HittingDistribution distribution(VertexId a) const {
    const auto& g = *g_;
    if (a >= g.size()) throw std::invalid_argument("source vertex does not exist");
    HittingDistribution out;
    out.source = a;
    if (is_absorbing(a)) {
      out.masses[HitTarget::vertex(a)] = 1.0;
      return out;
    }
    if (!is_transient(a)) throw std::invalid_argument("source vertex lies outside the domain");
    for (const auto& e : boundary_) out.masses[HitTarget::edge(e)] = 0.0;
    const Eigen::VectorXd green = green_row(a, &out.residual);
    for (VertexId i = 0; i < transient_.size(); ++i) {
      const double gx = green[i];
      if (gx == 0.0) continue;
      const VertexId v = transient_[i];
      const double total = g.total_weight(v);
      const auto nb = g.neighbors(v);
      const auto ws = g.weights(v);
      for (std::size_t e = 0; e < nb.size(); ++e) {
        const VertexId u = nb[e];
        if (ws[e] <= 0.0 || index_[u] != kNoVertex) continue;
        const double flow = gx * ws[e] / total;
        if (!domain_.contains(g.position(u))) out.masses[HitTarget::edge({v, u})] += flow;
        else out.masses[HitTarget::vertex(u)] += flow;
      }
    }
    return out;
  }

 private:
  const EmbeddedGraph* g_;
  Domain domain_;
  std::vector<VertexId> absorbing_;
  std::vector<VertexId> index_;
  std::vector<VertexId> transient_;
  std::vector<EdgeRef> boundary_;
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> solver_;
};

inline HittingDistribution exact_hitting_distribution(const EmbeddedGraph& g, const Domain& d, VertexId a,
                                                      const std::vector<VertexId>& absorbing = {}) {
  return AbsorbingChain(g, d, absorbing).distribution(a);
}

namespace detail {

/// Target reached by one walk; draws from the same stream as run_walk.
inline HitTarget walk_target(const EmbeddedGraph& g, VertexId start, const Domain& d, std::uint64_t seed,
                             const WalkOptions& options) {
  if (d.is_absorbing(start)) return HitTarget::vertex(start);
  Rng rng(seed, "walk");
  VertexId x = start;
  for (std::uint64_t k = 0; k < options.max_steps; ++k) {
    const VertexId u = g.step(x, rng.uniform());
    if (u == kNoVertex)
      throw WalkError("irreducibility violated: vertex " + std::to_string(x) + " has no outgoing edges");
    if (!d.contains(g.position(u))) return HitTarget::edge({x, u});
    if (d.is_absorbing(u)) return HitTarget::vertex(u);
    x = u;
  }
  throw WalkError("walk exceeded the step budget");
}

}  // namespace detail

/// Empirical exit distribution of n_samples walks; replica i uses
/// replica_seed(seed, i).
inline HittingDistribution mc_hitting_distribution(const EmbeddedGraph& g, const Domain& d, VertexId a,
                                                   std::uint64_t n_samples, std::uint64_t seed,
                                                   unsigned threads = default_thread_count(),
                                                   const WalkOptions& options = {}) {
  if (n_samples < 1) throw std::invalid_argument("mc_hitting_distribution: need at least one sample");
  detail::check_start(g, a, d);
  require_extends_beyond(g, d);
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (n_samples + kBlock - 1) / kBlock;
  auto results = parallel_replicas(blocks, threads, [&](std::size_t b) {
    std::map<HitTarget, std::uint64_t> counts;
    const std::uint64_t lo = b * kBlock;
    const std::uint64_t hi = std::min(n_samples, lo + kBlock);
    for (std::uint64_t i = lo; i < hi; ++i) ++counts[detail::walk_target(g, a, d, replica_seed(seed, i), options)];
    return counts;
  });
  std::map<HitTarget, std::uint64_t> counts;
  for (auto& r : results) {
    if (!r.ok()) throw WalkError(r.error);
    for (const auto& [t, c] : *r.value) counts[t] += c;
  }
  HittingDistribution out;
  out.source = a;
  out.samples = n_samples;
  for (const auto& [t, c] : counts)
    out.masses[t] = static_cast<double>(c) / static_cast<double>(n_samples);
  return out;
}

/// Poisson kernel of the unit disc, (1 - |a|^2) / |a - b|^2.
inline double continuous_poisson_kernel(Point a, Point b) {
  if (!(std::abs(a) < 1.0)) throw std::invalid_argument("poisson kernel: a must lie in the open unit disc");
  if (std::abs(std::abs(b) - 1.0) > 1e-9) throw std::invalid_argument("poisson kernel: b must lie on the unit circle");
  const double gap = std::norm(a - b);
  if (!(gap > 1e-30)) throw std::domain_error("poisson kernel diverges at a = b");
  return (1.0 - std::norm(a)) / gap;
}

/// Harmonic measure from x of the arc of angles [lo, hi], i.e. the Poisson
/// kernel integrated against the normalized arc-length measure. Uses the
/// antiderivative u + 2 atan2(rho sin u, 1 - rho cos u), which is continuous
/// in u for rho < 1.
inline double harmonic_measure_arc(Point x, double lo, double hi) {
  const double rho = std::abs(x);
  if (!(rho < 1.0)) throw std::invalid_argument("harmonic_measure_arc: x must lie in the open unit disc");
  const double len = hi - lo;
  if (!(len > 0.0) || len > 2.0 * std::numbers::pi * (1.0 + 1e-15))
    throw std::invalid_argument("harmonic_measure_arc: arc length must lie in (0, 2 pi]");
  const double phi = rho > 0.0 ? std::arg(x) : 0.0;
  auto anti = [rho](double u) { return u + 2.0 * std::atan2(rho * std::sin(u), 1.0 - rho * std::cos(u)); };
  return (anti(hi - phi) - anti(lo - phi)) / (2.0 * std::numbers::pi);
}

/// Angle of a boundary edge: arg of its exit point, in [0, 2 pi).
inline double boundary_edge_angle(const EmbeddedGraph& g, const Domain& d, EdgeRef e) {
  double a = std::arg(exit_point(g.position(e.from), g.position(e.to), d));
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= 2.0 * std::numbers::pi) a = 0.0;
  return a;
}

struct KernelOptions {
  std::size_t arcs = 16;
  /// |a| must not exceed 1 - epsilon.
  double epsilon = 0.5;
  /// Exact solve when true, otherwise Monte Carlo with `samples` walks.
  bool exact = true;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
};

struct ArcRow {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t edges = 0;
  double h_a = 0.0;
  double h_0 = 0.0;
  double ratio = 0.0;
  double lambda_bar = 0.0;
  double deviation = 0.0;
};

struct KernelReport {
  VertexId a = kNoVertex;
  Point a_position;
  double mesh = 0.0;
  bool exact = true;
  std::uint64_t samples = 0;
  double residual = 0.0;
  std::vector<ArcRow> arcs;
  double max_deviation = 0.0;
};

/// Compares H(a,J)/H(0,J) with the arc average of the Poisson kernel,
/// lambda_bar(a,J) = harmonic_measure_arc(a,J) * 2 pi / |J|, over equal arcs
/// J partitioning the unit circle (domain fixed to the unit disc).
inline KernelReport kernel_ratio_experiment(const EmbeddedGraph& g, VertexId a, const KernelOptions& opt = {}) {
  const Domain d = Domain::unit_disc();
  if (a >= g.size()) throw std::invalid_argument("kernel_ratio_experiment: vertex does not exist");
  const Point pa = g.position(a);
  if (std::abs(pa) > 1.0 - opt.epsilon)
    throw std::invalid_argument("kernel_ratio_experiment: |a| exceeds 1 - epsilon");
  if (opt.arcs < 1) throw std::invalid_argument("kernel_ratio_experiment: need at least one arc");

  KernelReport rep;
  rep.a = a;
  rep.a_position = pa;
  rep.mesh = g.mesh();
  rep.exact = opt.exact;
  HittingDistribution from_a;
  HittingDistribution from_0;
  if (opt.exact) {
    const AbsorbingChain chain(g, d);
    from_a = chain.distribution(a);
    from_0 = chain.distribution(g.origin());
    rep.residual = std::max(from_a.residual, from_0.residual);
  } else {
    from_a = mc_hitting_distribution(g, d, a, opt.samples, derive_seed(opt.seed, "kernel-a"), opt.threads);
    from_0 = mc_hitting_distribution(g, d, g.origin(), opt.samples, derive_seed(opt.seed, "kernel-0"), opt.threads);
    rep.samples = opt.samples;
  }

  const double width = 2.0 * std::numbers::pi / static_cast<double>(opt.arcs);
  rep.arcs.resize(opt.arcs);
  for (std::size_t j = 0; j < opt.arcs; ++j) {
    rep.arcs[j].lo = width * static_cast<double>(j);
    rep.arcs[j].hi = width * static_cast<double>(j + 1);
  }
  auto accumulate = [&](const HittingDistribution& h, bool is_a) {
    for (const auto& [t, m] : h.masses) {
      if (!t.is_edge()) continue;
      auto j = static_cast<std::size_t>(boundary_edge_angle(g, d, t.as_edge()) / width);
      j = std::min(j, opt.arcs - 1);
      (is_a ? rep.arcs[j].h_a : rep.arcs[j].h_0) += m;
      if (is_a) ++rep.arcs[j].edges;
    }
  };
  accumulate(from_a, true);
  accumulate(from_0, false);

  for (auto& row : rep.arcs) {
    if (!(row.h_0 > 0.0))
      throw std::runtime_error("insufficient resolution: arc [" + std::to_string(row.lo) + ", " +
                               std::to_string(row.hi) + ") has zero mass from the origin");
    row.ratio = row.h_a / row.h_0;
    row.lambda_bar = harmonic_measure_arc(pa, row.lo, row.hi) * 2.0 * std::numbers::pi / (row.hi - row.lo);
    row.deviation = std::abs(row.ratio - row.lambda_bar);
    rep.max_deviation = std::max(rep.max_deviation, row.deviation);
  }
  return rep;
}

/// Initial segment of a loop-erased curve from the boundary: gamma(0) is the
/// exit point of `exit`, and gamma(k) = interior[k-1] for k >= 1, with
/// interior[0] = exit.from.
struct LerwPrefix {
  EdgeRef exit;
  std::vector<VertexId> interior;

  std::size_t length() const { return interior.size(); }
  VertexId tip() const { return interior.empty() ? exit.from : interior.back(); }
  bool contains(VertexId v) const { return std::find(interior.begin(), interior.end(), v) != interior.end(); }
};

/// H_n(v, gamma(n)): probability that the walk from v first meets the
/// boundary or gamma[0,n] at gamma(n). For n = 0 this is the mass of the exit
/// edge; for n >= 1 the vertices gamma(1..n) absorb and gamma(n) is the target.
inline double hitting_observable(const AbsorbingChain& chain, VertexId v, const LerwPrefix& prefix) {
  const auto dist = chain.distribution(v);
  if (prefix.interior.empty()) return dist.mass(HitTarget::edge(prefix.exit));
  return dist.mass(HitTarget::vertex(prefix.interior.back()));
}

inline AbsorbingChain prefix_chain(const EmbeddedGraph& g, const Domain& d, const LerwPrefix& prefix) {
  return AbsorbingChain(g, d, prefix.interior);
}

/// The observable H_n(v, gamma(n)) / H_n(0, gamma(n)).
inline double martingale_observable(const EmbeddedGraph& g, const Domain& d, VertexId v, const LerwPrefix& prefix) {
  if (!prefix.interior.empty() && prefix.interior.front() != prefix.exit.from)
    throw std::invalid_argument("martingale_observable: gamma(1) must be the inside end of the exit edge");
  if (prefix.contains(v)) throw std::invalid_argument("martingale_observable: v lies on gamma[0,n]");
  const auto chain = prefix_chain(g, d, prefix);
  const double denominator = hitting_observable(chain, g.origin(), prefix);
  if (!(denominator > 0.0)) throw std::domain_error("martingale_observable: H_n(0, gamma(n)) = 0");
  return hitting_observable(chain, v, prefix) / denominator;
}

/// Probability that the loop-erasure of the reversal of the walk from z,
/// stopped on leaving d, begins with the given prefix.
///
/// In forward time the event reads: the walk first visits gamma(n) before
/// any other gamma(k); for k = n-1..1 its first visit to gamma(k) comes by a
/// step from gamma(k+1); and it leaves d through the exit edge. This is the
/// absorption probability of the walk augmented with the index of the
/// earliest-visited prefix vertex, computed by one sparse solve.
inline double lerw_prefix_probability(const EmbeddedGraph& g, const Domain& d, VertexId z, const LerwPrefix& prefix) {
  const std::size_t n = prefix.length();
  if (n > 0 && prefix.interior.front() != prefix.exit.from)
    throw std::invalid_argument("lerw_prefix_probability: gamma(1) must be the inside end of the exit edge");
  if (!d.contains(g.position(z))) throw std::invalid_argument("lerw_prefix_probability: start outside domain");

  // Position of each vertex along the prefix (1-based), 0 if absent.
  std::map<VertexId, std::size_t> order;
  for (std::size_t k = 0; k < n; ++k) {
    if (!order.emplace(prefix.interior[k], k + 1).second) return 0.0;  // not self-avoiding
  }
  auto on_prefix = [&](VertexId v) -> std::size_t {
    const auto it = order.find(v);
    return it == order.end() ? 0 : it->second;
  };

  std::vector<VertexId> inside;
  std::vector<VertexId> index(g.size(), kNoVertex);
  for (VertexId v = 0; v < g.size(); ++v)
    if (d.contains(g.position(v))) {
      index[v] = static_cast<VertexId>(inside.size());
      inside.push_back(v);
    }
  const std::size_t stages = n + 1;  // stage k in 1..n+1 stored at k-1
  const auto state = [&](VertexId v, std::size_t stage) {
    return static_cast<Eigen::Index>(index[v] * stages + (stage - 1));
  };
  const auto m = static_cast<Eigen::Index>(inside.size() * stages);

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (VertexId x : inside) {
    const double total = g.total_weight(x);
    if (!(total > 0.0)) throw IrreducibilityError("not irreducible in D: vertex without outgoing edges");
    const auto nb = g.neighbors(x);
    const auto ws = g.weights(x);
    for (std::size_t stage = 1; stage <= stages; ++stage) {
      const auto row = state(x, stage);
      triplets.emplace_back(row, row, 1.0);
      for (std::size_t e = 0; e < nb.size(); ++e) {
        if (ws[e] <= 0.0) continue;
        const VertexId y = nb[e];
        const double p = ws[e] / total;
        if (!d.contains(g.position(y))) {
          if (stage == 1 && x == prefix.exit.from && y == prefix.exit.to) rhs[row] += p;
          continue;
        }
        const std::size_t j = on_prefix(y);
        std::size_t next = stage;
        if (j != 0 && j < stage) {
          const bool first_entry = stage == n + 1 ? j == n : (j + 1 == stage && x == prefix.interior[stage - 1]);
          if (!first_entry) continue;  // the erasure would differ: killed
          next = j;
        }
        triplets.emplace_back(row, state(y, next), -p);
      }
    }
  }
  Eigen::SparseMatrix<double> a(m, m);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) throw IrreducibilityError("not irreducible in D: singular augmented system");
  const Eigen::VectorXd f = lu.solve(rhs);

  const std::size_t j0 = on_prefix(z);
  std::size_t stage0 = n + 1;
  if (j0 != 0) {
    if (j0 != n) return 0.0;
    stage0 = n;
  }
  return f[state(z, stage0)];
}

struct MartingaleRow {
  std::size_t n = 0;
  std::size_t prefix = 0;
  VertexId v = kNoVertex;
  double m_n = 0.0;
  double expected_next = 0.0;
};

struct MartingaleReport {
  std::vector<MartingaleRow> rows;
  std::size_t prefixes = 0;
  double max_abs_error = 0.0;
  /// Largest |sum_w P(gamma(n+1) = w | gamma[0,n]) - 1| over enumerated prefixes.
  double max_law_defect = 0.0;
};

/// Checks E[M_{n+1} | gamma[0,n]] = M_n for every LERW prefix from the origin
/// with n <= max_n and every inside vertex v off the prefix. The law of
/// gamma(n+1) is taken from exact prefix probabilities.
inline MartingaleReport martingale_check(const EmbeddedGraph& g, const Domain& d, std::size_t max_n) {
  const VertexId o = g.origin();
  MartingaleReport rep;
  std::vector<VertexId> observers;
  for (VertexId v = 0; v < g.size(); ++v)
    if (v != o && d.contains(g.position(v))) observers.push_back(v);

  struct Node {
    LerwPrefix prefix;
    double probability;
  };
  std::vector<Node> frontier;
  {
    const AbsorbingChain chain(g, d);
    const auto h0 = chain.distribution(o);
    for (const auto& e : chain.boundary_edges()) {
      const double p = h0.mass(HitTarget::edge(e));
      if (p > 0.0) frontier.push_back({LerwPrefix{e, {}}, p});
    }
  }

  for (std::size_t n = 0; n <= max_n && !frontier.empty(); ++n) {
    std::vector<Node> next_frontier;
    for (const auto& node : frontier) {
      const LerwPrefix& pre = node.prefix;
      if (n > 0 && pre.tip() == o) continue;  // the curve has ended
      const std::size_t id = rep.prefixes++;

      std::vector<Node> children;
      if (n == 0) {
        LerwPrefix child = pre;
        child.interior.push_back(pre.exit.from);
        children.push_back({child, lerw_prefix_probability(g, d, o, child)});
      } else {
        for (VertexId w = 0; w < g.size(); ++w) {
          if (!d.contains(g.position(w)) || pre.contains(w) || !(g.weight(w, pre.tip()) > 0.0)) continue;
          LerwPrefix child = pre;
          child.interior.push_back(w);
          const double p = lerw_prefix_probability(g, d, o, child);
          if (p > 0.0) children.push_back({child, p});
        }
      }
      double law_total = 0.0;
      for (const auto& c : children) law_total += c.probability / node.probability;
      rep.max_law_defect = std::max(rep.max_law_defect, std::abs(law_total - 1.0));

      const auto chain = prefix_chain(g, d, pre);
      const double h_origin = hitting_observable(chain, o, pre);
      std::vector<AbsorbingChain> child_chains;
      std::vector<double> child_origin;
      child_chains.reserve(children.size());
      for (const auto& c : children) {
        child_chains.push_back(prefix_chain(g, d, c.prefix));
        child_origin.push_back(hitting_observable(child_chains.back(), o, c.prefix));
      }
      for (VertexId v : observers) {
        if (pre.contains(v)) continue;
        MartingaleRow row;
        row.n = n;
        row.prefix = id;
        row.v = v;
        row.m_n = hitting_observable(chain, v, pre) / h_origin;
        for (std::size_t c = 0; c < children.size(); ++c) {
          const double m_next = hitting_observable(child_chains[c], v, children[c].prefix) / child_origin[c];
          row.expected_next += children[c].probability / node.probability * m_next;
        }
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(row.expected_next - row.m_n));
        rep.rows.push_back(row);
      }
      for (auto& c : children) next_frontier.push_back(std::move(c));
    }
    frontier = std::move(next_frontier);
  }
  return rep;
}

}  // namespace lerw

#endif  // LERW_HARMONIC_HPP
