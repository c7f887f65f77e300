// Small tour of the library: one LERW sample, its driving function, and an
// exact hitting distribution.

#include <cstdio>

#include "lerw/lerw.hpp"

using namespace lerw;

int main() {
  const double mesh = 0.02;
  const auto g = build_square_lattice(mesh, 1.0 + 3.0 * mesh);
  const auto d = Domain::unit_disc();

  const auto walk = run_walk(g, g.origin(), d, 42);
  const auto lerw = lerw_of_reversal(walk, g);
  std::printf("walk: %zu steps, exit at (%.4f, %.4f)\n", walk.steps(), walk.exit_point.real(),
              walk.exit_point.imag());
  std::printf("loop-erasure: %zu points\n", lerw.curve.size());

  const auto ex = extract_driving_detailed(lerw.curve);
  std::printf("driving function: capacity %.4f over %zu samples, final angle %.4f\n", ex.driving.horizon(),
              ex.driving.size(), ex.driving.angles.back());

  const AbsorbingChain chain(g, d);
  const auto h = chain.distribution(g.origin());
  const EdgeRef e = lerw.exit_edge;
  std::printf("H(0, exit edge) = %.6g over %zu boundary edges (residual %.1e)\n",
              h.mass(HitTarget::edge(e)), chain.boundary_edges().size(), h.residual);

  const auto rep = kernel_ratio_experiment(g, g.origin());
  std::printf("kernel ratio at the origin: max deviation %.2e\n", rep.max_deviation);
  return 0;
}
