#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "lerw/erasure.hpp"
#include "lerw/graph.hpp"

using namespace lerw;

namespace {

// Reference eraser: append, and on revisiting a vertex cut back to its
// earlier occurrence. Quadratic.
std::vector<int> reference_erase(const std::vector<int>& x) {
  std::vector<int> out;
  for (int v : x) {
    auto it = std::find(out.begin(), out.end(), v);
    if (it != out.end())
      out.erase(it + 1, out.end());
    else
      out.push_back(v);
  }
  return out;
}

// Literal definition: T_k = last visit of y(k), y(k+1) = x(T_k + 1).
std::vector<int> literal_erase(const std::vector<int>& x) {
  std::vector<int> y{x[0]};
  while (true) {
    std::size_t t = 0;
    for (std::size_t l = 0; l < x.size(); ++l)
      if (x[l] == y.back()) t = l;
    if (t + 1 == x.size()) return y;
    y.push_back(x[t + 1]);
  }
}

}  // namespace

TEST(EraseLoops, WorkedExample) {
  // 0, 1, 1+i, 1, 2 on the integer lattice, labelled by site.
  const std::vector<int> x{0, 1, 11, 1, 2};
  EXPECT_EQ(erase_loops(x), (std::vector<int>{0, 1, 2}));
}

TEST(EraseLoops, Trivial) {
  EXPECT_EQ(erase_loops(std::vector<int>{7}), std::vector<int>{7});
  EXPECT_EQ(erase_loops(std::vector<int>{3, 3, 3}), std::vector<int>{3});
  EXPECT_EQ(erase_loops(std::vector<int>{1, 2, 1}), std::vector<int>{1});
  EXPECT_THROW(erase_loops(std::vector<int>{}), std::invalid_argument);
}

TEST(EraseLoops, ExhaustiveThreeByThree) {
  // Every nearest-neighbour walk of length at most 8 on the 3x3 grid.
  std::size_t walks = 0;
  std::vector<int> path;
  std::function<void()> extend = [&]() {
    ++walks;
    const auto got = erase_loops(path);
    ASSERT_EQ(got, reference_erase(path));
    ASSERT_EQ(got, literal_erase(path));
    if (path.size() == 9) return;
    const int v = path.back();
    const int x = v % 3, y = v / 3;
    const int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
    for (int k = 0; k < 4; ++k) {
      const int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || nx > 2 || ny < 0 || ny > 2) continue;
      path.push_back(ny * 3 + nx);
      extend();
      path.pop_back();
    }
  };
  for (int s = 0; s < 9; ++s) {
    path = {s};
    extend();
  }
  // Sum of the entries of A^k, k <= 8, for the grid adjacency matrix A.
  EXPECT_EQ(walks, 53829u);
}

TEST(EraseLoops, StructuralProperties) {
  Rng r(3);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> x{0};
    const int n = 1 + int(r.uniform() * 200);
    for (int i = 0; i < n; ++i) x.push_back(int(r.uniform() * 12));
    const auto y = erase_loops(x);
    ASSERT_EQ(y.front(), x.front());
    ASSERT_EQ(y.back(), x.back());
    ASSERT_EQ(std::set<int>(y.begin(), y.end()).size(), y.size());
    ASSERT_EQ(erase_loops(y), y);
    ASSERT_EQ(y, reference_erase(x));
  }
}

TEST(Reverse, Sequence) {
  EXPECT_EQ(reverse(std::vector<int>{1, 2, 3}), (std::vector<int>{3, 2, 1}));
  const std::vector<int> a{4, 5, 4, 6};
  EXPECT_EQ(reverse(reverse(a)), a);
}

TEST(LerwOfReversal, CurveShape) {
  const auto g = build_square_lattice(0.05, 1.3);
  const auto d = Domain::unit_disc();
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto w = run_walk(g, g.origin(), d, seed);
    const auto l = lerw_of_reversal(w, g);
    ASSERT_EQ(l.curve.size(), l.vertices.size() + 1);
    ASSERT_EQ(l.curve.points.front(), w.exit_point);
    ASSERT_EQ(l.vertices.back(), g.origin());
    ASSERT_EQ(l.vertices.front(), w.exit_edge->from);
    ASSERT_EQ(std::set<VertexId>(l.vertices.begin(), l.vertices.end()).size(), l.vertices.size());
    for (std::size_t k = 0; k < l.vertices.size(); ++k) {
      ASSERT_TRUE(d.contains(g.position(l.vertices[k])));
      if (k + 1 < l.vertices.size()) {
        ASSERT_GT(g.weight(l.vertices[k + 1], l.vertices[k]), 0.0);
      }
    }
  }
}

TEST(LerwOfReversal, ForwardErasureDiffersAsSequence) {
  // Both erasures are simple paths between the same endpoints, but generally
  // not the same path.
  const auto g = build_square_lattice(0.05, 1.3);
  const auto d = Domain::unit_disc();
  int differ = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto w = run_walk(g, g.origin(), d, seed);
    const auto a = lerw_of_reversal(w, g);
    const auto b = lerw_forward(w, g);
    ASSERT_EQ(b.vertices.front(), g.origin());
    ASSERT_EQ(b.curve.points.back(), w.exit_point);
    auto rb = reverse(b.vertices);
    differ += rb != a.vertices;
  }
  EXPECT_GT(differ, 0);
}

TEST(Curve, Interpolation) {
  Curve c{{{0, 0}, {1, 0}, {1, 2}}};
  EXPECT_EQ(c.at(0.5), Point(0.5, 0));
  EXPECT_EQ(c.at(1.5), Point(1, 1));
  EXPECT_EQ(c.at(-1), Point(0, 0));
  EXPECT_EQ(c.at(9), Point(1, 2));
  EXPECT_THROW(Curve{}.at(0), std::out_of_range);
}
