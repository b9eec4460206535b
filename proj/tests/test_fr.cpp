#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hpdiv/fr.hpp"
#include "hpdiv/random.hpp"

using namespace hpdiv;

namespace {

PointCloud cloud_from(std::initializer_list<std::initializer_list<double>> pts) {
  PointCloud c(pts.size(), pts.begin()->size());
  std::size_t i = 0;
  for (const auto& p : pts) {
    std::size_t k = 0;
    for (double v : p) c.point(i)[k++] = v;
    ++i;
  }
  return c;
}

LabeledPointSet random_sample(rng64& g, std::size_t m, std::size_t n,
                              std::size_t d, double shift = 0.0) {
  LabeledPointSet s;
  s.x_points = PointCloud(m, d);
  s.y_points = PointCloud(n, d);
  for (double& v : s.x_points.coords) v = uniform01(g);
  for (double& v : s.y_points.coords) v = uniform01(g);
  if (shift != 0.0)
    for (std::size_t i = 0; i < n; ++i) s.y_points.point(i)[0] += shift;
  return s;
}

}  // namespace

TEST_CASE("one point per class gives a single dichotomous edge") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}});
  s.y_points = cloud_from({{1.0, 1.0}});
  auto r = fr_statistic(s);
  CHECK(r.r_statistic == 1);
  CHECK(r.m == 1);
  CHECK(r.n == 1);
  CHECK(r.tree.edges.size() == 1);
}

TEST_CASE("alternating points on a line cross at every edge") {
  // x at 0 and 2, y at 1 and 3: path MST 0-1-2-3, all three edges mixed.
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0}, {2.0}});
  s.y_points = cloud_from({{1.0}, {3.0}});
  auto r = fr_statistic(s);
  CHECK(r.r_statistic == 3);
}

TEST_CASE("well separated clusters touch through one edge") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}, {0.1, 0.0}, {0.0, 0.1}});
  s.y_points = cloud_from({{10.0, 10.0}, {10.1, 10.0}, {10.0, 10.1}});
  auto r = fr_statistic(s);
  CHECK(r.r_statistic == 1);
}

TEST_CASE("labels are symmetric: swapping classes preserves the count") {
  rng64 g = make_rng(404);
  for (int t = 0; t < 30; ++t) {
    auto s = random_sample(g, 12, 9, 3);
    LabeledPointSet swapped;
    swapped.x_points = s.y_points;
    swapped.y_points = s.x_points;
    CHECK(fr_statistic(s).r_statistic == fr_statistic(swapped).r_statistic);
  }
}

TEST_CASE("rigid motion and uniform scaling leave the count unchanged") {
  rng64 g = make_rng(808);
  auto s = random_sample(g, 15, 15, 2);
  auto base = fr_statistic(s).r_statistic;

  auto transformed = s;
  const double c = 0.31, sn = std::sin(c), cs = std::cos(c);
  for (PointCloud* pc : {&transformed.x_points, &transformed.y_points}) {
    for (std::size_t i = 0; i < pc->size(); ++i) {
      double* p = pc->point(i);
      double x = p[0], y = p[1];
      p[0] = 5.0 * (cs * x - sn * y) + 100.0;  // rotate, scale, translate
      p[1] = 5.0 * (sn * x + cs * y) - 40.0;
    }
  }
  CHECK(fr_statistic(transformed).r_statistic == base);
}

TEST_CASE("validation demands matching dims and nonempty classes") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}});
  CHECK_THROWS_AS(fr_statistic(s), std::invalid_argument);  // empty y
  s.y_points = cloud_from({{1.0, 1.0, 1.0}});
  CHECK_THROWS_AS(fr_statistic(s), std::invalid_argument);  // dim mismatch
}

TEST_CASE("trivial partition reproduces the plain statistic") {
  rng64 g = make_rng(99);
  auto s = random_sample(g, 10, 10, 2);
  auto whole = fr_statistic(s);
  auto part = partition_fr(s, 1);
  REQUIRE(part.per_cell_r.size() == 1);
  CHECK(part.l == 1);
  CHECK(part.per_cell_r[0] == whole.r_statistic);
  CHECK(part.crossing_edge_count == 0);
  REQUIRE(part.per_cell_count.size() == 1);
  CHECK(part.per_cell_count[0] == s.m() + s.n());
}

TEST_CASE("two-cell split of the alternating line") {
  // Bounding interval [0,3]; halves [0,1.5) and [1.5,3]. Left cell holds
  // x=0, y=1 (one mixed edge); right cell x=2, y=3 (one mixed edge). The
  // global path 0-1-2-3 crosses the boundary once, between 1 and 2.
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0}, {2.0}});
  s.y_points = cloud_from({{1.0}, {3.0}});
  auto part = partition_fr(s, 2);
  REQUIRE(part.per_cell_r.size() == 2);
  CHECK(part.per_cell_r[0] == 1);
  CHECK(part.per_cell_r[1] == 1);
  CHECK(part.crossing_edge_count == 1);
  CHECK(std::accumulate(part.per_cell_count.begin(), part.per_cell_count.end(),
                        std::size_t{0}) == 4);
  // Whole-sample count obeys the cell decomposition bound.
  auto whole = fr_statistic(s).r_statistic;
  CHECK(whole <= part.sum_per_cell_r() + 2 * part.crossing_edge_count);
}

TEST_CASE("cell decomposition bound holds on random instances") {
  rng64 g = make_rng(1212);
  for (int t = 0; t < 40; ++t) {
    std::size_t d = 2 + static_cast<std::size_t>(uniform01(g) * 2);  // 2..3
    auto s = random_sample(g, 25, 25, d);
    auto whole = fr_statistic(s).r_statistic;
    for (std::size_t l : {2u, 3u}) {
      auto part = partition_fr(s, l);
      CAPTURE(t);
      CAPTURE(l);
      CHECK(whole <= part.sum_per_cell_r() + 2 * part.crossing_edge_count);
      CHECK(std::accumulate(part.per_cell_count.begin(),
                            part.per_cell_count.end(),
                            std::size_t{0}) == s.m() + s.n());
    }
  }
}

TEST_CASE("corner-augmented statistic sandwiches the plain one in the plane") {
  rng64 g = make_rng(4242);
  for (int t = 0; t < 40; ++t) {
    auto s = random_sample(g, 20, 20, 2);
    auto whole = fr_statistic(s).r_statistic;
    auto dual = dual_fr_statistic(s, 1);
    CAPTURE(t);
    CHECK(whole <= dual.total_dual_r());
    // Degree bound 6 in the plane: the augmented tree exceeds the plain
    // count by at most 2^d * 6 per cell.
    CHECK(dual.total_dual_r() <= whole + 24);
  }
}

TEST_CASE("corner-augmented statistic is superadditive under refinement") {
  // Refining the partition can only raise the total: each l=2 cell tree is
  // at least as constrained as the l=1 tree restricted to it. The l=1 total
  // plus the per-cell corner allowance dominates the refined sum.
  rng64 g = make_rng(31415);
  for (int t = 0; t < 25; ++t) {
    auto s = random_sample(g, 20, 20, 2);
    auto coarse = dual_fr_statistic(s, 1);
    auto fine = dual_fr_statistic(s, 2);
    CAPTURE(t);
    CHECK(fine.total_dual_r() <= coarse.total_dual_r() + 24 * 4);
  }
}

TEST_CASE("moving a point onto itself changes nothing") {
  rng64 g = make_rng(7);
  auto s = random_sample(g, 8, 8, 2);
  std::vector<double> same(s.x_points.point(3), s.x_points.point(3) + 2);
  CHECK(perturb_one_point_delta(s, 3, same) == 0);
}

TEST_CASE("a two-point sample is insensitive to relocation") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}});
  s.y_points = cloud_from({{1.0, 1.0}});
  CHECK(perturb_one_point_delta(s, 0, {5.0, -3.0}) == 0);
  CHECK(perturb_one_point_delta(s, 1, {0.25, 0.25}) == 0);
}

TEST_CASE("single relocations move the count by at most 24 in the plane") {
  rng64 g = make_rng(123456);
  std::size_t worst = 0;
  for (int t = 0; t < 1000; ++t) {
    auto s = random_sample(g, 15, 15, 2);
    std::size_t idx =
        static_cast<std::size_t>(uniform01(g) * static_cast<double>(30));
    if (idx >= 30) idx = 29;
    std::vector<double> pos = {uniform01(g) * 3 - 1, uniform01(g) * 3 - 1};
    auto delta = perturb_one_point_delta(s, idx, pos);
    worst = std::max(worst, delta);
    CAPTURE(t);
    CHECK(delta <= 24);
  }
  // Typical moves shift the count far less than the worst-case bound.
  WARN(worst <= 12);
}

TEST_CASE("perturbation rejects bad indices and positions") {
  LabeledPointSet s;
  s.x_points = cloud_from({{0.0, 0.0}, {1.0, 0.0}});
  s.y_points = cloud_from({{0.5, 0.5}});
  CHECK_THROWS_AS(perturb_one_point_delta(s, 3, {0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(perturb_one_point_delta(s, 0, {0.0}),
                  std::invalid_argument);
}
