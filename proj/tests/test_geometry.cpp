#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "hpdiv/geometry.hpp"
#include "hpdiv/random.hpp"

using namespace hpdiv;

namespace {

PointCloud make_cloud(std::initializer_list<std::initializer_list<double>> pts) {
  PointCloud c(pts.size(), pts.begin()->size());
  std::size_t i = 0;
  for (const auto& p : pts) {
    std::size_t k = 0;
    for (double v : p) c.point(i)[k++] = v;
    ++i;
  }
  return c;
}

PointCloud random_cloud(rng64& g, std::size_t n, std::size_t d) {
  PointCloud c(n, d);
  for (double& v : c.coords) v = uniform01(g);
  return c;
}

bool has_edge(const SpanningTree& t, std::size_t a, std::size_t b) {
  for (const Edge& e : t.edges)
    if (e.a == a && e.b == b) return true;
  return false;
}

}  // namespace

TEST_CASE("collinear chain connects neighbors in order") {
  auto c = make_cloud({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  auto t = build_emst(c);
  REQUIRE(t.edges.size() == 3);
  CHECK(has_edge(t, 0, 1));
  CHECK(has_edge(t, 1, 2));
  CHECK(has_edge(t, 2, 3));
  CHECK(t.total_length() == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("unit square ties resolve by (length, min index, max index)") {
  auto c = make_cloud({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  for (auto* build : {&build_emst, &build_emst_fast, &brute_force_mst}) {
    auto t = (*build)(c);
    REQUIRE(t.edges.size() == 3);
    CHECK(has_edge(t, 0, 1));
    CHECK(has_edge(t, 0, 2));
    CHECK(has_edge(t, 1, 3));
    CHECK_FALSE(has_edge(t, 2, 3));
  }
}

TEST_CASE("all builders agree on small random instances") {
  rng64 g = make_rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + static_cast<std::size_t>(uniform01(g) * 6);  // 2..7
    std::size_t d = 2 + static_cast<std::size_t>(uniform01(g) * 3);  // 2..4
    auto c = random_cloud(g, n, d);
    auto prim = build_emst(c);
    auto fast = build_emst_fast(c);
    auto brute = brute_force_mst(c);
    CAPTURE(trial);
    CHECK(prim.same_edges(fast));
    CHECK(prim.same_edges(brute));
    CHECK(prim.total_length() ==
          doctest::Approx(brute.total_length()).epsilon(1e-12));
  }
}

TEST_CASE("duplicate points produce zero-length edges, not failures") {
  auto c = make_cloud({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}, {2, 2}});
  auto prim = build_emst(c);
  auto fast = build_emst_fast(c);
  auto brute = brute_force_mst(c);
  CHECK(prim.same_edges(fast));
  CHECK(prim.same_edges(brute));
  REQUIRE(prim.edges.size() == 3);
  CHECK(prim.edges[0].length == 0.0);
  CHECK(prim.edges[1].length == 0.0);
  CHECK(prim.edges[2].length > 0.0);
}

TEST_CASE("planar trees respect the degree-six bound") {
  rng64 g = make_rng(555);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_cloud(g, 200, 2);
    CHECK(max_degree(build_emst_fast(c)) <= 6);
  }
}

TEST_CASE("accelerated builder matches the dense reference at scale") {
  rng64 g = make_rng(31337);
  for (std::size_t d : {2u, 5u}) {
    auto c = random_cloud(g, 2000, d);
    auto prim = build_emst(c);
    auto fast = build_emst_fast(c);
    CHECK(prim.same_edges(fast));
    CHECK(prim.total_length() ==
          doctest::Approx(fast.total_length()).epsilon(1e-12));
  }
}

TEST_CASE("single point yields an empty tree") {
  auto c = make_cloud({{0.3, 0.7}});
  auto t = build_emst(c);
  CHECK(t.edges.empty());
  CHECK(t.node_count == 1);
  CHECK(t.total_length() == 0.0);
}

TEST_CASE("validation rejects malformed clouds") {
  PointCloud empty;
  CHECK_THROWS_AS(build_emst(empty), std::invalid_argument);

  auto c = make_cloud({{0, 0}, {1, 1}});
  c.point(1)[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(build_emst(c), std::invalid_argument);
  c.point(1)[0] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(build_emst_fast(c), std::invalid_argument);

  PointCloud ragged;
  ragged.dim = 3;
  ragged.coords = {0.0, 1.0};  // not a multiple of dim
  CHECK_THROWS_AS(build_emst(ragged), std::invalid_argument);
}

TEST_CASE("brute force refuses clouds past its size cap") {
  rng64 g = make_rng(9);
  auto c = random_cloud(g, 9, 2);
  CHECK_THROWS_AS(brute_force_mst(c), std::invalid_argument);
}

TEST_CASE("spanning tree constructor checks structure") {
  CHECK_THROWS_AS(SpanningTree({Edge{0, 1, 1.0}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(
      SpanningTree({Edge{0, 1, 1.0}, Edge{1, 0, 1.0}}, 3),  // duplicate/cycle
      std::invalid_argument);
  CHECK_THROWS_AS(SpanningTree({Edge{0, 0, 0.0}}, 2), std::invalid_argument);

  SpanningTree ok({Edge{1, 0, 2.0}, Edge{2, 1, 1.0}}, 3);
  REQUIRE(ok.edges.size() == 2);
  CHECK(ok.edges[0].length == 1.0);  // sorted by length
  CHECK(ok.edges[0].a == 1);         // canonical a < b
  CHECK(ok.edges[0].b == 2);
  CHECK(ok.same_edges(SpanningTree({Edge{0, 1, 2.0}, Edge{1, 2, 1.0}}, 3)));
  CHECK_FALSE(ok.same_edges(SpanningTree({Edge{0, 1, 2.0}, Edge{0, 2, 1.0}}, 3)));
}

TEST_CASE("dist2 is the squared euclidean distance") {
  double p[3] = {0, 0, 0};
  double q[3] = {1, 2, 2};
  CHECK(dist2(p, q, 3) == doctest::Approx(9.0).epsilon(1e-15));
  CHECK(dist2(p, p, 3) == 0.0);
}
