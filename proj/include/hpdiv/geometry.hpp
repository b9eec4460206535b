#pragma once

#include <cstddef>
#include <vector>

namespace hpdiv {

// A list of d-dimensional points, stored row-major. Coordinates are unitless;
// nothing here assumes or enforces unit-cube support (scale and translation do
// not change MST combinatorics).
struct PointCloud {
  std::vector<double> coords;  // size() == size_ * dim
  std::size_t dim = 0;

  PointCloud() = default;
  PointCloud(std::size_t n, std::size_t d) : coords(n * d, 0.0), dim(d) {}

  std::size_t size() const { return dim ? coords.size() / dim : 0; }
  double* point(std::size_t i) { return coords.data() + i * dim; }
  const double* point(std::size_t i) const { return coords.data() + i * dim; }

  // Throws invalid_argument on non-finite coordinates or empty/ill-formed
  // storage. Called by the tree builders.
  void validate() const;
};

struct Edge {
  std::size_t a, b;  // a < b after canonicalization
  double length;
};

// Spanning tree over node_count points: exactly node_count - 1 edges,
// canonicalized (a < b per edge, edges sorted by (length, a, b)) so that two
// trees over the same cloud compare equal iff their edge sets are equal and
// total lengths sum in a fixed order.
struct SpanningTree {
  std::vector<Edge> edges;
  std::size_t node_count = 0;

  SpanningTree() = default;
  SpanningTree(std::vector<Edge> e, std::size_t n);

  double total_length() const;
  bool same_edges(const SpanningTree& other) const;
};

// Edges are ordered by the tuple (length, min index, max index). All builders
// below return the unique MST under this total order, so ties in distance
// never make the result ambiguous or algorithm-dependent.

// Reference path: exact dense Prim, O(n^2) distance evaluations.
SpanningTree build_emst(const PointCloud& cloud);

// Accelerated exact path: Boruvka rounds with a kd-tree nearest-neighbor
// search restricted to foreign components. Identical output to build_emst on
// every input (the shared total order makes the MST unique even with ties).
SpanningTree build_emst_fast(const PointCloud& cloud);

// Test oracle: enumerate all spanning trees (via edge subsets + cycle check).
// Limited to 8 points. Ties broken exactly like the other builders.
SpanningTree brute_force_mst(const PointCloud& cloud);

int max_degree(const SpanningTree& tree);

// Squared distance between two points; the comparison primitive everything
// else is built on.
double dist2(const double* p, const double* q, std::size_t dim);

}  // namespace hpdiv
