#pragma once

#include <cstdint>
#include <vector>

#include "hpdiv/geometry.hpp"

namespace hpdiv {

// Two labeled samples sharing one dimension. x_points carries class 0 (size
// m), y_points class 1 (size n). In the merged cloud, indices [0, m) are X
// and [m, m+n) are Y.
struct LabeledPointSet {
  PointCloud x_points;
  PointCloud y_points;

  std::size_t m() const { return x_points.size(); }
  std::size_t n() const { return y_points.size(); }
  std::size_t dim() const { return x_points.dim; }

  PointCloud merged() const;
  void validate() const;  // both classes nonempty, dims equal, finite coords
};

struct FrResult {
  std::size_t r_statistic = 0;  // dichotomous edge count
  std::size_t m = 0, n = 0;
  SpanningTree tree;  // MST over the merged sample
};

struct PartitionReport {
  std::size_t l = 1;
  std::vector<std::size_t> per_cell_r;     // one entry per occupied cell
  std::vector<std::size_t> per_cell_count; // same order; sums to m+n
  std::size_t crossing_edge_count = 0;     // global-MST edges spanning cells
  std::size_t sum_per_cell_r() const;
};

struct DualFrResult {
  std::vector<std::size_t> per_cell_dual_r;
  std::size_t corner_edge_count = 0;  // edges incident to corner super-nodes
  std::size_t total_dual_r() const;
};

// Count of MST edges whose endpoints carry different class labels.
FrResult fr_statistic(const LabeledPointSet& sample);

// Split the tight bounding cube of the merged sample into l^d congruent
// cells; per-cell FR statistics plus the count of global-MST edges that cross
// a cell boundary. Cells missing one class contribute 0.
PartitionReport partition_fr(const LabeledPointSet& sample, std::size_t l);

// Per-cell MST over the cell's points plus a contracted corner super-node
// (the 2^d corners form a zero-cost clique; a point-corner edge costs the
// distance to the nearest corner). The dual statistic counts dichotomous
// point-point edges plus every point-corner edge.
DualFrResult dual_fr_statistic(const LabeledPointSet& sample, std::size_t l);

// |R(original) - R(sample with point `index` of the merged ordering moved to
// new_position)|. Bounded by 4 * c_d (remove + add, each touching at most the
// degree bound).
std::size_t perturb_one_point_delta(const LabeledPointSet& sample,
                                    std::size_t index,
                                    const std::vector<double>& new_position);

}  // namespace hpdiv
