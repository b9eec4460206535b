#include "hpdiv/fr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace hpdiv {

PointCloud LabeledPointSet::merged() const {
  PointCloud out;
  out.dim = x_points.dim;
  out.coords = x_points.coords;
  out.coords.insert(out.coords.end(), y_points.coords.begin(),
                    y_points.coords.end());
  return out;
}

void LabeledPointSet::validate() const {
  if (x_points.size() == 0 || y_points.size() == 0)
    throw std::invalid_argument("LabeledPointSet: both classes must be nonempty");
  if (x_points.dim != y_points.dim)
    throw std::invalid_argument("LabeledPointSet: dimension mismatch");
  x_points.validate();
  y_points.validate();
}

std::size_t PartitionReport::sum_per_cell_r() const {
  std::size_t s = 0;
  for (std::size_t r : per_cell_r) s += r;
  return s;
}

std::size_t DualFrResult::total_dual_r() const {
  std::size_t s = 0;
  for (std::size_t r : per_cell_dual_r) s += r;
  return s;
}

FrResult fr_statistic(const LabeledPointSet& sample) {
  sample.validate();
  const std::size_t m = sample.m();
  SpanningTree tree = build_emst_fast(sample.merged());
  std::size_t r = 0;
  for (const Edge& e : tree.edges)
    if ((e.a < m) != (e.b < m)) ++r;
  return FrResult{r, m, sample.n(), std::move(tree)};
}

namespace {

// Partition frame shared by partition_fr and dual_fr_statistic: the tight
// bounding cube (anchored at the per-axis minima, side = the largest axis
// extent) cut into l^d congruent cells. Half-open cells except the last along
// each axis, realized by clamping the cell index.
struct Frame {
  std::vector<double> lo;
  double cell_width = 0.0;
  std::size_t l = 1;
  std::size_t dim = 0;

  Frame(const PointCloud& cloud, std::size_t l_in) : l(l_in), dim(cloud.dim) {
    lo.assign(dim, std::numeric_limits<double>::infinity());
    double side = 0.0;
    std::vector<double> hi(dim, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double* p = cloud.point(i);
      for (std::size_t k = 0; k < dim; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    for (std::size_t k = 0; k < dim; ++k) side = std::max(side, hi[k] - lo[k]);
    cell_width = side / static_cast<double>(l);
  }

  std::size_t axis_cell(double coord, std::size_t k) const {
    if (cell_width <= 0.0) return 0;
    double t = std::floor((coord - lo[k]) / cell_width);
    if (t < 0.0) t = 0.0;
    auto c = static_cast<std::size_t>(t);
    return std::min(c, l - 1);
  }

  std::size_t cell_id(const double* p) const {
    std::size_t id = 0;
    for (std::size_t k = dim; k-- > 0;) id = id * l + axis_cell(p[k], k);
    return id;
  }

  // Distance from a point to the nearest corner of its cell, computed
  // axis-separably (min over 2^d corners factorizes per coordinate).
  double nearest_corner_dist(const double* p, std::size_t cell) const {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      std::size_t c = cell % l;
      cell /= l;
      double a = lo[k] + static_cast<double>(c) * cell_width;
      double b = a + cell_width;
      double da = p[k] - a, db = p[k] - b;
      s += std::min(da * da, db * db);
    }
    return s;
  }
};

struct CellGroup {
  std::vector<std::size_t> members;  // merged indices, ascending
  bool has_x = false, has_y = false;
};

std::map<std::size_t, CellGroup> group_cells(const PointCloud& merged,
                                             const Frame& frame,
                                             std::size_t m) {
  std::map<std::size_t, CellGroup> cells;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    CellGroup& g = cells[frame.cell_id(merged.point(i))];
    g.members.push_back(i);
    (i < m ? g.has_x : g.has_y) = true;
  }
  return cells;
}

LabeledPointSet extract_cell(const PointCloud& merged, std::size_t m,
                             const CellGroup& g) {
  LabeledPointSet out;
  out.x_points.dim = out.y_points.dim = merged.dim;
  for (std::size_t i : g.members) {
    auto& dst = (i < m) ? out.x_points : out.y_points;
    dst.coords.insert(dst.coords.end(), merged.point(i),
                      merged.point(i) + merged.dim);
  }
  return out;
}

}  // namespace

PartitionReport partition_fr(const LabeledPointSet& sample, std::size_t l) {
  sample.validate();
  if (l < 1) throw std::invalid_argument("partition_fr: l must be >= 1");
  const std::size_t m = sample.m();
  PointCloud merged = sample.merged();
  Frame frame(merged, l);

  PartitionReport report;
  report.l = l;
  for (const auto& [id, group] : group_cells(merged, frame, m)) {
    (void)id;
    report.per_cell_count.push_back(group.members.size());
    if (group.has_x && group.has_y)
      report.per_cell_r.push_back(
          fr_statistic(extract_cell(merged, m, group)).r_statistic);
    else
      report.per_cell_r.push_back(0);  // one-class cell: no crossing possible
  }

  SpanningTree tree = build_emst_fast(merged);
  for (const Edge& e : tree.edges)
    if (frame.cell_id(merged.point(e.a)) != frame.cell_id(merged.point(e.b)))
      ++report.crossing_edge_count;
  return report;
}

DualFrResult dual_fr_statistic(const LabeledPointSet& sample, std::size_t l) {
  sample.validate();
  if (l < 1) throw std::invalid_argument("dual_fr_statistic: l must be >= 1");
  const std::size_t m = sample.m();
  PointCloud merged = sample.merged();
  Frame frame(merged, l);

  DualFrResult result;
  for (const auto& [id, group] : group_cells(merged, frame, m)) {
    const std::size_t k = group.members.size();
    // Contracted graph: nodes 0..k-1 are the cell's points, node k the corner
    // super-node. The corners form a zero-cost clique, so a point's edge to
    // the super-node costs the distance to its nearest cell corner. Prim with
    // the shared (length, min index, max index) order keeps this
    // deterministic; the super-node sorts after every point.
    std::vector<double> corner_d2(k);
    for (std::size_t i = 0; i < k; ++i)
      corner_d2[i] =
          frame.nearest_corner_dist(merged.point(group.members[i]), id);

    auto pair_d2 = [&](std::size_t i, std::size_t j) {
      if (i == k) return corner_d2[j];
      if (j == k) return corner_d2[i];
      return dist2(merged.point(group.members[i]),
                   merged.point(group.members[j]), merged.dim);
    };

    const std::size_t nn = k + 1;
    std::vector<char> in_tree(nn, 0);
    std::vector<double> best_d2(nn, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> best_from(nn, nn);
    std::size_t current = 0;
    in_tree[0] = 1;
    std::size_t dich = 0, corner_edges = 0;
    for (std::size_t round = 1; round < nn; ++round) {
      for (std::size_t v = 0; v < nn; ++v) {
        if (in_tree[v]) continue;
        double d2v = pair_d2(current, v);
        std::size_t lo_new = std::min(current, v), hi_new = std::max(current, v);
        std::size_t lo_old = std::min(best_from[v], v),
                    hi_old = std::max(best_from[v], v);
        bool better = d2v < best_d2[v] ||
                      (d2v == best_d2[v] &&
                       (lo_new < lo_old || (lo_new == lo_old && hi_new < hi_old)));
        if (better) {
          best_d2[v] = d2v;
          best_from[v] = current;
        }
      }
      std::size_t pick = nn;
      for (std::size_t v = 0; v < nn; ++v) {
        if (in_tree[v]) continue;
        if (pick == nn) {
          pick = v;
          continue;
        }
        std::size_t lov = std::min(best_from[v], v), hiv = std::max(best_from[v], v);
        std::size_t lop = std::min(best_from[pick], pick),
                    hip = std::max(best_from[pick], pick);
        if (best_d2[v] < best_d2[pick] ||
            (best_d2[v] == best_d2[pick] &&
             (lov < lop || (lov == lop && hiv < hip))))
          pick = v;
      }
      std::size_t u = best_from[pick];
      if (pick == k || u == k) {
        ++corner_edges;
      } else {
        bool ux = group.members[u] < m;
        bool px = group.members[pick] < m;
        if (ux != px) ++dich;
      }
      in_tree[pick] = 1;
      current = pick;
    }
    result.per_cell_dual_r.push_back(dich + corner_edges);
    result.corner_edge_count += corner_edges;
  }
  return result;
}

std::size_t perturb_one_point_delta(const LabeledPointSet& sample,
                                    std::size_t index,
                                    const std::vector<double>& new_position) {
  sample.validate();
  if (index >= sample.m() + sample.n())
    throw std::invalid_argument("perturb_one_point_delta: index out of range");
  if (new_position.size() != sample.dim())
    throw std::invalid_argument("perturb_one_point_delta: dimension mismatch");

  std::size_t r_before = fr_statistic(sample).r_statistic;
  LabeledPointSet moved = sample;
  double* dst = (index < sample.m())
                    ? moved.x_points.point(index)
                    : moved.y_points.point(index - sample.m());
  std::copy(new_position.begin(), new_position.end(), dst);
  std::size_t r_after = fr_statistic(moved).r_statistic;
  return (r_before > r_after) ? r_before - r_after : r_after - r_before;
}

}  // namespace hpdiv
