#include "hpdiv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hpdiv {

void PointCloud::validate() const {
  if (dim == 0 || coords.empty() || coords.size() % dim != 0)
    throw std::invalid_argument("PointCloud: empty or ill-formed storage");
  for (double c : coords)
    if (!std::isfinite(c))
      throw std::invalid_argument("PointCloud: non-finite coordinate");
}

double dist2(const double* p, const double* q, std::size_t dim) {
  double s = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    double diff = p[k] - q[k];
    s += diff * diff;
  }
  return s;
}

namespace {

// The shared edge order: (squared length, min index, max index). Squared
// lengths compare identically to lengths and avoid sqrt in the hot path.
struct CandEdge {
  double d2;
  std::size_t a, b;  // a < b
};

inline bool cand_less(const CandEdge& x, const CandEdge& y) {
  if (x.d2 != y.d2) return x.d2 < y.d2;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

inline CandEdge make_cand(double d2, std::size_t i, std::size_t j) {
  return (i < j) ? CandEdge{d2, i, j} : CandEdge{d2, j, i};
}

constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

std::vector<Edge> finalize(const std::vector<CandEdge>& chosen) {
  std::vector<Edge> out;
  out.reserve(chosen.size());
  for (const CandEdge& c : chosen)
    out.push_back(Edge{c.a, c.b, std::sqrt(c.d2)});
  return out;
}

}  // namespace

SpanningTree::SpanningTree(std::vector<Edge> e, std::size_t n)
    : edges(std::move(e)), node_count(n) {
  for (Edge& ed : edges)
    if (ed.a > ed.b) std::swap(ed.a, ed.b);
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
    if (x.length != y.length) return x.length < y.length;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  if (node_count == 0 || edges.size() + 1 != node_count)
    throw std::invalid_argument("SpanningTree: edge count != node count - 1");
  UnionFind uf(node_count);
  for (const Edge& ed : edges) {
    if (ed.a >= node_count || ed.b >= node_count || ed.a == ed.b ||
        !uf.unite(ed.a, ed.b))
      throw std::invalid_argument("SpanningTree: edges do not form a tree");
  }
}

double SpanningTree::total_length() const {
  double s = 0.0;
  for (const Edge& e : edges) s += e.length;  // canonical order: stable sum
  return s;
}

bool SpanningTree::same_edges(const SpanningTree& other) const {
  if (node_count != other.node_count || edges.size() != other.edges.size())
    return false;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].a != other.edges[i].a || edges[i].b != other.edges[i].b)
      return false;
  return true;
}

SpanningTree build_emst(const PointCloud& cloud) {
  cloud.validate();
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim;
  if (n == 1) return SpanningTree({}, 1);

  // Dense Prim. best[v] is the least edge (under the total order) connecting
  // out-of-tree v to the current tree; each round adopts the globally least.
  std::vector<CandEdge> best(n, CandEdge{kInf, 0, 0});
  std::vector<char> in_tree(n, 0);
  std::vector<CandEdge> chosen;
  chosen.reserve(n - 1);

  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t round = 1; round < n; ++round) {
    const double* pc = cloud.point(current);
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      CandEdge cand = make_cand(dist2(pc, cloud.point(v), dim), current, v);
      if (cand_less(cand, best[v])) best[v] = cand;
    }
    std::size_t pick = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (pick == n || cand_less(best[v], best[pick])) pick = v;
    }
    chosen.push_back(best[pick]);
    in_tree[pick] = 1;
    current = pick;
  }
  return SpanningTree(finalize(chosen), n);
}

namespace {

// Minimal kd-tree over a static cloud, used for component-aware
// nearest-neighbor queries inside Boruvka rounds.
class KdTree {
 public:
  KdTree(const PointCloud& cloud) : cloud_(cloud), dim_(cloud.dim) {
    const std::size_t n = cloud.size();
    idx_.resize(n);
    std::iota(idx_.begin(), idx_.end(), std::size_t{0});
    nodes_.reserve(2 * n / kLeaf + 2);
    root_ = build(0, n);
  }

  // Nearest point to query point q (index qi) whose component differs from
  // comp[qi]; ties resolved by the shared edge order.
  CandEdge nearest_foreign(std::size_t qi, const std::vector<std::size_t>& comp) const {
    CandEdge best{kInf, 0, 0};
    search(root_, qi, cloud_.point(qi), comp, comp[qi], best);
    return best;
  }

 private:
  static constexpr std::size_t kLeaf = 16;

  struct Node {
    std::size_t begin, end;
    std::size_t left = npos, right = npos;
    std::vector<double> bb_min, bb_max;
    bool leaf() const { return left == npos; }
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t build(std::size_t begin, std::size_t end, std::size_t depth = 0) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.bb_min.assign(dim_, kInf);
    node.bb_max.assign(dim_, -kInf);
    for (std::size_t i = begin; i < end; ++i) {
      const double* p = cloud_.point(idx_[i]);
      for (std::size_t k = 0; k < dim_; ++k) {
        node.bb_min[k] = std::min(node.bb_min[k], p[k]);
        node.bb_max[k] = std::max(node.bb_max[k], p[k]);
      }
    }
    std::size_t self = nodes_.size();
    nodes_.push_back(std::move(node));
    if (end - begin > kLeaf) {
      // Split on the widest box axis; order by (coordinate, index) so the
      // layout is a pure function of the input.
      std::size_t axis = 0;
      double spread = -1.0;
      for (std::size_t k = 0; k < dim_; ++k) {
        double s = nodes_[self].bb_max[k] - nodes_[self].bb_min[k];
        if (s > spread) {
          spread = s;
          axis = k;
        }
      }
      std::size_t mid = begin + (end - begin) / 2;
      std::nth_element(idx_.begin() + begin, idx_.begin() + mid,
                       idx_.begin() + end,
                       [&](std::size_t x, std::size_t y) {
                         double cx = cloud_.point(x)[axis];
                         double cy = cloud_.point(y)[axis];
                         if (cx != cy) return cx < cy;
                         return x < y;
                       });
      std::size_t l = build(begin, mid, depth + 1);
      std::size_t r = build(mid, end, depth + 1);
      nodes_[self].left = l;
      nodes_[self].right = r;
    }
    return self;
  }

  double box_dist2(const Node& node, const double* q) const {
    double s = 0.0;
    for (std::size_t k = 0; k < dim_; ++k) {
      double lo = node.bb_min[k], hi = node.bb_max[k];
      double diff = (q[k] < lo) ? lo - q[k] : (q[k] > hi ? q[k] - hi : 0.0);
      s += diff * diff;
    }
    return s;
  }

  void search(std::size_t ni, std::size_t qi, const double* q,
              const std::vector<std::size_t>& comp, std::size_t qcomp,
              CandEdge& best) const {
    const Node& node = nodes_[ni];
    // Prune strictly: an equal box distance can still hide an index that wins
    // the tie-break, so only skip when the box is strictly farther.
    if (box_dist2(node, q) > best.d2) return;
    if (node.leaf()) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        std::size_t j = idx_[i];
        if (comp[j] == qcomp) continue;
        CandEdge cand = make_cand(dist2(q, cloud_.point(j), dim_), qi, j);
        if (cand_less(cand, best)) best = cand;
      }
      return;
    }
    double dl = box_dist2(nodes_[node.left], q);
    double dr = box_dist2(nodes_[node.right], q);
    if (dl <= dr) {
      search(node.left, qi, q, comp, qcomp, best);
      search(node.right, qi, q, comp, qcomp, best);
    } else {
      search(node.right, qi, q, comp, qcomp, best);
      search(node.left, qi, q, comp, qcomp, best);
    }
  }

  const PointCloud& cloud_;
  std::size_t dim_;
  std::vector<std::size_t> idx_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

}  // namespace

SpanningTree build_emst_fast(const PointCloud& cloud) {
  cloud.validate();
  const std::size_t n = cloud.size();
  if (n == 1) return SpanningTree({}, 1);
  if (n < 64) return build_emst(cloud);  // dense path wins on small inputs

  KdTree tree(cloud);
  UnionFind uf(n);
  std::vector<std::size_t> comp(n);
  std::vector<CandEdge> chosen;
  chosen.reserve(n - 1);

  // Boruvka: each round attaches, for every component, the least outgoing
  // edge under the total order. With a strict total order this is exactly the
  // unique MST, so the output matches the Prim reference bit for bit.
  while (chosen.size() + 1 < n) {
    for (std::size_t v = 0; v < n; ++v) comp[v] = uf.find(v);
    std::vector<CandEdge> best(n, CandEdge{kInf, 0, 0});  // keyed by root
    for (std::size_t v = 0; v < n; ++v) {
      CandEdge cand = tree.nearest_foreign(v, comp);
      if (cand.d2 == kInf) continue;
      std::size_t r = comp[v];
      if (cand_less(cand, best[r])) best[r] = cand;
    }
    bool progressed = false;
    for (std::size_t r = 0; r < n; ++r) {
      if (best[r].d2 == kInf) continue;
      if (uf.unite(best[r].a, best[r].b)) {
        chosen.push_back(best[r]);
        progressed = true;
      }
    }
    if (!progressed)
      throw std::logic_error("build_emst_fast: no progress in Boruvka round");
  }
  return SpanningTree(finalize(chosen), n);
}

SpanningTree brute_force_mst(const PointCloud& cloud) {
  cloud.validate();
  const std::size_t n = cloud.size();
  if (n > 8)
    throw std::invalid_argument("brute_force_mst: limited to 8 points");
  if (n == 1) return SpanningTree({}, 1);

  std::vector<CandEdge> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      all.push_back(CandEdge{dist2(cloud.point(i), cloud.point(j), cloud.dim),
                             i, j});
  std::sort(all.begin(), all.end(), cand_less);

  // Enumerate (n-1)-subsets of the sorted edge list in lexicographic order of
  // index tuples. The first spanning subset encountered is the lexicographic
  // minimum among all spanning trees, which (matroid greedy optimality) is
  // exactly the tree the other builders return, tie cases included.
  const std::size_t e = all.size(), k = n - 1;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), std::size_t{0});
  std::vector<std::size_t> best_pick;

  auto spanning = [&](const std::vector<std::size_t>& sel) {
    UnionFind uf(n);
    std::size_t merges = 0;
    for (std::size_t s : sel)
      if (uf.unite(all[s].a, all[s].b)) ++merges;
    return merges == n - 1;
  };

  while (true) {
    if (spanning(pick)) {
      best_pick = pick;
      break;
    }
    // next combination
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == e - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }

  std::vector<CandEdge> chosen;
  for (std::size_t s : best_pick) chosen.push_back(all[s]);
  return SpanningTree(finalize(chosen), n);
}

int max_degree(const SpanningTree& tree) {
  std::vector<int> deg(tree.node_count, 0);
  for (const Edge& e : tree.edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  int best = 0;
  for (int d : deg) best = std::max(best, d);
  return best;
}

}  // namespace hpdiv
