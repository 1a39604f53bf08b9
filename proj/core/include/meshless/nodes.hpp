#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

#include "meshless/kdtree.hpp"
#include "meshless/point.hpp"

namespace meshless {

/// Scattered discretisation of the unit square. Boundary nodes come first
/// in index order, followed by interior nodes in fill order. Immutable after
/// construction; all queries are const and safe to call concurrently.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::vector<Point2> points, std::vector<bool> boundary_mask, double h,
          std::uint64_t seed);

  std::size_t size() const { return points_.size(); }
  const std::vector<Point2>& points() const { return points_; }
  const Point2& point(std::size_t i) const { return points_[i]; }
  bool is_boundary(std::size_t i) const { return boundary_[i]; }
  const std::vector<bool>& boundary_mask() const { return boundary_; }
  double h() const { return h_; }
  std::uint64_t seed() const { return seed_; }

  std::vector<std::size_t> interior_indices() const;
  std::size_t interior_count() const;

  const KdTree& tree() const { return *tree_; }

 private:
  std::vector<Point2> points_;
  std::vector<bool> boundary_;
  double h_ = 0.0;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const KdTree> tree_;
};

/// Ordered neighbour list; neighbors[0] == center.
struct Stencil {
  std::size_t center = 0;
  std::vector<std::size_t> neighbors;

  std::size_t size() const { return neighbors.size(); }
};

/// Boundary discretised uniformly with step 1/ceil(1/h); interior filled by
/// an advancing front (FIFO queue, 12 candidates on the circle of radius h,
/// rejection radius 0.9 h). Bitwise deterministic for a given (h, seed).
/// Requires 0 < h <= 0.5.
NodeSet generate_nodes(double h, std::uint64_t seed);

/// Tensor grid with spacing 1/cells on [0,1]^2, ordered like generate_nodes:
/// boundary nodes first, interior row by row.
NodeSet uniform_grid(std::size_t cells);

/// n nearest nodes of `center`, center first then ascending distance with
/// ties broken by node index.
Stencil knn_stencil(const NodeSet& nodes, std::size_t center, std::size_t n);

/// n nearest nodes to an arbitrary position (ascending distance, index
/// tie-break). `pos` may lie outside the unit square.
std::vector<std::size_t> query_virtual(const NodeSet& nodes, Point2 pos, std::size_t n);

/// Stencil centred at the node nearest to `pos`: the same n nodes that
/// query_virtual returns, reordered by distance from that nearest node.
/// When the set coincides with a node's knn stencil the two are identical.
Stencil virtual_stencil_at(const NodeSet& nodes, Point2 pos, std::size_t n);

/// Minimum pairwise distance, computed through the spatial index.
double min_pairwise_distance(const NodeSet& nodes);

/// CSV with header `x,y,boundary`, one row per node in index order.
void write_nodes_csv(std::ostream& out, const NodeSet& nodes);
NodeSet read_nodes_csv(std::istream& in, double h = 0.0, std::uint64_t seed = 0);

}  // namespace meshless
