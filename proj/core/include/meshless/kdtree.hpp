#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "meshless/point.hpp"

namespace meshless {

// Static 2-d tree over a point cloud. k-nearest queries return indices
// ordered by (squared distance, index), so ties resolve towards the lower
// index exactly as a full sort would.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Point2> points);

  std::size_t size() const { return points_.size(); }

  std::vector<std::size_t> nearest(Point2 query, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin;  // range into order_
    std::size_t end;
    std::size_t left = kLeaf;
    std::size_t right = kLeaf;
    int axis = 0;
    double split = 0.0;
  };
  static constexpr std::size_t kLeaf = static_cast<std::size_t>(-1);
  static constexpr std::size_t kBucket = 8;

  std::size_t build(std::size_t begin, std::size_t end);

  std::vector<Point2> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace meshless
