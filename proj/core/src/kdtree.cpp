#include "meshless/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

namespace meshless {

namespace {

double coord(Point2 p, int axis) { return axis == 0 ? p.x : p.y; }

using Candidate = std::pair<double, std::size_t>;  // (squared distance, index)

}  // namespace

KdTree::KdTree(std::span<const Point2> points) : points_(points.begin(), points.end()) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kBucket + 1);
    build(0, points_.size());
  }
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kBucket) return id;

  double lo[2] = {coord(points_[order_[begin]], 0), coord(points_[order_[begin]], 1)};
  double hi[2] = {lo[0], lo[1]};
  for (std::size_t i = begin; i < end; ++i) {
    const Point2 p = points_[order_[i]];
    lo[0] = std::min(lo[0], p.x);
    hi[0] = std::max(hi[0], p.x);
    lo[1] = std::min(lo[1], p.y);
    hi[1] = std::max(hi[1], p.y);
  }
  const int axis = (hi[0] - lo[0]) >= (hi[1] - lo[1]) ? 0 : 1;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const double ca = coord(points_[a], axis);
                     const double cb = coord(points_[b], axis);
                     return ca < cb || (ca == cb && a < b);
                   });
  const double split = coord(points_[order_[mid]], axis);
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  Node& node = nodes_[id];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

std::vector<std::size_t> KdTree::nearest(Point2 query, std::size_t k) const {
  k = std::min(k, points_.size());
  std::vector<std::size_t> result;
  if (k == 0) return result;

  std::priority_queue<Candidate> best;  // max-heap: worst candidate on top

  auto visit = [&](auto&& self, std::size_t id) -> void {
    const Node& node = nodes_[id];
    if (node.left == kLeaf) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const std::size_t idx = order_[i];
        const Candidate c{squared_distance(query, points_[idx]), idx};
        if (best.size() < k) {
          best.push(c);
        } else if (c < best.top()) {
          best.pop();
          best.push(c);
        }
      }
      return;
    }
    // Left subtree holds coordinates <= split, right subtree >= split.
    const double diff = coord(query, node.axis) - node.split;
    const std::size_t near = diff <= 0.0 ? node.left : node.right;
    const std::size_t far = diff <= 0.0 ? node.right : node.left;
    self(self, near);
    if (best.size() < k || diff * diff <= best.top().first) self(self, far);
  };
  visit(visit, 0);

  result.resize(best.size());
  for (std::size_t i = result.size(); i-- > 0;) {
    result[i] = best.top().second;
    best.pop();
  }
  return result;
}

}  // namespace meshless
