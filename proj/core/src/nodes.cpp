#include "meshless/nodes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "meshless/errors.hpp"

namespace meshless {

namespace {

constexpr int kCandidatesPerNode = 12;
constexpr double kRejectionFactor = 0.9;

// Portable [0,1) double from a 64-bit engine (no dependence on the
// standard library's distribution implementation).
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t boundary_cells(double h) {
  return static_cast<std::size_t>(std::ceil(1.0 / h - 1e-9));
}

void append_boundary(std::size_t cells, std::vector<Point2>& pts) {
  const double c = static_cast<double>(cells);
  for (std::size_t i = 0; i <= cells; ++i) pts.push_back({static_cast<double>(i) / c, 0.0});
  for (std::size_t i = 0; i <= cells; ++i) pts.push_back({static_cast<double>(i) / c, 1.0});
  for (std::size_t j = 1; j < cells; ++j) pts.push_back({0.0, static_cast<double>(j) / c});
  for (std::size_t j = 1; j < cells; ++j) pts.push_back({1.0, static_cast<double>(j) / c});
}

// Uniform bucket grid used while filling; cell edge = rejection radius, so
// a 3x3 neighbourhood covers every possible conflict.
class FillGrid {
 public:
  explicit FillGrid(double radius)
      : radius_(radius),
        dim_(static_cast<std::size_t>(std::ceil(1.0 / radius)) + 1),
        cells_(dim_ * dim_) {}

  void insert(Point2 p, std::size_t idx) { cells_[cell_of(p)].push_back(idx); }

  bool is_free(Point2 p, const std::vector<Point2>& pts) const {
    const double r2 = radius_ * radius_;
    const auto [cx, cy] = coords(p);
    for (std::size_t gy = cy == 0 ? 0 : cy - 1; gy <= std::min(cy + 1, dim_ - 1); ++gy) {
      for (std::size_t gx = cx == 0 ? 0 : cx - 1; gx <= std::min(cx + 1, dim_ - 1); ++gx) {
        for (std::size_t idx : cells_[gy * dim_ + gx]) {
          if (squared_distance(p, pts[idx]) < r2) return false;
        }
      }
    }
    return true;
  }

 private:
  std::pair<std::size_t, std::size_t> coords(Point2 p) const {
    auto clampi = [&](double v) {
      const double g = std::floor(v / radius_);
      return static_cast<std::size_t>(std::clamp(g, 0.0, static_cast<double>(dim_ - 1)));
    };
    return {clampi(p.x), clampi(p.y)};
  }
  std::size_t cell_of(Point2 p) const {
    const auto [cx, cy] = coords(p);
    return cy * dim_ + cx;
  }

  double radius_;
  std::size_t dim_;
  std::vector<std::vector<std::size_t>> cells_;
};

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

NodeSet::NodeSet(std::vector<Point2> points, std::vector<bool> boundary_mask, double h,
                 std::uint64_t seed)
    : points_(std::move(points)), boundary_(std::move(boundary_mask)), h_(h), seed_(seed) {
  if (boundary_.size() != points_.size()) {
    throw ParameterError("NodeSet: boundary mask length does not match point count");
  }
  for (const Point2& p : points_) {
    if (!is_finite(p)) throw ParameterError("NodeSet: non-finite coordinate");
  }
  tree_ = std::make_shared<const KdTree>(points_);
}

std::vector<std::size_t> NodeSet::interior_indices() const {
  std::vector<std::size_t> out;
  out.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!boundary_[i]) out.push_back(i);
  }
  return out;
}

std::size_t NodeSet::interior_count() const {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), false));
}

NodeSet generate_nodes(double h, std::uint64_t seed) {
  if (!(h > 0.0 && h <= 0.5)) throw ParameterError("generate_nodes: h must lie in (0, 0.5]");

  std::vector<Point2> pts;
  append_boundary(boundary_cells(h), pts);
  const std::size_t n_boundary = pts.size();

  const double r_min = kRejectionFactor * h;
  FillGrid grid(r_min);
  for (std::size_t i = 0; i < n_boundary; ++i) grid.insert(pts[i], i);

  std::mt19937_64 rng(seed);
  std::deque<std::size_t> front;
  for (std::size_t i = 0; i < n_boundary; ++i) front.push_back(i);

  auto try_accept = [&](Point2 c) {
    if (!(c.x > 0.0 && c.x < 1.0 && c.y > 0.0 && c.y < 1.0)) return false;
    if (!grid.is_free(c, pts)) return false;
    grid.insert(c, pts.size());
    front.push_back(pts.size());
    pts.push_back(c);
    return true;
  };

  constexpr double two_pi = 2.0 * std::numbers::pi;
  bool seeded_centre = false;
  for (;;) {
    while (!front.empty()) {
      const Point2 p = pts[front.front()];
      front.pop_front();
      const double base = two_pi * uniform01(rng);
      for (int k = 0; k < kCandidatesPerNode; ++k) {
        const double theta = base + two_pi * k / kCandidatesPerNode;
        try_accept({p.x + h * std::cos(theta), p.y + h * std::sin(theta)});
      }
    }
    // Coarse fills (h close to 0.5) can close the front without placing
    // anything; restart it from the centre of the square in that case.
    if (pts.size() > n_boundary || seeded_centre) break;
    seeded_centre = true;
    if (!try_accept({0.5, 0.5})) break;
  }

  std::vector<bool> mask(pts.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_boundary), true);
  return NodeSet(std::move(pts), std::move(mask), h, seed);
}

NodeSet uniform_grid(std::size_t cells) {
  if (cells < 1) throw ParameterError("uniform_grid: need at least one cell");
  std::vector<Point2> pts;
  append_boundary(cells, pts);
  const std::size_t n_boundary = pts.size();
  const double c = static_cast<double>(cells);
  for (std::size_t j = 1; j < cells; ++j) {
    for (std::size_t i = 1; i < cells; ++i) {
      pts.push_back({static_cast<double>(i) / c, static_cast<double>(j) / c});
    }
  }
  std::vector<bool> mask(pts.size(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_boundary), true);
  return NodeSet(std::move(pts), std::move(mask), 1.0 / c, 0);
}

std::vector<std::size_t> query_virtual(const NodeSet& nodes, Point2 pos, std::size_t n) {
  if (n == 0 || n > nodes.size()) {
    throw ParameterError("stencil size must lie in [1, N]");
  }
  if (!is_finite(pos)) throw ParameterError("query position is not finite");
  return nodes.tree().nearest(pos, n);
}

Stencil knn_stencil(const NodeSet& nodes, std::size_t center, std::size_t n) {
  if (center >= nodes.size()) throw ParameterError("knn_stencil: center index out of range");
  Stencil s{center, query_virtual(nodes, nodes.point(center), n)};
  // A coincident node with a lower index could precede the centre.
  auto it = std::find(s.neighbors.begin(), s.neighbors.end(), center);
  if (it == s.neighbors.end()) {
    s.neighbors.pop_back();
    s.neighbors.insert(s.neighbors.begin(), center);
  } else if (it != s.neighbors.begin()) {
    std::rotate(s.neighbors.begin(), it, it + 1);
  }
  return s;
}

Stencil virtual_stencil_at(const NodeSet& nodes, Point2 pos, std::size_t n) {
  std::vector<std::size_t> idx = query_virtual(nodes, pos, n);
  const std::size_t c = idx.front();
  const Point2 cp = nodes.point(c);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (a == c || b == c) return a == c && b != c;
    const double da = squared_distance(cp, nodes.point(a));
    const double db = squared_distance(cp, nodes.point(b));
    return da < db || (da == db && a < b);
  });
  return Stencil{c, std::move(idx)};
}

double min_pairwise_distance(const NodeSet& nodes) {
  double best = std::numeric_limits<double>::infinity();
  if (nodes.size() < 2) return best;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto nn = nodes.tree().nearest(nodes.point(i), 2);
    const std::size_t other = nn[0] == i ? nn[1] : nn[0];
    best = std::min(best, squared_distance(nodes.point(i), nodes.point(other)));
  }
  return std::sqrt(best);
}

void write_nodes_csv(std::ostream& out, const NodeSet& nodes) {
  out << "x,y,boundary\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Point2 p = nodes.point(i);
    out << format_double(p.x) << ',' << format_double(p.y) << ','
        << (nodes.is_boundary(i) ? 1 : 0) << '\n';
  }
}

NodeSet read_nodes_csv(std::istream& in, double h, std::uint64_t seed) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("x,y,boundary", 0) != 0) {
    throw ParameterError("node CSV: expected header x,y,boundary");
  }
  std::vector<Point2> pts;
  std::vector<bool> mask;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string xs, ys, bs;
    if (!std::getline(row, xs, ',') || !std::getline(row, ys, ',') || !std::getline(row, bs)) {
      throw ParameterError("node CSV: malformed line " + std::to_string(lineno));
    }
    try {
      pts.push_back({std::stod(xs), std::stod(ys)});
      const int b = std::stoi(bs);
      if (b != 0 && b != 1) throw ParameterError("");
      mask.push_back(b == 1);
    } catch (const std::exception&) {
      throw ParameterError("node CSV: malformed line " + std::to_string(lineno));
    }
  }
  return NodeSet(std::move(pts), std::move(mask), h, seed);
}

}  // namespace meshless
