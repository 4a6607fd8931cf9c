#include "gridbarrier/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace gridbarrier::geometry {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, /*ClockWise=*/false, /*Closed=*/true>;
using BgMultiPolygon = bg::model::multi_polygon<BgPolygon>;

namespace {

BgPolygon to_boost(std::span<const Point> ring) {
  BgPolygon poly;
  for (const auto& p : ring) bg::append(poly.outer(), BgPoint(p.x, p.y));
  if (!ring.empty()) bg::append(poly.outer(), BgPoint(ring.front().x, ring.front().y));
  return poly;
}

Ring from_boost(const BgPolygon& poly) {
  Ring out;
  const auto& outer = poly.outer();
  for (std::size_t i = 0; i + 1 < outer.size(); ++i) out.push_back({outer[i].x(), outer[i].y()});
  return out;
}

}  // namespace

double signed_area(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

Point centroid(std::span<const Point> ring) {
  const std::size_t n = ring.size();
  const double area = signed_area(ring);
  if (n < 3 || area == 0.0) {
    Point mean;
    for (const auto& p : ring) {
      mean.x += p.x / static_cast<double>(n);
      mean.y += p.y / static_cast<double>(n);
    }
    return mean;
  }
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    const double cross = p.x * q.y - q.x * p.y;
    cx += (p.x + q.x) * cross;
    cy += (p.y + q.y) * cross;
  }
  return {cx / (6.0 * area), cy / (6.0 * area)};
}

bool inside(std::span<const Point> ring, Point p) {
  bool in = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = ring[i];
    const Point& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) in = !in;
    }
  }
  return in;
}

double segment_distance(Point p, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double boundary_distance(std::span<const Point> ring, Point p) {
  const std::size_t n = ring.size();
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (n == 1) return std::hypot(p.x - ring[0].x, p.y - ring[0].y);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(p, ring[i], ring[(i + 1) % n]));
  }
  return best;
}

double polyline_distance(std::span<const Point> line, Point p) {
  const std::size_t n = line.size();
  if (n == 0) return std::numeric_limits<double>::infinity();
  if (n == 1) return std::hypot(p.x - line[0].x, p.y - line[0].y);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    best = std::min(best, segment_distance(p, line[i], line[i + 1]));
  }
  return best;
}

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, polyline_distance(b, p));
  for (const auto& p : b) worst = std::max(worst, polyline_distance(a, p));
  return worst;
}

double ring_hausdorff(std::span<const Point> a, std::span<const Point> b) {
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, boundary_distance(b, p));
  for (const auto& p : b) worst = std::max(worst, boundary_distance(a, p));
  return worst;
}

bool is_simple(std::span<const Point> ring) {
  if (ring.size() < 3) return false;
  // bg::is_simple ignores crossings for areal geometries; the one-argument
  // intersects is the self-intersection test.
  return !bg::intersects(to_boost(ring));
}

std::vector<Ring> intersect(const Ring& a, const Ring& b) {
  BgPolygon pa = to_boost(a);
  BgPolygon pb = to_boost(b);
  bg::correct(pa);
  bg::correct(pb);
  BgMultiPolygon result;
  bg::intersection(pa, pb, result);
  std::vector<Ring> out;
  for (const auto& poly : result) {
    Ring ring = from_boost(poly);
    if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
    out.push_back(std::move(ring));
  }
  return out;
}

double perimeter_coordinate(const Box& box, Point p) {
  const double w = box.xmax - box.xmin;
  const double h = box.ymax - box.ymin;
  // Pick the nearest edge so points clipped with rounding still classify.
  const double d_bottom = std::abs(p.y - box.ymin);
  const double d_right = std::abs(p.x - box.xmax);
  const double d_top = std::abs(p.y - box.ymax);
  const double d_left = std::abs(p.x - box.xmin);
  const double m = std::min({d_bottom, d_right, d_top, d_left});
  if (m == d_bottom) return std::clamp(p.x - box.xmin, 0.0, w);
  if (m == d_right) return w + std::clamp(p.y - box.ymin, 0.0, h);
  if (m == d_top) return w + h + std::clamp(box.xmax - p.x, 0.0, w);
  return 2.0 * w + h + std::clamp(box.ymax - p.y, 0.0, h);
}

std::vector<Point> box_walk_ccw(const Box& box, Point from, Point to) {
  const double w = box.xmax - box.xmin;
  const double h = box.ymax - box.ymin;
  const double perimeter = 2.0 * (w + h);
  const double s0 = perimeter_coordinate(box, from);
  double s1 = perimeter_coordinate(box, to);
  if (s1 < s0) s1 += perimeter;

  const Point corners[4] = {{box.xmin, box.ymin}, {box.xmax, box.ymin},
                            {box.xmax, box.ymax}, {box.xmin, box.ymax}};
  const double corner_s[4] = {0.0, w, w + h, 2.0 * w + h};
  std::vector<Point> out;
  for (int lap = 0; lap < 2; ++lap) {
    for (int c = 0; c < 4; ++c) {
      const double s = corner_s[c] + lap * perimeter;
      if (s > s0 && s < s1) out.push_back(corners[c]);
    }
  }
  return out;
}

Point clip_to_box(const Box& box, Point a, Point b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  double t_exit = 1.0;
  auto limit = [&](double p, double q) {
    // Leaving through the face where p * t = q with p > 0.
    if (p > 0.0) t_exit = std::min(t_exit, q / p);
  };
  limit(-dx, a.x - box.xmin);
  limit(dx, box.xmax - a.x);
  limit(-dy, a.y - box.ymin);
  limit(dy, box.ymax - a.y);
  t_exit = std::clamp(t_exit, 0.0, 1.0);
  Point p{a.x + t_exit * dx, a.y + t_exit * dy};
  p.x = std::clamp(p.x, box.xmin, box.xmax);
  p.y = std::clamp(p.y, box.ymin, box.ymax);
  return p;
}

}  // namespace gridbarrier::geometry
