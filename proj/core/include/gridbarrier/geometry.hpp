#pragma once

// Planar polygon helpers in the (delta, omega) plane.

#include <span>
#include <vector>

namespace gridbarrier::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// Closed ring stored without repeating the first vertex.
using Ring = std::vector<Point>;

struct Box {
  double xmin = 0.0;
  double xmax = 0.0;
  double ymin = 0.0;
  double ymax = 0.0;

  bool contains(Point p, double tol = 0.0) const {
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
  }
};

/// Shoelace area; positive for counter-clockwise rings.
double signed_area(std::span<const Point> ring);

Point centroid(std::span<const Point> ring);

/// Even-odd crossing test; points exactly on an edge may land either way.
bool inside(std::span<const Point> ring, Point p);

double segment_distance(Point p, Point a, Point b);

/// Distance from `p` to the ring's boundary (closing edge included).
double boundary_distance(std::span<const Point> ring, Point p);

/// Distance from `p` to an open polyline.
double polyline_distance(std::span<const Point> line, Point p);

/// Symmetric Hausdorff distance between two open polylines, measured from
/// the vertices of each to the segments of the other.
double hausdorff(std::span<const Point> a, std::span<const Point> b);

/// Symmetric Hausdorff distance between two closed rings.
double ring_hausdorff(std::span<const Point> a, std::span<const Point> b);

/// True when no two non-adjacent edges intersect.
bool is_simple(std::span<const Point> ring);

/// Boolean intersection of two simple counter-clockwise rings. Returns the
/// outer rings of the result components, each counter-clockwise.
std::vector<Ring> intersect(const Ring& a, const Ring& b);

/// Perimeter coordinate of a point on the box boundary, measured
/// counter-clockwise from the lower-left corner.
double perimeter_coordinate(const Box& box, Point p);

/// Vertices met when walking the box boundary counter-clockwise from `from`
/// to `to` (both on the boundary), excluding both endpoints.
std::vector<Point> box_walk_ccw(const Box& box, Point from, Point to);

/// First intersection of the segment a->b with the box boundary when `a` is
/// inside (or on) the box and `b` outside. Falls back to clamping `b`.
Point clip_to_box(const Box& box, Point a, Point b);

}  // namespace gridbarrier::geometry
