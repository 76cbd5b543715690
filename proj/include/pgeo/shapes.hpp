#pragma once

/// \file shapes.hpp
///
/// Test-shape generators and arc-length resampling.

#include <cmath>
#include <numbers>
#include <vector>

#include "curvegeom.hpp"

namespace pgeo::shapes {

inline void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

/// N points at uniform angle on a circle, starting on the positive x-axis.
inline Polygon circle(double r, std::size_t n, Point center = {0.0, 0.0}) {
  require(n >= 3, "circle needs n >= 3");
  require(r > 0.0, "circle radius must be positive");
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    pts[j] = {center.x + r * std::cos(th), center.y + r * std::sin(th)};
  }
  return Polygon(std::move(pts));
}

inline Polygon ellipse(double rx, double ry, std::size_t n, Point center = {0.0, 0.0}) {
  require(n >= 3, "ellipse needs n >= 3");
  require(rx > 0.0 && ry > 0.0, "ellipse radii must be positive");
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    pts[j] = {center.x + rx * std::cos(th), center.y + ry * std::sin(th)};
  }
  return Polygon(std::move(pts));
}

/// Smooth k-pointed star r(th) = (r_in + r_out)/2 + (r_out - r_in)/2 cos(k th).
inline Polygon star(int k, double r_in, double r_out, std::size_t n, Point center = {0.0, 0.0}) {
  require(n >= 3, "star needs n >= 3");
  require(k >= 2, "star needs k >= 2");
  require(r_in > 0.0 && r_out > 0.0, "star radii must be positive");
  const double mid = 0.5 * (r_in + r_out), amp = 0.5 * (r_out - r_in);
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    const double r = mid + amp * std::cos(k * th);
    pts[j] = {center.x + r * std::cos(th), center.y + r * std::sin(th)};
  }
  return Polygon(std::move(pts));
}

/// Axis-aligned square with a corner at `corner`, sampled at uniform arc
/// length counter-clockwise from that corner.
inline Polygon square(double side, std::size_t n, Point corner = {0.0, 0.0}) {
  require(n >= 3, "square needs n >= 3");
  require(side > 0.0, "square side must be positive");
  const Point corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = 4.0 * static_cast<double>(j) / static_cast<double>(n);  // perimeter in units of side
    const auto e = static_cast<std::size_t>(std::floor(u)) % 4;
    const double f = u - std::floor(u);
    const Point p = corners[e] + f * (corners[(e + 1) % 4] - corners[e]);
    pts[j] = {corner.x + side * p.x, corner.y + side * p.y};
  }
  return Polygon(std::move(pts));
}

/// n points at uniform arc length along the polygon, starting at vertex 0.
inline Polygon resample(const Polygon& c, std::size_t n) {
  require(n >= 3, "resampling needs n >= 3");
  const std::size_t m = c.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t v = 0; v < m; ++v) cum[v + 1] = cum[v] + norm(c[next_index(v, m)] - c[v]);
  const double total = cum[m];
  require(total > 0.0, "cannot resample a polygon of zero length");
  std::vector<Point> pts(n);
  std::size_t e = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = total * static_cast<double>(j) / static_cast<double>(n);
    while (e + 1 < m && cum[e + 1] <= s) ++e;
    const double len = cum[e + 1] - cum[e];
    const double f = len > 0.0 ? (s - cum[e]) / len : 0.0;
    pts[j] = c[e] + f * (c[next_index(e, m)] - c[e]);
  }
  return Polygon(std::move(pts));
}

/// Rotation by `angle` about the origin followed by a translation.
inline Polygon rigid_motion(const Polygon& c, double angle, Point shift) {
  const double ca = std::cos(angle), sa = std::sin(angle);
  std::vector<Point> pts(c.size());
  for (std::size_t v = 0; v < c.size(); ++v)
    pts[v] = {ca * c[v].x - sa * c[v].y + shift.x, sa * c[v].x + ca * c[v].y + shift.y};
  return Polygon(std::move(pts));
}

}  // namespace pgeo::shapes
