#pragma once

/// \file curvegeom.hpp
///
/// Discrete differential geometry of closed polygons.
///
/// Quantities live on their natural domain: vectors and lengths on edges,
/// turning angle and curvature on vertices, and volume weights on the
/// "triangles" pairing a vertex v with one of its two incident edges
/// w in {v-1, v}. Edge v runs from vertex v to vertex v+1; indices are cyclic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "autodiff.hpp"
#include "errors.hpp"
#include "vec2.hpp"

namespace pgeo {

inline std::size_t prev_index(std::size_t v, std::size_t n) { return v == 0 ? n - 1 : v - 1; }
inline std::size_t next_index(std::size_t v, std::size_t n) { return v + 1 == n ? 0 : v + 1; }

/// Which incident edge a triangle uses: the one before its vertex or the one
/// starting at it.
enum class Side : std::size_t { prev = 0, self = 1 };

/// Flat index of triangle (v, w) where w = v-1 for Side::prev, w = v for
/// Side::self. Triangle fields hold 2N entries.
inline std::size_t tri_index(std::size_t v, Side side) { return 2 * v + static_cast<std::size_t>(side); }

/// Edge index w of a triangle.
inline std::size_t tri_edge(std::size_t v, Side side, std::size_t n) {
  return side == Side::self ? v : prev_index(v, n);
}

/// A closed polygon with at least three vertices.
class Polygon {
 public:
  Polygon() = default;
  explicit Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3) throw InvalidArgument("a polygon needs at least 3 vertices");
  }

  std::size_t size() const { return vertices_.size(); }
  const Point& operator[](std::size_t i) const { return vertices_[i]; }
  Point& operator[](std::size_t i) { return vertices_[i]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  std::span<const Point> span() const { return vertices_; }

  friend bool operator==(const Polygon&, const Polygon&) = default;

 private:
  std::vector<Point> vertices_;
};

struct GeometryOptions {
  /// Degenerate-edge threshold relative to the bounding-box diagonal.
  double edge_eps_rel = 1e-12;
  /// Multiply the turning angle by the orientation of the turn.
  bool signed_curvature = false;
};

template <typename S>
struct CurveGeometry {
  std::vector<Vec2<S>> edge;     ///< c[v+1] - c[v]
  std::vector<S> vol_edge;       ///< |edge[v]|
  std::vector<S> vol_vert;       ///< (vol_edge[v-1] + vol_edge[v]) / 2
  std::vector<S> vol_tri;        ///< vol_vert[v] + vol_edge[w], see tri_index
  std::vector<Vec2<S>> tangent;  ///< edge / vol_edge
  std::vector<Vec2<S>> normal;   ///< (tangent.y, -tangent.x)
  S length{};
  std::vector<S> angle;    ///< turning angle at each vertex, in [0, pi]
  std::vector<S> kappa;    ///< angle / vol_vert
  std::vector<S> kappa_s;  ///< (kappa[v+1] - kappa[v]) / vol_edge[v]
  double edge_eps = 0.0;   ///< absolute degeneracy threshold used

  std::size_t size() const { return vol_edge.size(); }
};

/// Absolute degeneracy threshold for a vertex set.
template <typename S>
double edge_threshold(std::span<const Vec2<S>> c, const GeometryOptions& opts) {
  double xmin = value_of(c[0].x), xmax = xmin, ymin = value_of(c[0].y), ymax = ymin;
  for (const auto& p : c) {
    xmin = std::min(xmin, value_of(p.x));
    xmax = std::max(xmax, value_of(p.x));
    ymin = std::min(ymin, value_of(p.y));
    ymax = std::max(ymax, value_of(p.y));
  }
  return opts.edge_eps_rel * std::hypot(xmax - xmin, ymax - ymin);
}

/// All per-slice geometric quantities, recomputed from scratch.
///
/// Throws DegenerateEdge if an edge is shorter than the threshold.
template <typename S>
CurveGeometry<S> compute_geometry(std::span<const Vec2<S>> c, const GeometryOptions& opts = {}) {
  using std::sqrt;
  const std::size_t n = c.size();
  if (n < 3) throw InvalidArgument("a polygon needs at least 3 vertices");
  const double eps = edge_threshold(c, opts);

  CurveGeometry<S> g;
  g.edge_eps = eps;
  g.edge.resize(n);
  g.vol_edge.resize(n);
  g.tangent.resize(n);
  g.normal.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    g.edge[v] = c[next_index(v, n)] - c[v];
    g.vol_edge[v] = sqrt(g.edge[v].x * g.edge[v].x + g.edge[v].y * g.edge[v].y);
    if (!(value_of(g.vol_edge[v]) >= eps) || value_of(g.vol_edge[v]) == 0.0)
      throw DegenerateEdge(v, value_of(g.vol_edge[v]));
    g.tangent[v] = {g.edge[v].x / g.vol_edge[v], g.edge[v].y / g.vol_edge[v]};
    g.normal[v] = {g.tangent[v].y, -g.tangent[v].x};
  }

  g.vol_vert.resize(n);
  for (std::size_t v = 0; v < n; ++v) g.vol_vert[v] = (g.vol_edge[prev_index(v, n)] + g.vol_edge[v]) / 2.0;

  g.vol_tri.resize(2 * n);
  for (std::size_t v = 0; v < n; ++v) {
    g.vol_tri[tri_index(v, Side::prev)] = g.vol_vert[v] + g.vol_edge[prev_index(v, n)];
    g.vol_tri[tri_index(v, Side::self)] = g.vol_vert[v] + g.vol_edge[v];
  }

  g.length = g.vol_edge[0];
  for (std::size_t v = 1; v < n; ++v) g.length = g.length + g.vol_edge[v];

  g.angle.resize(n);
  g.kappa.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& tp = g.tangent[prev_index(v, n)];
    const auto& tv = g.tangent[v];
    g.angle[v] = clamped_acos(tp.x * tv.x + tp.y * tv.y);
    if (opts.signed_curvature) g.angle[v] = sign_of(cross(tp, tv)) * g.angle[v];
    g.kappa[v] = g.angle[v] / g.vol_vert[v];
  }

  g.kappa_s.resize(n);
  for (std::size_t v = 0; v < n; ++v) g.kappa_s[v] = (g.kappa[next_index(v, n)] - g.kappa[v]) / g.vol_edge[v];
  return g;
}

inline CurveGeometry<double> compute_geometry(const Polygon& curve, const GeometryOptions& opts = {}) {
  return compute_geometry<double>(curve.span(), opts);
}

/// Arc-length derivative of a vertex field, living on edges.
template <typename S>
std::vector<S> d_s_edge(std::span<const S> field, const CurveGeometry<S>& geom) {
  const std::size_t n = geom.size();
  if (field.size() != n) throw SizeMismatch("vertex field size does not match the polygon");
  std::vector<S> out(n);
  for (std::size_t v = 0; v < n; ++v) out[v] = (field[next_index(v, n)] - field[v]) / geom.vol_edge[v];
  return out;
}

inline std::vector<double> d_s_edge(const std::vector<double>& field, const CurveGeometry<double>& geom) {
  return d_s_edge<double>(std::span<const double>(field), geom);
}

}  // namespace pgeo
