#pragma once

/// \file splitting.hpp
///
/// Normal/tangential decomposition of deformation fields h at a polygon.
/// For the metric family implemented here the horizontal subbundle is the
/// normal one, so horizontal projection is pointwise normal projection.

#include <cmath>
#include <vector>

#include "curvegeom.hpp"

namespace pgeo {

/// One 2-vector per vertex: a tangent vector to the space of polygons.
using VertexField = std::vector<Point>;

/// Normal and tangential coefficients of a vertex field on each triangle.
struct SplitField {
  std::vector<double> a;  ///< <h[v], n[w]>, indexed by tri_index
  std::vector<double> b;  ///< <h[v], tangent[w]>
};

/// a and b against the edge frame of every triangle.
inline SplitField split(const VertexField& h, const CurveGeometry<double>& geom) {
  const std::size_t n = geom.size();
  if (h.size() != n) throw SizeMismatch("vertex field size does not match the polygon");
  SplitField out{std::vector<double>(2 * n), std::vector<double>(2 * n)};
  for (std::size_t v = 0; v < n; ++v) {
    for (Side side : {Side::prev, Side::self}) {
      const std::size_t w = tri_edge(v, side, n);
      out.a[tri_index(v, side)] = dot(h[v], geom.normal[w]);
      out.b[tri_index(v, side)] = dot(h[v], geom.tangent[w]);
    }
  }
  return out;
}

/// a*n + b*tangent on each triangle; 2N vectors indexed by tri_index.
inline std::vector<Point> reconstruct(const SplitField& f, const CurveGeometry<double>& geom) {
  const std::size_t n = geom.size();
  std::vector<Point> out(2 * n);
  for (std::size_t v = 0; v < n; ++v) {
    for (Side side : {Side::prev, Side::self}) {
      const std::size_t w = tri_edge(v, side, n);
      const std::size_t i = tri_index(v, side);
      out[i] = f.a[i] * geom.normal[w] + f.b[i] * geom.tangent[w];
    }
  }
  return out;
}

/// Length-weighted average of the two incident edge normals, renormalized.
/// Throws ZeroVertexNormal at a cusp.
inline std::vector<Point> vertex_normals(const CurveGeometry<double>& geom) {
  const std::size_t n = geom.size();
  std::vector<Point> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t p = prev_index(v, n);
    const Point sum = geom.vol_edge[p] * geom.normal[p] + geom.vol_edge[v] * geom.normal[v];
    const double len = norm(sum);
    if (!(len >= geom.edge_eps) || len == 0.0) throw ZeroVertexNormal(v);
    out[v] = sum / len;
  }
  return out;
}

/// Unit tangents matching vertex_normals (the normal rotated back).
inline std::vector<Point> vertex_tangents(const CurveGeometry<double>& geom) {
  auto out = vertex_normals(geom);
  for (auto& p : out) p = Point{-p.y, p.x};
  return out;
}

/// Pointwise projection onto the vertex normal line.
inline VertexField horizontal_part(const VertexField& h, const CurveGeometry<double>& geom) {
  if (h.size() != geom.size()) throw SizeMismatch("vertex field size does not match the polygon");
  const auto normals = vertex_normals(geom);
  VertexField out(h.size());
  for (std::size_t v = 0; v < h.size(); ++v) out[v] = dot(h[v], normals[v]) * normals[v];
  return out;
}

/// h - horizontal_part(h).
inline VertexField vertical_part(const VertexField& h, const CurveGeometry<double>& geom) {
  VertexField out = horizontal_part(h, geom);
  for (std::size_t v = 0; v < h.size(); ++v) out[v] = h[v] - out[v];
  return out;
}

}  // namespace pgeo
