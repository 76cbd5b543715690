#pragma once

/// \file energy.hpp
///
/// Discrete horizontal path energy of a path of polygons with fixed
/// endpoints, plus the constant-speed penalty that pins the parametrization.
///
/// With velocity c_t[t] = T (c[t+1] - c[t]) the energy of time step t is
///
///   energy[t] = (sum over s in {t, t+1}, triangles (v, w) of
///                 [(A0 + A1 k^2 + A2 k^4 + A3 k_s^2) a^2
///                  + (B0 + B1 k^2) a_s^2 + C0 a_ss^2] vol_tri) / 8,
///
/// where geometry (k, n, vol_*) is taken from slice s. The total energy is
/// the mean of energy[t]; the objective adds penalty_weight times the sum of
/// squared deviations of edge lengths from length / N.

#include <cstddef>
#include <span>
#include <vector>

#include "curvegeom.hpp"
#include "metrics.hpp"
#include "parallel.hpp"

namespace pgeo {

/// T+1 polygons sharing a vertex count. Slices 0 and T are boundary data.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Polygon> slices) : slices_(std::move(slices)) {
    if (slices_.size() < 2) throw InvalidArgument("a path needs at least two slices (T >= 1)");
    for (const auto& s : slices_)
      if (s.size() != slices_.front().size()) throw SizeMismatch("all slices of a path must share the vertex count");
  }

  std::size_t steps() const { return slices_.size() - 1; }       ///< T
  std::size_t vertices() const { return slices_.front().size(); }  ///< N
  const Polygon& operator[](std::size_t t) const { return slices_[t]; }
  Polygon& operator[](std::size_t t) { return slices_[t]; }
  const std::vector<Polygon>& slices() const { return slices_; }

  Path reversed() const { return Path(std::vector<Polygon>(slices_.rbegin(), slices_.rend())); }

 private:
  std::vector<Polygon> slices_;
};

struct EnergyOptions {
  GeometryOptions geometry{};
  double penalty_weight = 1.0;
  unsigned workers = 1;
};

struct EnergyBreakdown {
  std::vector<double> per_step;  ///< energy[t], t = 0..T-1
  double total_energy = 0.0;     ///< mean of per_step
  double penalty = 0.0;
  double objective = 0.0;        ///< total_energy + penalty_weight * penalty
};

/// Scalar quantity on every (t, s, triangle): 4 T N entries.
struct TriangleField {
  std::size_t T = 0;
  std::size_t N = 0;
  std::vector<double> values;

  /// s is 0 for geometry of slice t, 1 for slice t+1.
  static std::size_t index(std::size_t t, std::size_t s, std::size_t tri, std::size_t n) {
    return (t * 2 + s) * 2 * n + tri;
  }
  double operator()(std::size_t t, std::size_t s, std::size_t v, Side side) const {
    return values[index(t, s, tri_index(v, side), N)];
  }
};

/// T (next - cur) per vertex.
template <typename S>
std::vector<Vec2<S>> step_velocity(std::span<const Vec2<S>> cur, std::span<const Vec2<S>> next, double steps) {
  std::vector<Vec2<S>> out(cur.size());
  for (std::size_t v = 0; v < cur.size(); ++v)
    out[v] = {steps * (next[v].x - cur[v].x), steps * (next[v].y - cur[v].y)};
  return out;
}

/// energy[t] from the velocity of step t and the geometry of its two slices.
template <typename S>
S step_energy(const MetricCoefficients& c, std::span<const Vec2<S>> velocity, const CurveGeometry<S>& g0,
              const CurveGeometry<S>& g1) {
  S acc = 0.0;
  for (const CurveGeometry<S>* g : {&g0, &g1}) {
    const auto jet = triangle_jet<S>(velocity, g->normal, *g, c.order());
    accumulate_family_terms(c, jet, *g, acc);
  }
  return acc / 8.0;
}

/// sum_v (vol_edge[v] - length / N)^2 for one slice.
template <typename S>
S slice_penalty(const CurveGeometry<S>& g) {
  const double n = static_cast<double>(g.size());
  const S mean = g.length / n;
  S acc = 0.0;
  for (const auto& e : g.vol_edge) {
    const S d = e - mean;
    acc = acc + d * d;
  }
  return acc;
}

inline std::vector<CurveGeometry<double>> path_geometry(const Path& path, const GeometryOptions& opts = {}) {
  std::vector<CurveGeometry<double>> out;
  out.reserve(path.slices().size());
  for (const auto& s : path.slices()) out.push_back(compute_geometry(s, opts));
  return out;
}

/// c_t[t][v] for t = 0..T-1.
inline std::vector<VertexField> velocity(const Path& path) {
  const double steps = static_cast<double>(path.steps());
  std::vector<VertexField> out;
  out.reserve(path.steps());
  for (std::size_t t = 0; t < path.steps(); ++t)
    out.push_back(step_velocity<double>(path[t].span(), path[t + 1].span(), steps));
  return out;
}

namespace detail {
inline TriangleField triangle_field(const Path& path, const std::vector<CurveGeometry<double>>& geoms, int which) {
  const std::size_t T = path.steps(), N = path.vertices();
  TriangleField f{T, N, std::vector<double>(4 * T * N)};
  const auto vel = velocity(path);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t s = 0; s < 2; ++s) {
      const auto& g = geoms[t + s];
      const auto jet = triangle_jet<double>(vel[t], g.normal, g, which);
      const auto& src = which == 0 ? jet.a : which == 1 ? jet.a_s : jet.a_ss;
      std::copy(src.begin(), src.end(), f.values.begin() + TriangleField::index(t, s, 0, N));
    }
  }
  return f;
}
}  // namespace detail

/// a[t, s, v, w] = <c_t[t][v], n_s[w]>.
inline TriangleField field_a(const Path& path, const std::vector<CurveGeometry<double>>& geoms) {
  return detail::triangle_field(path, geoms, 0);
}

/// Product-rule arc-length derivative of a on every triangle.
inline TriangleField field_a_s(const Path& path, const std::vector<CurveGeometry<double>>& geoms) {
  return detail::triangle_field(path, geoms, 1);
}

/// Second arc-length difference of a on every triangle.
inline TriangleField field_a_ss(const Path& path, const std::vector<CurveGeometry<double>>& geoms) {
  return detail::triangle_field(path, geoms, 2);
}

inline double penalty(const std::vector<CurveGeometry<double>>& geoms) {
  double acc = 0.0;
  for (const auto& g : geoms) acc += slice_penalty(g);
  return acc;
}

/// Energy, penalty and objective of a path. Steps are evaluated
/// independently and reduced in ascending order, so the result is the same
/// for any worker count.
inline EnergyBreakdown evaluate_path(const Path& path, const MetricCoefficients& coeff, const EnergyOptions& opts = {}) {
  const std::size_t T = path.steps();
  std::vector<CurveGeometry<double>> geoms(T + 1);
  parallel_for(T + 1, opts.workers, [&](std::size_t t) { geoms[t] = compute_geometry(path[t], opts.geometry); });

  EnergyBreakdown out;
  out.per_step.resize(T);
  const double steps = static_cast<double>(T);
  parallel_for(T, opts.workers, [&](std::size_t t) {
    const auto vel = step_velocity<double>(path[t].span(), path[t + 1].span(), steps);
    out.per_step[t] = step_energy<double>(coeff, vel, geoms[t], geoms[t + 1]);
  });

  double sum = 0.0;
  for (double e : out.per_step) sum += e;
  out.total_energy = sum / steps;
  out.penalty = penalty(geoms);
  out.objective = out.total_energy + opts.penalty_weight * out.penalty;
  return out;
}

inline double total_energy(const Path& path, const MetricCoefficients& coeff, const EnergyOptions& opts = {}) {
  return evaluate_path(path, coeff, opts).total_energy;
}

}  // namespace pgeo
