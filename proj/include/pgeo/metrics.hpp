#pragma once

/// \file metrics.hpp
///
/// The curvature-weighted family of reparametrization-invariant metrics
///
///   G_c(an, an) = int (A0 + A1 k^2 + A2 k^4 + A3 (D_s k)^2) a^2
///                     + (B0 + B1 k^2) (D_s a)^2 + C0 (D_s^2 a)^2 ds,
///
/// its named presets, and the Sobolev H^1/H^2 metrics it is compared with.
/// Every discrete integral is a sum over the 2N triangles of a polygon with
/// weight vol_tri / 4 (vol_tri sums to four times the length).

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curvegeom.hpp"
#include "splitting.hpp"

namespace pgeo {

struct MetricCoefficients {
  double A0 = 1.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double A3 = 0.0;
  double B0 = 0.0;
  double B1 = 0.0;
  double C0 = 0.0;

  /// Highest arc-length derivative of a that carries weight.
  int order() const {
    if (C0 != 0.0) return 2;
    if (B0 != 0.0 || B1 != 0.0) return 1;
    return 0;
  }

  void validate() const {
    for (double c : {A0, A1, A2, A3, B0, B1, C0})
      if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidArgument("metric coefficients must be finite and nonnegative");
    if (!(A0 > 0.0)) throw InvalidArgument("metric coefficient A0 must be positive");
  }

  MetricCoefficients scaled(double k) const { return {k * A0, k * A1, k * A2, k * A3, k * B0, k * B1, k * C0}; }

  friend bool operator==(const MetricCoefficients&, const MetricCoefficients&) = default;
};

enum class Preset { metric1, metric2, metric3, metric4, h1, h2 };

inline constexpr std::array<Preset, 4> kFamilyPresets{Preset::metric1, Preset::metric2, Preset::metric3,
                                                      Preset::metric4};

inline std::string_view preset_name(Preset p) {
  switch (p) {
    case Preset::metric1: return "metric1";
    case Preset::metric2: return "metric2";
    case Preset::metric3: return "metric3";
    case Preset::metric4: return "metric4";
    case Preset::h1: return "h1";
    case Preset::h2: return "h2";
  }
  return "";
}

inline std::optional<Preset> preset_from_name(std::string_view name) {
  for (Preset p : {Preset::metric1, Preset::metric2, Preset::metric3, Preset::metric4, Preset::h1, Preset::h2})
    if (preset_name(p) == name) return p;
  return std::nullopt;
}

/// Coefficients of a family member; nullopt for the Sobolev presets.
inline std::optional<MetricCoefficients> preset_coefficients(Preset p) {
  switch (p) {
    case Preset::metric1: return MetricCoefficients{1, 2, 0, 0, 0, 0, 0};
    case Preset::metric2: return MetricCoefficients{1, 2, 0, 0, 2, 0, 0};
    case Preset::metric3: return MetricCoefficients{1, 2, 4, 4, 0, 0, 0};
    case Preset::metric4: return MetricCoefficients{1, 2, 4, 4, 2, 16, 4};
    default: return std::nullopt;
  }
}

/// Sobolev order of h1/h2; nullopt for family members.
inline std::optional<int> preset_sobolev_order(Preset p) {
  if (p == Preset::h1) return 1;
  if (p == Preset::h2) return 2;
  return std::nullopt;
}

/// Normal and tangential blocks of a metric acting on h = a n + b v.
struct SplitMetric {
  MetricCoefficients normal;
  MetricCoefficients tangential;

  static SplitMetric symmetric(const MetricCoefficients& c) { return {c, c}; }
};

/// A scalar coefficient and its first two arc-length derivatives on each
/// triangle, indexed by tri_index.
template <typename S>
struct TriangleJet {
  std::vector<S> a;
  std::vector<S> a_s;
  std::vector<S> a_ss;
};

/// Coefficient a = <h[v], frame[w]> on every triangle together with the
/// product-rule difference D_s a and the second difference D_s^2 a.
///
/// `frame` holds one unit vector per edge (the edge normals for a, the edge
/// tangents for b, a constant axis for Cartesian components). Derivatives
/// above `order` are left empty.
template <typename S>
TriangleJet<S> triangle_jet(std::span<const Vec2<S>> h, std::span<const Vec2<S>> frame, const CurveGeometry<S>& g,
                            int order = 2) {
  const std::size_t n = g.size();
  if (h.size() != n || frame.size() != n) throw SizeMismatch("field size does not match the polygon");
  TriangleJet<S> j;
  j.a.resize(2 * n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t p = prev_index(v, n);
    j.a[tri_index(v, Side::prev)] = h[v].x * frame[p].x + h[v].y * frame[p].y;
    j.a[tri_index(v, Side::self)] = h[v].x * frame[v].x + h[v].y * frame[v].y;
  }
  if (order < 1) return j;

  j.a_s.resize(2 * n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t p = prev_index(v, n);
    const std::size_t q = next_index(v, n);
    // w = v
    j.a_s[tri_index(v, Side::self)] =
        ((h[v].x * (frame[v].x - frame[p].x) + h[v].y * (frame[v].y - frame[p].y)) +
         ((h[q].x - h[v].x) * frame[v].x + (h[q].y - h[v].y) * frame[v].y)) /
        g.vol_tri[tri_index(v, Side::self)];
    // w = v-1
    j.a_s[tri_index(v, Side::prev)] =
        ((h[v].x * (frame[v].x - frame[p].x) + h[v].y * (frame[v].y - frame[p].y)) +
         ((h[v].x - h[p].x) * frame[p].x + (h[v].y - h[p].y) * frame[p].y)) /
        g.vol_tri[tri_index(v, Side::prev)];
  }
  if (order < 2) return j;

  j.a_ss.resize(2 * n);
  const auto& a = j.a;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t p = prev_index(v, n);
    const std::size_t q = next_index(v, n);
    const S& a_self = a[tri_index(v, Side::self)];
    const S& a_prev = a[tri_index(v, Side::prev)];
    // w = v: neighbours across edge v and across vertex v
    j.a_ss[tri_index(v, Side::self)] =
        ((a[tri_index(q, Side::prev)] - a_self) / g.vol_edge[v] - (a_self - a_prev) / g.vol_vert[v]) /
        (g.vol_edge[v] + g.vol_vert[v]);
    // w = v-1: neighbours across vertex v and across edge v-1
    j.a_ss[tri_index(v, Side::prev)] =
        ((a_self - a_prev) / g.vol_vert[v] - (a_prev - a[tri_index(p, Side::self)]) / g.vol_edge[p]) /
        g.vol_tri[tri_index(v, Side::prev)];
  }
  return j;
}

/// Adds the unnormalized triangle sum
///   sum_(v,w) [(A0 + A1 k_v^2 + A2 k_v^4 + A3 (k_s)_w^2) a^2 + (B0 + B1 k_v^2) a_s^2 + C0 a_ss^2] vol_tri
/// to `acc`, in ascending (v, w) order. Terms whose coefficients vanish are
/// skipped, which leaves the sum bitwise unchanged.
template <typename S>
void accumulate_family_terms(const MetricCoefficients& c, const TriangleJet<S>& j, const CurveGeometry<S>& g,
                             S& acc) {
  const std::size_t n = g.size();
  const int order = c.order();
  for (std::size_t v = 0; v < n; ++v) {
    const S k2 = g.kappa[v] * g.kappa[v];
    for (Side side : {Side::prev, Side::self}) {
      const std::size_t i = tri_index(v, side);
      const std::size_t w = tri_edge(v, side, n);
      const S ks2 = g.kappa_s[w] * g.kappa_s[w];
      S term = (c.A0 + c.A1 * k2 + c.A2 * (k2 * k2) + c.A3 * ks2) * (j.a[i] * j.a[i]);
      if (order >= 1) term = term + (c.B0 + c.B1 * k2) * (j.a_s[i] * j.a_s[i]);
      if (order >= 2) term = term + c.C0 * (j.a_ss[i] * j.a_ss[i]);
      acc = acc + term * g.vol_tri[i];
    }
  }
}

/// G_c(an, an) for a normal coefficient jet.
inline double evaluate_normal_quadratic(const MetricCoefficients& c, const TriangleJet<double>& jet,
                                        const CurveGeometry<double>& geom) {
  double acc = 0.0;
  accumulate_family_terms(c, jet, geom, acc);
  return acc / 4.0;
}

/// Normal-coefficient jet of a vertex field.
inline TriangleJet<double> normal_jet(const VertexField& h, const CurveGeometry<double>& geom, int order = 2) {
  return triangle_jet<double>(h, geom.normal, geom, order);
}

/// Tangential-coefficient jet of a vertex field.
inline TriangleJet<double> tangential_jet(const VertexField& h, const CurveGeometry<double>& geom, int order = 2) {
  return triangle_jet<double>(h, geom.tangent, geom, order);
}

/// G(h, h) with the triangle split: a and b are read off against each
/// triangle's edge frame and fed to the normal and tangential blocks.
inline double evaluate_split(const SplitMetric& m, const VertexField& h, const CurveGeometry<double>& geom) {
  return evaluate_normal_quadratic(m.normal, normal_jet(h, geom), geom) +
         evaluate_normal_quadratic(m.tangential, tangential_jet(h, geom), geom);
}

/// G(h, h) with the vertex split: h is first separated into its vertex-normal
/// and vertex-tangential parts, and each part only enters its own block.
inline double evaluate_vertex_split(const SplitMetric& m, const VertexField& h, const CurveGeometry<double>& geom) {
  const VertexField hn = horizontal_part(h, geom);
  VertexField ht(h.size());
  for (std::size_t v = 0; v < h.size(); ++v) ht[v] = h[v] - hn[v];
  return evaluate_normal_quadratic(m.normal, normal_jet(hn, geom), geom) +
         evaluate_normal_quadratic(m.tangential, tangential_jet(ht, geom), geom);
}

/// Discrete Sobolev metric sum_(i<=l) int |D_s^i h|^2 ds, using the same
/// triangle stencils as the family with a constant frame, one per Cartesian
/// component.
inline double evaluate_sobolev(int order, const VertexField& h, const CurveGeometry<double>& geom) {
  if (order < 1 || order > 2) throw InvalidArgument("Sobolev order must be 1 or 2");
  const std::size_t n = geom.size();
  if (h.size() != n) throw SizeMismatch("vertex field size does not match the polygon");
  const std::vector<Point> ex(n, Point{1.0, 0.0});
  const std::vector<Point> ey(n, Point{0.0, 1.0});
  const auto jx = triangle_jet<double>(h, ex, geom, order);
  const auto jy = triangle_jet<double>(h, ey, geom, order);
  double acc = 0.0;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    double term = (jx.a[i] * jx.a[i] + jy.a[i] * jy.a[i]) + (jx.a_s[i] * jx.a_s[i] + jy.a_s[i] * jy.a_s[i]);
    if (order == 2) term += jx.a_ss[i] * jx.a_ss[i] + jy.a_ss[i] * jy.a_ss[i];
    acc += term * geom.vol_tri[i];
  }
  return acc / 4.0;
}

/// G(h, h) for any preset. Family members act on both blocks with equal
/// coefficients.
inline double evaluate_preset(Preset p, const VertexField& h, const CurveGeometry<double>& geom) {
  if (auto order = preset_sobolev_order(p)) return evaluate_sobolev(*order, h, geom);
  return evaluate_split(SplitMetric::symmetric(*preset_coefficients(p)), h, geom);
}

/// G(h1, h2) by polarization of the vertex-split quadratic form.
inline double polarized_cross_term(const SplitMetric& m, const VertexField& h1, const VertexField& h2,
                                   const CurveGeometry<double>& geom) {
  VertexField plus(h1.size()), minus(h1.size());
  for (std::size_t v = 0; v < h1.size(); ++v) {
    plus[v] = h1[v] + h2[v];
    minus[v] = h1[v] - h2[v];
  }
  return (evaluate_vertex_split(m, plus, geom) - evaluate_vertex_split(m, minus, geom)) / 4.0;
}

struct BlockOrthogonality {
  double max_cross = 0.0;     ///< max |G(a n, b v)|
  double max_relative = 0.0;  ///< max |G(a n, b v)| / (G(a n, a n) + G(b v, b v))
};

/// Cross terms G(a n, b v) for random vertex coefficient fields a, b built on
/// the vertex frame.
inline BlockOrthogonality check_block_orthogonality(const SplitMetric& m, const CurveGeometry<double>& geom,
                                                    int trials, std::uint64_t seed = 1) {
  if (trials < 1) throw InvalidArgument("trials must be positive");
  const std::size_t n = geom.size();
  const auto nv = vertex_normals(geom);
  const auto tv = vertex_tangents(geom);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  BlockOrthogonality out;
  for (int k = 0; k < trials; ++k) {
    VertexField h1(n), h2(n);
    for (std::size_t v = 0; v < n; ++v) {
      h1[v] = coef(rng) * nv[v];
      h2[v] = coef(rng) * tv[v];
    }
    const double cross_term = std::abs(polarized_cross_term(m, h1, h2, geom));
    const double scale = evaluate_vertex_split(m, h1, geom) + evaluate_vertex_split(m, h2, geom);
    out.max_cross = std::max(out.max_cross, cross_term);
    if (scale > 0.0) out.max_relative = std::max(out.max_relative, cross_term / scale);
  }
  return out;
}

/// G_strong(h, h) - G_weak(h, h). Supported pairs: (metric2, h1) and
/// (metric4, h2).
inline double check_domination(Preset strong, Preset weak, const CurveGeometry<double>& geom, const VertexField& h) {
  const bool ok = (strong == Preset::metric2 && weak == Preset::h1) || (strong == Preset::metric4 && weak == Preset::h2);
  if (!ok) throw InvalidArgument("domination is only asserted for (metric2, h1) and (metric4, h2)");
  return evaluate_preset(strong, h, geom) - evaluate_preset(weak, h, geom);
}

}  // namespace pgeo
