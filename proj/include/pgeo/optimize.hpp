#pragma once

/// \file optimize.hpp
///
/// Geodesic boundary value problem: minimize total_energy + w * penalty over
/// the interior slices of a path with fixed endpoint polygons, using
/// limited-memory BFGS with a strong Wolfe line search and an exact
/// reverse-mode gradient.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "autodiff.hpp"
#include "energy.hpp"

namespace pgeo {

/// Straight-line interpolation between two polygons with T steps. Endpoints
/// are copied verbatim.
inline Path initial_path(const Polygon& c0, const Polygon& c1, std::size_t T) {
  if (c0.size() != c1.size())
    throw SizeMismatch("endpoint polygons have different vertex counts (" + std::to_string(c0.size()) + " vs " +
                       std::to_string(c1.size()) + "); resample them to a common count first");
  if (T < 1) throw InvalidArgument("T must be at least 1");
  std::vector<Polygon> slices;
  slices.reserve(T + 1);
  slices.push_back(c0);
  for (std::size_t k = 1; k < T; ++k) {
    std::vector<Point> pts(c0.size());
    const double u = static_cast<double>(k) / static_cast<double>(T);
    // std::lerp is exact when both endpoints agree.
    for (std::size_t v = 0; v < c0.size(); ++v)
      pts[v] = {std::lerp(c0[v].x, c1[v].x, u), std::lerp(c0[v].y, c1[v].y, u)};
    slices.emplace_back(std::move(pts));
  }
  slices.push_back(c1);
  return Path(std::move(slices));
}

struct Alignment {
  std::size_t shift = 0;  ///< relabelled[v] = c1[(v + shift) % N], or c1[(shift - v) % N] if reversed
  bool reversed = false;
  double cost = 0.0;      ///< sum_v |c0[v] - relabelled[v]|^2
  Polygon polygon;
};

/// Cyclic relabelling (and optional reversal) of c1 closest to c0 in the sum
/// of squared vertex distances. Ties go to the smallest shift, forward first.
inline Alignment align(const Polygon& c0, const Polygon& c1) {
  const std::size_t n = c0.size();
  if (c1.size() != n) throw SizeMismatch("cannot align polygons with different vertex counts");
  auto label = [&](std::size_t shift, bool reversed, std::size_t v) {
    return reversed ? (shift + n - v) % n : (v + shift) % n;
  };
  Alignment best;
  best.cost = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    for (bool reversed : {false, true}) {
      double cost = 0.0;
      for (std::size_t v = 0; v < n; ++v) cost += squared_norm(c0[v] - c1[label(k, reversed, v)]);
      if (cost < best.cost) {
        best.cost = cost;
        best.shift = k;
        best.reversed = reversed;
      }
    }
  }
  std::vector<Point> pts(n);
  for (std::size_t v = 0; v < n; ++v) pts[v] = c1[label(best.shift, best.reversed, v)];
  best.polygon = Polygon(std::move(pts));
  return best;
}

/// Objective value with its gradient with respect to the interior vertices.
/// gradient[(t - 1) * N + v] is the derivative for vertex v of slice t.
struct ObjectiveGradient {
  EnergyBreakdown value;
  std::vector<Point> gradient;

  double max_norm() const {
    double m = 0.0;
    for (const auto& g : gradient) m = std::max({m, std::abs(g.x), std::abs(g.y)});
    return m;
  }
};

namespace detail {

inline std::vector<Vec2<ad::Var>> slice_vars(ad::Tape& tape, const Polygon& p, bool variable) {
  std::vector<Vec2<ad::Var>> out(p.size());
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (variable) {
      ad::Var x = tape.variable(p[v].x);
      ad::Var y = tape.variable(p[v].y);
      out[v] = {x, y};
    } else {
      out[v] = {ad::Var(p[v].x), ad::Var(p[v].y)};
    }
  }
  return out;
}

inline void collect(const std::vector<double>& adj, const std::vector<Vec2<ad::Var>>& vars, double scale,
                    std::vector<Point>& out) {
  out.resize(vars.size());
  for (std::size_t v = 0; v < vars.size(); ++v) {
    out[v].x = vars[v].x.idx >= 0 ? scale * adj[vars[v].x.idx] : 0.0;
    out[v].y = vars[v].y.idx >= 0 ? scale * adj[vars[v].y.idx] : 0.0;
  }
}

inline ad::Tape& thread_tape() {
  thread_local ad::Tape tape;
  tape.clear();
  return tape;
}

}  // namespace detail

/// Exact objective gradient by reverse-mode differentiation of the energy
/// evaluation. Each time step and each slice penalty is differentiated on
/// its own tape; contributions are summed in a fixed order, so results do not
/// depend on opts.workers.
inline ObjectiveGradient objective_and_gradient(const Path& path, const MetricCoefficients& coeff,
                                                const EnergyOptions& opts = {}) {
  const std::size_t T = path.steps(), N = path.vertices();
  const double steps = static_cast<double>(T);
  auto interior = [T](std::size_t t) { return t > 0 && t < T; };

  // Per step: gradient with respect to slice t and slice t+1.
  std::vector<std::vector<Point>> step_lo(T), step_hi(T);
  std::vector<double> step_value(T);
  parallel_for(T, opts.workers, [&](std::size_t t) {
    ad::Tape& tape = detail::thread_tape();
    ad::TapeScope scope(tape);
    const auto c0 = detail::slice_vars(tape, path[t], interior(t));
    const auto c1 = detail::slice_vars(tape, path[t + 1], interior(t + 1));
    const auto g0 = compute_geometry<ad::Var>(c0, opts.geometry);
    const auto g1 = compute_geometry<ad::Var>(c1, opts.geometry);
    const auto vel = step_velocity<ad::Var>(c0, c1, steps);
    const ad::Var e = step_energy<ad::Var>(coeff, vel, g0, g1);
    step_value[t] = e.val;
    const auto adj = tape.gradient(e);
    detail::collect(adj, c0, 1.0 / steps, step_lo[t]);
    detail::collect(adj, c1, 1.0 / steps, step_hi[t]);
  });

  std::vector<double> slice_pen(T + 1);
  std::vector<std::vector<Point>> pen_grad(T + 1);
  parallel_for(T + 1, opts.workers, [&](std::size_t t) {
    if (!interior(t)) {
      slice_pen[t] = slice_penalty(compute_geometry(path[t], opts.geometry));
      return;
    }
    ad::Tape& tape = detail::thread_tape();
    ad::TapeScope scope(tape);
    const auto c = detail::slice_vars(tape, path[t], true);
    const ad::Var p = slice_penalty(compute_geometry<ad::Var>(c, opts.geometry));
    slice_pen[t] = p.val;
    detail::collect(tape.gradient(p), c, opts.penalty_weight, pen_grad[t]);
  });

  ObjectiveGradient out;
  out.value.per_step = step_value;
  double sum = 0.0;
  for (double e : step_value) sum += e;
  out.value.total_energy = sum / steps;
  double pen = 0.0;
  for (double p : slice_pen) pen += p;
  out.value.penalty = pen;
  out.value.objective = out.value.total_energy + opts.penalty_weight * pen;

  out.gradient.assign((T > 0 ? T - 1 : 0) * N, Point{0.0, 0.0});
  for (std::size_t t = 0; t < T; ++t) {
    if (interior(t))
      for (std::size_t v = 0; v < N; ++v) out.gradient[(t - 1) * N + v] += step_lo[t][v];
    if (interior(t + 1))
      for (std::size_t v = 0; v < N; ++v) out.gradient[t * N + v] += step_hi[t][v];
  }
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t v = 0; v < N; ++v) out.gradient[(t - 1) * N + v] += pen_grad[t][v];
  return out;
}

inline std::vector<Point> gradient(const Path& path, const MetricCoefficients& coeff, const EnergyOptions& opts = {}) {
  return objective_and_gradient(path, coeff, opts).gradient;
}

struct SolverConfig {
  int max_iters = 2000;
  double grad_tol = 1e-5;   ///< stop when max |g| < grad_tol * (1 + |f|)
  double step_tol = 1e-10;  ///< stop when f decreased by less than this (relative) over `stall_window` iterations
  int stall_window = 5;
  int memory = 10;
  double penalty_weight = 1.0;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search = 40;
  int max_halvings = 30;  ///< step halvings allowed when a trial hits a degenerate edge
  unsigned workers = 1;
  GeometryOptions geometry{};

  void validate() const {
    if (max_iters < 0 || memory < 1 || stall_window < 1) throw InvalidArgument("invalid solver iteration settings");
    if (!(grad_tol > 0.0) || !(step_tol > 0.0) || !(penalty_weight >= 0.0))
      throw InvalidArgument("solver tolerances must be positive");
    if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0))
      throw InvalidArgument("line-search constants need 0 < c1 < c2 < 1");
  }

  EnergyOptions energy_options() const { return {geometry, penalty_weight, workers}; }
};

enum class Termination { converged, stalled, max_iterations, line_search_failure };

inline std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::stalled: return "stalled";
    case Termination::max_iterations: return "max_iterations";
    case Termination::line_search_failure: return "line_search_failure";
  }
  return "";
}

struct TraceRow {
  int iter = 0;
  double objective = 0.0;
  double energy = 0.0;
  double penalty = 0.0;
  double grad_norm = 0.0;  ///< max-norm
};

struct SolveReport {
  int iterations = 0;
  double objective = 0.0;
  double energy = 0.0;
  double penalty = 0.0;
  double grad_norm = 0.0;
  std::vector<TraceRow> trace;
  Termination termination = Termination::converged;
  int evaluations = 0;
};

struct SolveResult {
  Path path;
  SolveReport report;
};

namespace detail {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vector flatten(const std::vector<Point>& g) {
  Vector out(2 * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out[2 * i] = g[i].x;
    out[2 * i + 1] = g[i].y;
  }
  return out;
}

inline Vector interior_coordinates(const Path& path) {
  std::vector<Point> pts;
  for (std::size_t t = 1; t < path.steps(); ++t)
    pts.insert(pts.end(), path[t].vertices().begin(), path[t].vertices().end());
  return flatten(pts);
}

inline Path with_interior(const Path& base, const Vector& x) {
  std::vector<Polygon> slices = base.slices();
  const std::size_t N = base.vertices();
  for (std::size_t t = 1; t < base.steps(); ++t)
    for (std::size_t v = 0; v < N; ++v) {
      const std::size_t i = 2 * ((t - 1) * N + v);
      slices[t][v] = {x[i], x[i + 1]};
    }
  return Path(std::move(slices));
}

/// A point on the search line with its objective data.
struct Sample {
  double alpha = 0.0;
  double f = 0.0;
  double dphi = 0.0;
  Vector x;
  Vector g;
  EnergyBreakdown value;
};

/// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db),
/// safeguarded to the interior of the bracket.
inline double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double lo = std::min(a, b), hi = std::max(a, b);
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

}  // namespace detail

/// Minimizes the objective over the interior slices of `start`.
inline SolveResult solve_path(const Path& start, const MetricCoefficients& coeff, const SolverConfig& config = {}) {
  using detail::Sample;
  using detail::Vector;
  config.validate();
  coeff.validate();
  const EnergyOptions eopts = config.energy_options();

  SolveReport report;
  auto evaluate = [&](const Vector& x) -> std::optional<Sample> {
    ++report.evaluations;
    try {
      auto og = objective_and_gradient(detail::with_interior(start, x), coeff, eopts);
      Sample s;
      s.x = x;
      s.f = og.value.objective;
      s.g = detail::flatten(og.gradient);
      s.value = std::move(og.value);
      if (!std::isfinite(s.f)) return std::nullopt;
      return s;
    } catch (const DegenerateEdge&) {
      return std::nullopt;
    }
  };
  auto max_abs = [](const Vector& g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
  };

  // The starting path must be evaluable; a degenerate start is the caller's error.
  Sample cur;
  {
    auto og = objective_and_gradient(start, coeff, eopts);
    ++report.evaluations;
    cur.x = detail::interior_coordinates(start);
    cur.f = og.value.objective;
    cur.g = detail::flatten(og.gradient);
    cur.value = std::move(og.value);
  }
  auto record = [&](int iter) {
    report.trace.push_back({iter, cur.f, cur.value.total_energy, cur.value.penalty, max_abs(cur.g)});
  };
  record(0);

  std::deque<std::pair<Vector, Vector>> history;  // (s, y) pairs, oldest first
  const std::size_t dim = cur.x.size();

  // Strong Wolfe line search along d from cur. Returns nullopt on failure.
  auto line_search = [&](const Vector& d, double alpha0) -> std::optional<Sample> {
    const double f0 = cur.f;
    const double dphi0 = detail::dot(cur.g, d);
    auto at = [&](double alpha) -> std::optional<Sample> {
      Vector x(dim);
      for (std::size_t i = 0; i < dim; ++i) x[i] = cur.x[i] + alpha * d[i];
      auto s = evaluate(x);
      if (s) {
        s->alpha = alpha;
        s->dphi = detail::dot(s->g, d);
      }
      return s;
    };
    auto armijo = [&](const Sample& s) { return s.f <= f0 + config.wolfe_c1 * s.alpha * dphi0; };
    auto curvature = [&](const Sample& s) { return std::abs(s.dphi) <= -config.wolfe_c2 * dphi0; };

    Sample origin;
    origin.alpha = 0.0;
    origin.f = f0;
    origin.dphi = dphi0;
    int halvings = 0;

    // Refine inside [lo, hi] where lo satisfies Armijo with f(lo) < f(hi).
    auto zoom = [&](Sample lo, Sample hi) -> std::optional<Sample> {
      for (int k = 0; k < config.max_line_search; ++k) {
        const double alpha = detail::cubic_step(lo.alpha, lo.f, lo.dphi, hi.alpha, hi.f, hi.dphi);
        auto s = at(alpha);
        if (!s) {
          if (++halvings > config.max_halvings) break;
          hi.alpha = alpha;
          hi.f = std::numeric_limits<double>::infinity();
          hi.dphi = 0.0;
          continue;
        }
        if (!armijo(*s) || s->f >= lo.f) {
          hi = std::move(*s);
        } else {
          if (curvature(*s)) return s;
          if (s->dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
          lo = std::move(*s);
        }
        if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
      }
      if (lo.alpha > 0.0 && lo.f < f0) return lo;
      return std::nullopt;
    };

    Sample prev = origin;
    double alpha = alpha0;
    for (int k = 0; k < config.max_line_search; ++k) {
      auto s = at(alpha);
      if (!s) {
        // Trial left the feasible set: halve towards the last good point.
        if (++halvings > config.max_halvings) return std::nullopt;
        alpha = prev.alpha + 0.5 * (alpha - prev.alpha);
        continue;
      }
      if (!armijo(*s) || (prev.alpha > 0.0 && s->f >= prev.f)) return zoom(prev, std::move(*s));
      if (curvature(*s)) return s;
      if (s->dphi >= 0.0) return zoom(std::move(*s), prev);
      prev = std::move(*s);
      alpha *= 2.0;
    }
    if (prev.alpha > 0.0) return prev;
    return std::nullopt;
  };

  // Two-loop recursion: d = -H g.
  auto direction = [&]() {
    Vector q = cur.g;
    std::vector<double> rho(history.size()), alpha(history.size());
    for (std::size_t i = history.size(); i-- > 0;) {
      const auto& [s, y] = history[i];
      rho[i] = 1.0 / detail::dot(y, s);
      alpha[i] = rho[i] * detail::dot(s, q);
      for (std::size_t j = 0; j < dim; ++j) q[j] -= alpha[i] * y[j];
    }
    if (!history.empty()) {
      const auto& [s, y] = history.back();
      const double gamma = detail::dot(s, y) / detail::dot(y, y);
      for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
      const auto& [s, y] = history[i];
      const double beta = rho[i] * detail::dot(y, q);
      for (std::size_t j = 0; j < dim; ++j) q[j] += s[j] * (alpha[i] - beta);
    }
    for (double& v : q) v = -v;
    return q;
  };

  report.termination = Termination::max_iterations;
  int iter = 0;
  for (;; ++iter) {
    if (dim == 0 || max_abs(cur.g) < config.grad_tol * (1.0 + std::abs(cur.f))) {
      report.termination = Termination::converged;
      break;
    }
    if (iter >= config.max_iters) break;
    const std::size_t k = report.trace.size() - 1;
    if (k >= static_cast<std::size_t>(config.stall_window)) {
      const double old = report.trace[k - config.stall_window].objective;
      if (old - cur.f <= config.step_tol * std::max(std::abs(cur.f), 1e-300)) {
        report.termination = Termination::stalled;
        break;
      }
    }

    std::optional<Sample> next;
    for (int attempt = 0; attempt < 2 && !next; ++attempt) {
      Vector d = direction();
      double alpha0 = 1.0;
      if (history.empty() || detail::dot(d, cur.g) >= 0.0) {
        history.clear();
        d = cur.g;
        for (double& v : d) v = -v;
        alpha0 = std::min(1.0, 1.0 / max_abs(cur.g));
      }
      next = line_search(d, alpha0);
      if (!next) {
        if (history.empty()) break;
        history.clear();
      }
    }
    if (!next) {
      report.termination = Termination::line_search_failure;
      break;
    }

    Vector s(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = next->x[i] - cur.x[i];
      y[i] = next->g[i] - cur.g[i];
    }
    if (detail::dot(s, y) > 1e-12 * std::sqrt(detail::dot(s, s) * detail::dot(y, y))) {
      history.emplace_back(std::move(s), std::move(y));
      if (history.size() > static_cast<std::size_t>(config.memory)) history.pop_front();
    }
    cur = std::move(*next);
    record(iter + 1);
  }

  report.iterations = iter;
  report.objective = cur.f;
  report.energy = cur.value.total_energy;
  report.penalty = cur.value.penalty;
  report.grad_norm = max_abs(cur.g);
  return {detail::with_interior(start, cur.x), std::move(report)};
}

/// Optimizes from the straight-line path between c0 and c1.
inline SolveResult solve(const Polygon& c0, const Polygon& c1, std::size_t T, const MetricCoefficients& coeff,
                         const SolverConfig& config = {}) {
  return solve_path(initial_path(c0, c1, T), coeff, config);
}

}  // namespace pgeo
