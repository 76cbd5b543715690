// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. argv[1] is the directory for emitted SVG files.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "test_support.hpp"

using namespace pgeo;
using pgeo::testing::rel_diff;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome r{false, ""};
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = r.pass;
  if (time_limit > 0.0 && secs >= time_limit) {
    pass = false;
    r.detail += "; exceeded time limit";
  }
  char timing[64];
  if (time_limit > 0.0)
    std::snprintf(timing, sizeof timing, "%.2fs, limit %.0fs", secs, time_limit);
  else
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
  std::printf("%s %d %s: %s (%s)\n", pass ? "PASS" : "FAIL", id, name, r.detail.c_str(), timing);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const MetricCoefficients& coeffs(Preset p) {
  static const MetricCoefficients table[] = {*preset_coefficients(Preset::metric1), *preset_coefficients(Preset::metric2),
                                             *preset_coefficients(Preset::metric3), *preset_coefficients(Preset::metric4)};
  return table[static_cast<int>(p)];
}

Outcome block_orthogonality() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  int triples = 0;
  for (Preset p : kFamilyPresets) {
    const auto m = SplitMetric::symmetric(coeffs(p));
    for (int poly = 0; poly < 100; ++poly) {
      const auto g = compute_geometry(pgeo::testing::random_polygon(rng, 5 + poly % 40));
      const auto r = check_block_orthogonality(m, g, 10, rng());
      worst = std::max(worst, r.max_relative);
      triples += 10;
    }
  }
  return {worst < 1e-12, fmt("%.0f triples, max relative cross term %.3g", triples, worst)};
}

Outcome domination() {
  std::mt19937_64 rng(2025);
  double worst1 = 1e300, worst2 = 1e300;
  int pairs = 0;
  while (pairs < 1000) {
    const auto p = pgeo::testing::random_smooth_polygon(rng, 5 + pairs % 60);
    const auto g = compute_geometry(p);
    double kmax = 0.0;
    for (double k : g.kappa) kmax = std::max(kmax, k);
    if (kmax > 10.0) continue;
    const auto h = pgeo::testing::random_field(rng, p.size());
    const double s2 = evaluate_preset(Preset::metric2, h, g), s4 = evaluate_preset(Preset::metric4, h, g);
    worst1 = std::min(worst1, check_domination(Preset::metric2, Preset::h1, g, h) / s2);
    worst2 = std::min(worst2, check_domination(Preset::metric4, Preset::h2, g, h) / s4);
    ++pairs;
  }
  return {worst1 >= -1e-8 && worst2 >= -1e-8,
          fmt("%.0f pairs, min (metric2-H1)/metric2 = %.4g, min (metric4-H2)/metric4 = %.4g", pairs, worst1, worst2)};
}

bool near_clamp(const Polygon& c) {
  const auto g = compute_geometry(c);
  for (std::size_t v = 0; v < c.size(); ++v) {
    const double d = dot(g.tangent[prev_index(v, c.size())], g.tangent[v]);
    if (std::abs(d) > 1.0 - 1e-8) return true;
  }
  return false;
}

Outcome gradient_check() {
  std::mt19937_64 rng(2026);
  double worst = 0.0;
  int excluded = 0;
  for (int inst = 0; inst < 20; ++inst) {
    const auto path = pgeo::testing::random_path(rng, 12, 3);
    const auto& c = coeffs(kFamilyPresets[inst % 4]);
    const auto g = gradient(path, c);
    double scale = 0.0;
    for (const auto& q : g) scale = std::max({scale, std::abs(q.x), std::abs(q.y)});
    for (std::size_t t = 1; t < 3; ++t)
      for (std::size_t v = 0; v < 12; ++v)
        for (int i = 0; i < 2; ++i) {
          const double x = i == 0 ? path[t][v].x : path[t][v].y;
          const double h = 1e-6 * (1.0 + std::abs(x));
          auto shifted = [&](double delta) {
            std::vector<Point> pts = path[t].vertices();
            (i == 0 ? pts[v].x : pts[v].y) += delta;
            return Polygon(pts);
          };
          if (near_clamp(shifted(h)) || near_clamp(shifted(-h))) {
            ++excluded;
            continue;
          }
          auto f = [&](double delta) {
            Path p = path;
            p[t] = shifted(delta);
            return evaluate_path(p, c).objective;
          };
          const double fd = (f(h) - f(-h)) / (2.0 * h);
          const double an = i == 0 ? g[(t - 1) * 12 + v].x : g[(t - 1) * 12 + v].y;
          // Components far below the gradient's scale are compared against 1e-3 of that scale.
          worst = std::max(worst, std::abs(fd - an) / std::max(std::abs(an), 1e-3 * scale));
        }
  }
  return {worst < 1e-5, fmt("20 instances (N=12, T=3), max relative error %.3g, %.0f coordinates excluded", worst, excluded)};
}

Outcome oracle_fixtures() {
  const auto fixtures = pgeo::testing::load_fixtures(PGEO_FIXTURE_DIR);
  double worst = 0.0;
  std::size_t checked = 0;
  for (const auto& f : fixtures) {
    if (f.path.vertices() > 8 || f.path.steps() > 3) continue;
    ++checked;
    const auto geoms = path_geometry(f.path);
    const auto a = field_a(f.path, geoms), as = field_a_s(f.path, geoms), ass = field_a_ss(f.path, geoms);
    for (Preset p : kFamilyPresets) {
      const auto& c = coeffs(p);
      const auto e = evaluate_path(f.path, c);
      const auto ref = oracle::evaluate(pgeo::testing::to_oracle(f.path, c));
      const auto& frozen = f.expected[std::string(preset_name(p))];
      worst = std::max({worst, rel_diff(e.total_energy, ref.total_energy), rel_diff(e.penalty, ref.penalty),
                        rel_diff(e.total_energy, frozen["total_energy"].get<double>()),
                        rel_diff(e.penalty, frozen["penalty"].get<double>())});
      for (std::size_t t = 0; t < f.path.steps(); ++t)
        worst = std::max({worst, rel_diff(e.per_step[t], ref.energy[t + 1]),
                          rel_diff(e.per_step[t], frozen["per_step"][t].get<double>())});
    }
    const auto ref = oracle::evaluate(pgeo::testing::to_oracle(f.path, coeffs(Preset::metric4)));
    for (std::size_t t = 0; t < f.path.steps(); ++t)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t v = 0; v < f.path.vertices(); ++v)
          for (Side side : {Side::prev, Side::self}) {
            const int slot = side == Side::prev ? 0 : 1;
            worst = std::max({worst, rel_diff(a(t, s, v, side), ref.a[t + 1][s][v + 1][slot]),
                              rel_diff(as(t, s, v, side), ref.a_s[t + 1][s][v + 1][slot]),
                              rel_diff(ass(t, s, v, side), ref.a_ss[t + 1][s][v + 1][slot])});
          }
  }
  return {checked > 0 && worst <= 1e-12, fmt("%.0f fixtures, max relative difference %.3g", checked, worst)};
}

Outcome continuum() {
  constexpr double kPinned = 9.42529487656861;  // exact discrete value from the independent evaluator
  const auto c0 = shapes::circle(1.0, 100);
  const auto path = initial_path(c0, shapes::circle(1.0, 100, {1.0, 0.0}), 10);
  const double e = total_energy(path, coeffs(Preset::metric1));
  const double target = 3.0 * std::numbers::pi;
  const double rel = std::abs(e - target) / target;
  const double pin = rel_diff(e, kPinned);
  return {rel < 0.02 && pin < 1e-12,
          fmt("energy %.17g vs 3 pi %.6f (rel %.3g)", e, target, rel) + fmt(", pinned value rel diff %.3g", pin)};
}

struct TranslationRun {
  SolveResult result;
  double linear = 0.0;
};

const TranslationRun& translation() {
  static const TranslationRun run = [] {
    const auto c0 = shapes::circle(1.0, 40), c1 = shapes::circle(1.0, 40, {3.0, 0.0});
    TranslationRun r;
    r.linear = evaluate_path(initial_path(c0, c1, 10), coeffs(Preset::metric1)).objective;
    r.result = solve(c0, c1, 10, coeffs(Preset::metric1));
    return r;
  }();
  return run;
}

Outcome bvp() {
  const auto& run = translation();
  const auto& rep = run.result.report;
  bool monotone = true;
  for (std::size_t i = 1; i < rep.trace.size(); ++i) monotone = monotone && rep.trace[i].objective <= rep.trace[i - 1].objective;
  const bool converged = rep.termination == Termination::converged && rep.iterations <= 2000;
  return {converged && rep.objective < run.linear && monotone,
          std::string(termination_name(rep.termination)) + fmt(" after %.0f iterations, objective %.10g < linear %.10g", rep.iterations, rep.objective, run.linear) +
              (monotone ? ", trace non-increasing" : ", trace NOT monotone")};
}

Outcome equivariance() {
  const auto c0 = shapes::circle(1.0, 40), c1 = shapes::circle(1.0, 40, {3.0, 0.0});
  const double angle = 0.7;
  const Point shift{-2.5, 4.0};
  const auto m0 = shapes::rigid_motion(c0, angle, shift), m1 = shapes::rigid_motion(c1, angle, shift);

  // Default tolerances, reported for information.
  const double at_default = rel_diff(solve(m0, m1, 10, coeffs(Preset::metric1)).report.energy, translation().result.report.energy);

  // The energy is first-order accurate in the distance to the minimizer, so
  // the comparison runs both solves to the floating-point floor.
  SolverConfig tight;
  tight.grad_tol = 1e-10;
  tight.step_tol = 1e-16;
  tight.memory = 30;
  tight.max_iters = 20000;
  const auto base = solve(c0, c1, 10, coeffs(Preset::metric1), tight);
  const auto moved = solve(m0, m1, 10, coeffs(Preset::metric1), tight);
  const double rel = rel_diff(moved.report.energy, base.report.energy);
  return {rel < 1e-8,
          fmt("energy rel diff %.3g at tight tolerance (max|g| %.2g, %.2g)", rel, base.report.grad_norm, moved.report.grad_norm) +
              fmt("; %.3g at default tolerance", at_default)};
}

Outcome curvature_order() {
  const std::size_t ns[] = {25, 50, 100, 200};
  double err[4];
  for (int i = 0; i < 4; ++i) {
    const auto g = compute_geometry(shapes::circle(1.0, ns[i]));
    err[i] = 0.0;
    for (double k : g.kappa) err[i] = std::max(err[i], std::abs(k - 1.0));
  }
  double min_order = 1e300;
  for (int i = 0; i < 3; ++i) min_order = std::min(min_order, std::log(err[i] / err[i + 1]) / std::log(2.0));
  return {min_order >= 2.0, fmt("errors %.3g .. %.3g, min observed order %.4f", err[0], err[3], min_order)};
}

Outcome figure_reproduction(const std::filesystem::path& outdir) {
  std::filesystem::create_directories(outdir);
  const auto c0 = shapes::circle(1.0, 100), c1 = shapes::star(5, 0.5, 1.0, 100);
  std::string detail;
  bool ok = true;
  for (Preset p : {Preset::metric2, Preset::metric4}) {
    std::string svg[2];
    SolveReport rep;
    for (int k = 0; k < 2; ++k) {
      try {
        const auto r = solve(c0, c1, 20, coeffs(p));
        svg[k] = io::filmstrip_svg(r.path);
        rep = r.report;
      } catch (const DegenerateEdge& e) {
        return {false, std::string(preset_name(p)) + ": " + e.what()};
      }
    }
    const auto file = outdir / ("circle_to_star_" + std::string(preset_name(p)) + ".svg");
    io::write_text(file.string(), svg[0]);
    const bool same = svg[0] == svg[1] && io::read_text(file.string()) == svg[1];
    ok = ok && same;
    if (!detail.empty()) detail += "; ";
    detail += std::string(preset_name(p)) + " " + std::string(termination_name(rep.termination)) +
              fmt(" after %.0f iterations, energy %.6g", rep.iterations, rep.energy) +
              (same ? ", SVG identical on regeneration" : ", SVG DIFFERS on regeneration");
  }
  return {ok, detail + " (written to " + outdir.string() + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path outdir = argc > 1 ? argv[1] : "acceptance_out";
  criterion(1, "block orthogonality", 5.0, block_orthogonality);
  criterion(2, "domination", 10.0, domination);
  criterion(3, "gradient vs finite differences", 30.0, gradient_check);
  criterion(4, "oracle equivalence on fixtures", 0.0, oracle_fixtures);
  criterion(5, "continuum check", 1.0, continuum);
  criterion(6, "BVP circle translation", 60.0, bvp);
  criterion(7, "rigid-motion equivariance", 0.0, equivariance);
  criterion(8, "curvature consistency", 0.0, curvature_order);
  criterion(9, "circle to star geodesics", 0.0, [&] { return figure_reproduction(outdir); });
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
