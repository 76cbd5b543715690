// pgeo: generate shapes, solve for geodesic paths between them, and
// re-evaluate saved paths.
//
// Exit codes: 0 success (solve converged or stalled), 1 invalid input,
// 2 solve ended by line-search failure or the iteration cap.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <pgeo/pgeo.hpp>

namespace {

using namespace pgeo;

struct InputError : Error {
  using Error::Error;
};

// "kind:key=value,key=value"
Polygon parse_shape_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError("shape spec item '" + item + "' is not key=value");
      const std::string key = item.substr(0, eq);
      try {
        std::size_t used = 0;
        const double v = std::stod(item.substr(eq + 1), &used);
        if (used != item.size() - eq - 1) throw std::invalid_argument(key);
        kv[key] = v;
      } catch (const std::exception&) {
        throw InputError("shape spec value for '" + key + "' is not a number");
      }
    }
  }
  auto take = [&](const std::string& key, double def) {
    const auto it = kv.find(key);
    if (it == kv.end()) return def;
    const double v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_count = [&](const std::string& key, double def) {
    const double v = take(key, def);
    if (v < 3 || v != static_cast<double>(static_cast<long long>(v))) throw InputError(key + " must be an integer >= 3");
    return static_cast<std::size_t>(v);
  };

  std::optional<Polygon> out;
  if (kind == "circle") {
    const double r = take("r", 1.0);
    const auto n = take_count("n", 100);
    out = shapes::circle(r, n, {take("cx", 0.0), take("cy", 0.0)});
  } else if (kind == "ellipse") {
    const double rx = take("rx", 1.0), ry = take("ry", 0.5);
    const auto n = take_count("n", 100);
    out = shapes::ellipse(rx, ry, n, {take("cx", 0.0), take("cy", 0.0)});
  } else if (kind == "star") {
    const double k = take("k", 5.0);
    if (k != static_cast<double>(static_cast<int>(k))) throw InputError("star k must be an integer");
    const double r_in = take("rin", 0.5), r_out = take("rout", 1.0);
    const auto n = take_count("n", 100);
    out = shapes::star(static_cast<int>(k), r_in, r_out, n, {take("cx", 0.0), take("cy", 0.0)});
  } else if (kind == "square") {
    const double side = take("side", 1.0);
    const auto n = take_count("n", 100);
    out = shapes::square(side, n, {take("x", 0.0), take("y", 0.0)});
  } else {
    throw InputError("unknown shape kind '" + kind + "' (expected circle, ellipse, star or square)");
  }
  if (!kv.empty()) throw InputError("unknown parameter '" + kv.begin()->first + "' for " + kind);
  return *out;
}

MetricCoefficients parse_coeffs(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("coefficient '" + item + "' is not a number");
    }
  }
  if (v.size() != 7) throw InputError("--coeffs needs exactly 7 values A0,A1,A2,A3,B0,B1,C0");
  MetricCoefficients c{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
  c.validate();
  return c;
}

MetricCoefficients metric_by_name(const std::string& name) {
  const auto p = preset_from_name(name);
  if (!p || !preset_coefficients(*p)) throw InputError("unknown metric '" + name + "' (expected metric1..metric4)");
  return *preset_coefficients(*p);
}

// Inverse of metric_label: a preset name or "coeffs:A0,...,C0".
MetricCoefficients metric_from_label(const std::string& label) {
  if (label.rfind("coeffs:", 0) == 0) return parse_coeffs(label.substr(7));
  return metric_by_name(label);
}

std::string metric_label(const std::optional<std::string>& preset, const MetricCoefficients& c) {
  if (preset) return *preset;
  std::string out = "coeffs:";
  for (double v : {c.A0, c.A1, c.A2, c.A3, c.B0, c.B1, c.C0}) out += io::format_double(v) + ",";
  out.pop_back();
  return out;
}

Polygon load_shape(const std::string& file) {
  try {
    return io::shape_from_json(io::read_text(file));
  } catch (const Error& e) {
    throw InputError(file + ": " + e.what());
  }
}

struct MetricFlags {
  std::string metric;
  std::string coeffs;
  CLI::Option* metric_opt = nullptr;
  CLI::Option* coeffs_opt = nullptr;

  void add(CLI::App& app) {
    metric_opt = app.add_option("--metric", metric, "metric1, metric2, metric3 or metric4");
    coeffs_opt = app.add_option("--coeffs", coeffs, "A0,A1,A2,A3,B0,B1,C0");
    metric_opt->excludes(coeffs_opt);
  }
  bool given() const { return metric_opt->count() > 0 || coeffs_opt->count() > 0; }
  std::optional<std::string> preset() const {
    return metric_opt->count() > 0 ? std::optional<std::string>(metric) : std::nullopt;
  }
  MetricCoefficients resolve() const {
    return metric_opt->count() > 0 ? metric_by_name(metric) : parse_coeffs(coeffs);
  }
};

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

int run_generate(const std::string& spec, const std::string& out) {
  const auto shape = parse_shape_spec(spec);
  const auto text = io::shape_to_json(shape);
  if (out.empty())
    std::cout << text;
  else
    io::write_text(out, text);
  return 0;
}

int run_resample(const std::string& in, std::size_t n, const std::string& out) {
  if (n < 3) throw InputError("--n must be at least 3");
  const auto text = io::shape_to_json(shapes::resample(load_shape(in), n));
  if (out.empty())
    std::cout << text;
  else
    io::write_text(out, text);
  return 0;
}

struct SolveFlags {
  std::string from, to, gen_from, gen_to;
  MetricFlags metric;
  std::size_t T = 20;
  bool align = false;
  double penalty_weight = 1.0;
  std::string out, svg, csv;
  std::optional<unsigned long long> seed;
  double perturb = 0.0;
  SolverConfig solver;
};

Path perturbed(const Path& p, unsigned long long seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, scale);
  std::vector<Polygon> slices = p.slices();
  for (std::size_t t = 1; t + 1 < slices.size(); ++t) {
    std::vector<Point> pts = slices[t].vertices();
    for (auto& q : pts) {
      q.x += noise(rng);
      q.y += noise(rng);
    }
    slices[t] = Polygon(std::move(pts));
  }
  return Path(std::move(slices));
}

int run_solve(SolveFlags& f) {
  if (f.from.empty() == f.gen_from.empty()) throw InputError("give exactly one of --from or --gen-from");
  if (f.to.empty() == f.gen_to.empty()) throw InputError("give exactly one of --to or --gen-to");
  if (!f.metric.given()) throw InputError("give --metric or --coeffs");
  if (f.T < 1) throw InputError("-T must be at least 1");
  if (f.perturb < 0.0) throw InputError("--perturb must be non-negative");
  const auto coeff = f.metric.resolve();

  const Polygon c0 = f.from.empty() ? parse_shape_spec(f.gen_from) : load_shape(f.from);
  Polygon c1 = f.to.empty() ? parse_shape_spec(f.gen_to) : load_shape(f.to);
  if (c0.size() != c1.size())
    throw InputError("endpoint shapes have " + std::to_string(c0.size()) + " and " + std::to_string(c1.size()) +
                     " vertices; resample them to a common count first (pgeo resample --n)");
  if (f.align) c1 = pgeo::align(c0, c1).polygon;

  f.solver.penalty_weight = f.penalty_weight;
  f.solver.validate();
  Path start = initial_path(c0, c1, f.T);
  if (f.perturb > 0.0) start = perturbed(start, f.seed.value_or(0), f.perturb);

  SolveResult result;
  try {
    result = solve_path(start, coeff, f.solver);
  } catch (const DegenerateEdge& e) {
    throw InputError(std::string("starting path is degenerate: ") + e.what());
  }
  const auto& rep = result.report;

  if (!f.out.empty())
    io::write_text(f.out, io::path_to_json({result.path, metric_label(f.metric.preset(), coeff), rep.objective}));
  if (!f.svg.empty()) io::write_text(f.svg, io::filmstrip_svg(result.path));
  if (!f.csv.empty()) io::write_text(f.csv, io::trace_to_csv(rep.trace));

  nlohmann::json summary;
  summary["termination"] = std::string(termination_name(rep.termination));
  summary["iterations"] = rep.iterations;
  summary["evaluations"] = rep.evaluations;
  summary["objective"] = rep.objective;
  summary["energy"] = rep.energy;
  summary["penalty"] = rep.penalty;
  summary["grad_norm"] = rep.grad_norm;
  print_json(summary);

  const bool ok = rep.termination == Termination::converged || rep.termination == Termination::stalled;
  if (!ok) std::cerr << "pgeo: solve ended with " << termination_name(rep.termination) << "\n";
  return ok ? 0 : 2;
}

int run_energy(const std::string& file, const MetricFlags& metric, double penalty_weight, unsigned workers) {
  io::PathFile pf;
  try {
    pf = io::path_from_json(io::read_text(file));
  } catch (const Error& e) {
    throw InputError(file + ": " + e.what());
  }
  MetricCoefficients coeff;
  if (metric.given())
    coeff = metric.resolve();
  else if (!pf.metric.empty())
    coeff = metric_from_label(pf.metric);
  else
    throw InputError("path file names no metric; give --metric or --coeffs");

  EnergyOptions opts;
  opts.penalty_weight = penalty_weight;
  opts.workers = workers;
  EnergyBreakdown e;
  try {
    e = evaluate_path(pf.path, coeff, opts);
  } catch (const DegenerateEdge& err) {
    throw InputError(file + ": " + err.what());
  }
  nlohmann::json out;
  out["objective"] = e.objective;
  out["energy"] = e.total_energy;
  out["penalty"] = e.penalty;
  out["per_step"] = e.per_step;
  print_json(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesics between closed polygons under curvature-weighted metrics"};
  app.require_subcommand(1);

  std::string spec, gen_out;
  auto* gen = app.add_subcommand("generate", "Write a generated shape as JSON");
  gen->add_option("spec", spec, "circle:r=1,n=100,cx=0,cy=0 | ellipse:rx=,ry=,n=,cx=,cy= | star:k=,rin=,rout=,n=,cx=,cy= | square:side=,n=,x=,y=")
      ->required();
  gen->add_option("-o,--out", gen_out, "Output file (default: stdout)");

  std::string rs_in, rs_out;
  std::size_t rs_n = 0;
  auto* rs = app.add_subcommand("resample", "Resample a shape at uniform arc length");
  rs->add_option("--in", rs_in, "Input shape file")->required();
  rs->add_option("--n", rs_n, "Vertex count")->required();
  rs->add_option("-o,--out", rs_out, "Output file (default: stdout)");

  SolveFlags sf;
  auto* sv = app.add_subcommand("solve", "Compute a geodesic path between two shapes");
  auto* from = sv->add_option("--from", sf.from, "Start shape file");
  auto* gfrom = sv->add_option("--gen-from", sf.gen_from, "Start shape spec");
  from->excludes(gfrom);
  auto* to = sv->add_option("--to", sf.to, "End shape file");
  auto* gto = sv->add_option("--gen-to", sf.gen_to, "End shape spec");
  to->excludes(gto);
  sf.metric.add(*sv);
  sv->add_option("-T", sf.T, "Number of time steps")->capture_default_str();
  sv->add_flag("--align", sf.align, "Relabel the end shape to best match the start");
  sv->add_option("--penalty-weight", sf.penalty_weight, "Weight of the constant-speed penalty")->capture_default_str();
  sv->add_option("--out", sf.out, "Path JSON output");
  sv->add_option("--svg", sf.svg, "SVG filmstrip output");
  sv->add_option("--csv", sf.csv, "Per-iteration trace CSV output");
  sv->add_option("--seed", sf.seed, "Seed for --perturb");
  sv->add_option("--perturb", sf.perturb, "Std. deviation of Gaussian noise added to interior slices of the start path")
      ->capture_default_str();
  sv->add_option("--max-iters", sf.solver.max_iters)->capture_default_str();
  sv->add_option("--grad-tol", sf.solver.grad_tol)->capture_default_str();
  sv->add_option("--step-tol", sf.solver.step_tol)->capture_default_str();
  sv->add_option("--memory", sf.solver.memory)->capture_default_str();
  sv->add_option("--workers", sf.solver.workers)->capture_default_str();

  std::string en_path;
  MetricFlags en_metric;
  double en_weight = 1.0;
  unsigned en_workers = 1;
  auto* en = app.add_subcommand("energy", "Evaluate a saved path");
  en->add_option("--path", en_path, "Path JSON file")->required();
  en_metric.add(*en);
  en->add_option("--penalty-weight", en_weight)->capture_default_str();
  en->add_option("--workers", en_workers)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) return run_generate(spec, gen_out);
    if (*rs) return run_resample(rs_in, rs_n, rs_out);
    if (*sv) return run_solve(sf);
    if (*en) return run_energy(en_path, en_metric, en_weight, en_workers);
  } catch (const std::exception& e) {
    std::cerr << "pgeo: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
