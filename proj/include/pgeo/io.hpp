#pragma once

/// \file io.hpp
///
/// JSON shape and path files, CSV solver traces and SVG filmstrips.
///
///   shape: {"format": "geoshape/1", "vertices": [[x, y], ...], "closed": true}
///   path:  {"format": "geoshape/1", "T": int, "N": int, "metric": string,
///           "objective": double, "slices": [[[x, y], ...], ...]}

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "energy.hpp"
#include "optimize.hpp"

namespace pgeo::io {

inline constexpr const char* kFormat = "geoshape/1";

class FormatError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline nlohmann::json points_json(const Polygon& p) {
  auto arr = nlohmann::json::array();
  for (const auto& q : p.vertices()) arr.push_back({q.x, q.y});
  return arr;
}

inline Polygon points_from_json(const nlohmann::json& arr, const std::string& where) {
  if (!arr.is_array()) throw FormatError(where + ": expected an array of [x, y] pairs");
  std::vector<Point> pts;
  pts.reserve(arr.size());
  for (const auto& q : arr) {
    if (!q.is_array() || q.size() != 2 || !q[0].is_number() || !q[1].is_number())
      throw FormatError(where + ": every vertex must be a pair of numbers");
    const Point p{q[0].get<double>(), q[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw FormatError(where + ": non-finite coordinate");
    pts.push_back(p);
  }
  if (pts.size() < 3) throw FormatError(where + ": at least 3 vertices are required");
  return Polygon(std::move(pts));
}

inline void check_format(const nlohmann::json& j) {
  if (!j.is_object()) throw FormatError("top-level JSON value must be an object");
  if (j.contains("format") && j["format"] != kFormat)
    throw FormatError("unsupported format tag (expected \"" + std::string(kFormat) + "\")");
}

inline nlohmann::json parse(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace detail

inline std::string read_text(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw Error("cannot open " + filename);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& filename, const std::string& text) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw Error("cannot write " + filename);
  out << text;
  if (!out) throw Error("failed writing " + filename);
}

inline std::string shape_to_json(const Polygon& p) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["vertices"] = detail::points_json(p);
  j["closed"] = true;
  return j.dump(2) + "\n";
}

inline Polygon shape_from_json(const std::string& text) {
  const auto j = detail::parse(text);
  detail::check_format(j);
  if (!j.contains("closed") || j["closed"] != true) throw FormatError("shape: \"closed\" must be true");
  if (!j.contains("vertices")) throw FormatError("shape: missing \"vertices\"");
  return detail::points_from_json(j["vertices"], "shape");
}

struct PathFile {
  Path path;
  std::string metric;
  double objective = 0.0;
};

inline std::string path_to_json(const PathFile& f) {
  nlohmann::json j;
  j["format"] = kFormat;
  j["T"] = f.path.steps();
  j["N"] = f.path.vertices();
  j["metric"] = f.metric;
  j["objective"] = f.objective;
  auto slices = nlohmann::json::array();
  for (const auto& s : f.path.slices()) slices.push_back(detail::points_json(s));
  j["slices"] = std::move(slices);
  return j.dump(1) + "\n";
}

inline PathFile path_from_json(const std::string& text) {
  const auto j = detail::parse(text);
  detail::check_format(j);
  for (const char* key : {"T", "N", "slices"})
    if (!j.contains(key)) throw FormatError(std::string("path: missing \"") + key + "\"");
  if (!j["T"].is_number_integer() || !j["N"].is_number_integer()) throw FormatError("path: T and N must be integers");
  const auto T = j["T"].get<long long>();
  const auto N = j["N"].get<long long>();
  if (T < 1 || N < 3) throw FormatError("path: need T >= 1 and N >= 3");
  const auto& sl = j["slices"];
  if (!sl.is_array() || static_cast<long long>(sl.size()) != T + 1)
    throw FormatError("path: expected T+1 slices");
  std::vector<Polygon> slices;
  for (std::size_t t = 0; t < sl.size(); ++t) {
    auto p = detail::points_from_json(sl[t], "path slice " + std::to_string(t));
    if (static_cast<long long>(p.size()) != N) throw FormatError("path: slice " + std::to_string(t) + " does not have N vertices");
    slices.push_back(std::move(p));
  }
  PathFile f{Path(std::move(slices)), "", 0.0};
  if (j.contains("metric")) {
    if (!j["metric"].is_string()) throw FormatError("path: \"metric\" must be a string");
    f.metric = j["metric"].get<std::string>();
  }
  if (j.contains("objective")) {
    if (!j["objective"].is_number()) throw FormatError("path: \"objective\" must be a number");
    f.objective = j["objective"].get<double>();
  }
  return f;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// iter,objective,energy,penalty,grad_norm
inline std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::string out = "iter,objective,energy,penalty,grad_norm\n";
  for (const auto& r : trace) {
    out += std::to_string(r.iter) + "," + format_double(r.objective) + "," + format_double(r.energy) + "," +
           format_double(r.penalty) + "," + format_double(r.grad_norm) + "\n";
  }
  return out;
}

/// Evenly spaced slice indices, at most `max_frames`, always including both
/// endpoints.
inline std::vector<std::size_t> filmstrip_frames(std::size_t slices, std::size_t max_frames = 12) {
  const std::size_t count = std::min(slices, std::max<std::size_t>(max_frames, 2));
  std::vector<std::size_t> out;
  if (count == 1) return {0};
  for (std::size_t i = 0; i < count; ++i) {
    const double pos = static_cast<double>(i) * static_cast<double>(slices - 1) / static_cast<double>(count - 1);
    out.push_back(static_cast<std::size_t>(std::lround(pos)));
  }
  return out;
}

/// Slices drawn left to right as closed outlines in 120px cells with one
/// shared scale, each centred on its own bounding box.
inline std::string filmstrip_svg(const Path& path, std::size_t max_frames = 12) {
  constexpr double cell = 120.0, pad = 8.0;
  const auto frames = filmstrip_frames(path.slices().size(), max_frames);

  struct Box {
    double x0, y0, x1, y1;
  };
  std::vector<Box> boxes;
  double extent = 0.0;
  for (std::size_t f : frames) {
    Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& p : path[f].vertices()) {
      b.x0 = std::min(b.x0, p.x);
      b.y0 = std::min(b.y0, p.y);
      b.x1 = std::max(b.x1, p.x);
      b.y1 = std::max(b.y1, p.y);
    }
    extent = std::max({extent, b.x1 - b.x0, b.y1 - b.y0});
    boxes.push_back(b);
  }
  const double scale = extent > 0.0 ? (cell - 2.0 * pad) / extent : 1.0;

  char buf[128];
  std::string out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                static_cast<int>(cell * frames.size()), static_cast<int>(cell), static_cast<int>(cell * frames.size()),
                static_cast<int>(cell));
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const Box& b = boxes[i];
    const double cx = 0.5 * (b.x0 + b.x1), cy = 0.5 * (b.y0 + b.y1);
    const double ox = cell * static_cast<double>(i) + 0.5 * cell, oy = 0.5 * cell;
    const bool endpoint = frames[i] == 0 || frames[i] + 1 == path.slices().size();
    out += endpoint ? "<polygon fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"1.5\" points=\""
                    : "<polygon fill=\"none\" stroke=\"#1f2d3d\" stroke-width=\"1\" points=\"";
    bool first = true;
    for (const auto& p : path[frames[i]].vertices()) {
      std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", first ? "" : " ", ox + scale * (p.x - cx), oy - scale * (p.y - cy));
      out += buf;
      first = false;
    }
    out += "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" font-size=\"9\" "
                  "text-anchor=\"middle\">t=%zu/%zu</text>\n",
                  ox, cell - 2.0, frames[i], path.steps());
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace pgeo::io
