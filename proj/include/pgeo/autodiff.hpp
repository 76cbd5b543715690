#pragma once

// Minimal reverse-mode automatic differentiation.
//
// A Var is a value plus the index of its node on the thread's active Tape.
// Index -1 marks a constant: operations on constants record nothing, so
// templated kernels can mix literals and variables freely. Every arithmetic
// operation performs the same double operations as the plain-double
// instantiation, so values agree bit-for-bit between the two.

#include <cassert>
#include <cmath>
#include <numbers>
#include <vector>

namespace pgeo::ad {

class Tape;

namespace detail {
inline thread_local Tape* active_tape = nullptr;
}

struct Var {
  double val = 0.0;
  int idx = -1;

  Var() = default;
  Var(double v) : val(v) {}  // NOLINT: implicit constants are the point
  Var(double v, int i) : val(v), idx(i) {}
};

/// Linear record of the evaluation graph. Each node has at most two parents.
class Tape {
 public:
  struct Node {
    int a;
    int b;
    double da;
    double db;
  };

  /// New independent variable.
  Var variable(double v) {
    nodes_.push_back({-1, -1, 0.0, 0.0});
    return {v, static_cast<int>(nodes_.size()) - 1};
  }

  Var record(double v, const Var& a, double da) {
    if (a.idx < 0) return Var(v);
    nodes_.push_back({a.idx, -1, da, 0.0});
    return {v, static_cast<int>(nodes_.size()) - 1};
  }

  Var record(double v, const Var& a, double da, const Var& b, double db) {
    if (a.idx < 0 && b.idx < 0) return Var(v);
    nodes_.push_back({a.idx, b.idx, da, db});
    return {v, static_cast<int>(nodes_.size()) - 1};
  }

  /// Adjoints of every node with respect to `out`.
  std::vector<double> gradient(const Var& out) const {
    std::vector<double> adj(nodes_.size(), 0.0);
    if (out.idx < 0) return adj;
    adj[out.idx] = 1.0;
    for (int i = out.idx; i >= 0; --i) {
      const double g = adj[i];
      if (g == 0.0) continue;
      const Node& n = nodes_[i];
      if (n.a >= 0) adj[n.a] += g * n.da;
      if (n.b >= 0) adj[n.b] += g * n.db;
    }
    return adj;
  }

  void clear() { nodes_.clear(); }
  std::size_t size() const { return nodes_.size(); }

  static Tape& active() {
    assert(detail::active_tape && "no active autodiff tape on this thread");
    return *detail::active_tape;
  }

 private:
  std::vector<Node> nodes_;
};

/// Installs a tape as the thread's active tape for the guard's lifetime.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape) : previous_(detail::active_tape) {
    detail::active_tape = &tape;
  }
  ~TapeScope() { detail::active_tape = previous_; }
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

namespace detail {
inline bool constant(const Var& a) { return a.idx < 0; }
inline bool constant(const Var& a, const Var& b) { return a.idx < 0 && b.idx < 0; }
}  // namespace detail

inline Var operator+(const Var& a, const Var& b) {
  const double v = a.val + b.val;
  if (detail::constant(a, b)) return Var(v);
  return Tape::active().record(v, a, 1.0, b, 1.0);
}
inline Var operator-(const Var& a, const Var& b) {
  const double v = a.val - b.val;
  if (detail::constant(a, b)) return Var(v);
  return Tape::active().record(v, a, 1.0, b, -1.0);
}
inline Var operator*(const Var& a, const Var& b) {
  const double v = a.val * b.val;
  if (detail::constant(a, b)) return Var(v);
  return Tape::active().record(v, a, b.val, b, a.val);
}
inline Var operator/(const Var& a, const Var& b) {
  const double v = a.val / b.val;
  if (detail::constant(a, b)) return Var(v);
  return Tape::active().record(v, a, 1.0 / b.val, b, -v / b.val);
}
inline Var operator-(const Var& a) {
  if (detail::constant(a)) return Var(-a.val);
  return Tape::active().record(-a.val, a, -1.0);
}

inline Var sqrt(const Var& a) {
  const double v = std::sqrt(a.val);
  if (detail::constant(a)) return Var(v);
  return Tape::active().record(v, a, 0.5 / v);
}

inline double value_of(double x) { return x; }
inline double value_of(const Var& x) { return x.val; }

}  // namespace pgeo::ad

namespace pgeo {

/// arccos with its argument clamped to [-1, 1]. At or beyond the clamp the
/// result is treated as constant (zero subgradient).
inline double clamped_acos(double x) {
  if (x >= 1.0) return 0.0;
  if (x <= -1.0) return std::numbers::pi;
  return std::acos(x);
}

inline ad::Var clamped_acos(const ad::Var& x) {
  if (x.val >= 1.0) return ad::Var(0.0);
  if (x.val <= -1.0) return ad::Var(std::numbers::pi);
  const double v = std::acos(x.val);
  if (x.idx < 0) return ad::Var(v);
  return ad::Tape::active().record(v, x, -1.0 / std::sqrt(1.0 - x.val * x.val));
}

/// Sign of a scalar as -1, 0 or +1 (a constant for autodiff purposes).
inline double sign_of(double x) { return (x > 0.0) - (x < 0.0); }
inline double sign_of(const ad::Var& x) { return sign_of(x.val); }

using ad::value_of;

}  // namespace pgeo
