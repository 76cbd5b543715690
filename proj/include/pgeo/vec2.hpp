#pragma once

#include <cmath>

namespace pgeo {

/// Plain 2-vector over an arbitrary scalar (double or an autodiff variable).
template <typename S>
struct Vec2 {
  S x{};
  S y{};

  Vec2() = default;
  Vec2(S x_, S y_) : x(x_), y(y_) {}

  template <typename U>
  explicit Vec2(const Vec2<U>& other) : x(S(other.x)), y(S(other.y)) {}

  Vec2& operator+=(const Vec2& o) {
    x = x + o.x;
    y = y + o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x = x - o.x;
    y = y - o.y;
    return *this;
  }
};

template <typename S>
Vec2<S> operator+(const Vec2<S>& a, const Vec2<S>& b) {
  return {a.x + b.x, a.y + b.y};
}
template <typename S>
Vec2<S> operator-(const Vec2<S>& a, const Vec2<S>& b) {
  return {a.x - b.x, a.y - b.y};
}
template <typename S>
Vec2<S> operator-(const Vec2<S>& a) {
  return {-a.x, -a.y};
}
template <typename S, typename K>
Vec2<S> operator*(const K& k, const Vec2<S>& a) {
  return {k * a.x, k * a.y};
}
template <typename S, typename K>
Vec2<S> operator*(const Vec2<S>& a, const K& k) {
  return {a.x * k, a.y * k};
}
template <typename S, typename K>
Vec2<S> operator/(const Vec2<S>& a, const K& k) {
  return {a.x / k, a.y / k};
}

template <typename S>
bool operator==(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x == b.x && a.y == b.y;
}

template <typename S>
S dot(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x * b.x + a.y * b.y;
}

/// z-component of the planar cross product.
template <typename S>
S cross(const Vec2<S>& a, const Vec2<S>& b) {
  return a.x * b.y - a.y * b.x;
}

template <typename S>
S norm(const Vec2<S>& a) {
  using std::sqrt;
  return sqrt(a.x * a.x + a.y * a.y);
}

template <typename S>
S squared_norm(const Vec2<S>& a) {
  return a.x * a.x + a.y * a.y;
}

using Point = Vec2<double>;

}  // namespace pgeo
