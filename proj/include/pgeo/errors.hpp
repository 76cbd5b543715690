#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pgeo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An edge shorter than the degeneracy threshold.
class DegenerateEdge : public Error {
 public:
  DegenerateEdge(std::size_t edge, double length)
      : Error("degenerate edge " + std::to_string(edge) + " (length " +
              std::to_string(length) + ")"),
        edge_(edge) {}
  std::size_t edge() const { return edge_; }

 private:
  std::size_t edge_;
};

/// Adjacent edge normals cancel at a vertex (a cusp).
class ZeroVertexNormal : public Error {
 public:
  explicit ZeroVertexNormal(std::size_t vertex)
      : Error("vertex normal vanishes at vertex " + std::to_string(vertex)),
        vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

class SizeMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace pgeo
