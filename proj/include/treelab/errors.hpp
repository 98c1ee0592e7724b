#pragma once

#include <stdexcept>
#include <string>

namespace treelab {

// Malformed input: unknown ids, broken invariants of a structure, incompatible maps.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller violated a documented operation precondition.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A window or sample was too small to decide the query.
struct WindowExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A median was required but absent; carries the witness triple.
struct NotMedianError : std::runtime_error {
  NotMedianError(int x_, int y_, int z_)
      : std::runtime_error("no median for triple (" + std::to_string(x_) + "," +
                           std::to_string(y_) + "," + std::to_string(z_) + ")"),
        x(x_), y(y_), z(z_) {}
  int x, y, z;
};

}  // namespace treelab
