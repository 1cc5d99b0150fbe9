#pragma once

#include <string>

namespace liftham {

enum class Axis : unsigned char { Time = 0, Z = 1, ZBar = 2 };

// One coordinate of the chart (t, z^{ri}, zb^{ri}). level = extension order r,
// index = fiber index i (1-based). Time carries no level/index.
struct Coord {
  Axis axis = Axis::Time;
  int level = 0;
  int index = 0;

  static Coord time() { return Coord{}; }
  static Coord z(int level, int index) { return Coord{Axis::Z, level, index}; }
  static Coord zbar(int level, int index) { return Coord{Axis::ZBar, level, index}; }

  bool is_time() const { return axis == Axis::Time; }

  Coord conjugate() const {
    if (axis == Axis::Time) return *this;
    return Coord{axis == Axis::Z ? Axis::ZBar : Axis::Z, level, index};
  }

  Coord at_level(int new_level) const { return Coord{axis, new_level, index}; }

  std::string name() const {
    if (axis == Axis::Time) return "t";
    return (axis == Axis::Z ? "z" : "zb") + std::to_string(level) + "_" + std::to_string(index);
  }

  // Time first, then lexicographic by (level, index, axis) with z before zb.
  int compare(const Coord& o) const {
    if (axis == Axis::Time || o.axis == Axis::Time) {
      if (axis == o.axis) return 0;
      return axis == Axis::Time ? -1 : 1;
    }
    if (level != o.level) return level < o.level ? -1 : 1;
    if (index != o.index) return index < o.index ? -1 : 1;
    if (axis != o.axis) return axis < o.axis ? -1 : 1;
    return 0;
  }

  friend bool operator==(const Coord& a, const Coord& b) { return a.compare(b) == 0; }
  friend bool operator!=(const Coord& a, const Coord& b) { return a.compare(b) != 0; }
  friend bool operator<(const Coord& a, const Coord& b) { return a.compare(b) < 0; }
};

}  // namespace liftham
