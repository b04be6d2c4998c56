#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace polyweight {

/// A finite union of arcs on the circle T = [-pi, pi). Arcs crossing the
/// -pi/pi seam are stored split; `circular_arc_count` rejoins them when
/// counting. The canonical form is sorted, disjoint and non-empty pieces.
class IntervalSet {
 public:
  struct Arc {
    double lo, hi;  // lo < hi, both in [-pi, pi]
    double length() const { return hi - lo; }
  };

  IntervalSet() = default;

  static IntervalSet empty_set() { return IntervalSet(); }
  static IntervalSet full_circle();
  /// Builds from raw (start, length-bearing) arcs; starts are wrapped,
  /// ends may exceed pi. Overlaps are merged.
  static IntervalSet from_arcs(const std::vector<std::pair<double, double>>& raw);

  double measure() const;
  bool is_empty() const { return pieces_.empty(); }
  bool covers_circle() const;
  bool contains(double t) const;

  IntervalSet complement() const;
  IntervalSet union_with(const IntervalSet& other) const;

  const std::vector<Arc>& pieces() const { return pieces_; }
  std::size_t piece_count() const { return pieces_.size(); }
  /// Number of maximal circular arcs (seam-adjacent pieces count once).
  std::size_t circular_arc_count() const;
  double min_circular_arc_length() const;

 private:
  std::vector<Arc> pieces_;
  void normalize();
};

}  // namespace polyweight
