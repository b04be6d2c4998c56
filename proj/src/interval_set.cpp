#include "polyweight/interval_set.hpp"

#include <algorithm>
#include <cmath>

#include "polyweight/logdomain.hpp"

namespace polyweight {

namespace {
constexpr double kSeamTol = 1e-15;
}

IntervalSet IntervalSet::full_circle() {
  IntervalSet s;
  s.pieces_.push_back({-kPi, kPi});
  return s;
}

IntervalSet IntervalSet::from_arcs(const std::vector<std::pair<double, double>>& raw) {
  IntervalSet s;
  for (auto [a, b] : raw) {
    if (!(b > a)) continue;
    if (b - a >= kTwoPi) {
      s.pieces_.push_back({-kPi, kPi});
      continue;
    }
    double lo = wrap_angle(a);
    double hi = lo + (b - a);
    if (hi <= kPi) {
      s.pieces_.push_back({lo, hi});
    } else {
      s.pieces_.push_back({lo, kPi});
      s.pieces_.push_back({-kPi, hi - kTwoPi});
    }
  }
  s.normalize();
  return s;
}

void IntervalSet::normalize() {
  if (pieces_.empty()) return;
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Arc& x, const Arc& y) { return x.lo < y.lo; });
  std::vector<Arc> out;
  for (const Arc& p : pieces_) {
    if (!(p.hi > p.lo)) continue;
    if (!out.empty() && p.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, p.hi);
    } else {
      out.push_back(p);
    }
  }
  pieces_ = std::move(out);
}

double IntervalSet::measure() const {
  double m = 0;
  for (const Arc& p : pieces_) m += p.length();
  return std::min(m, kTwoPi);
}

bool IntervalSet::covers_circle() const {
  return pieces_.size() == 1 && pieces_[0].lo <= -kPi + kSeamTol &&
         pieces_[0].hi >= kPi - kSeamTol;
}

bool IntervalSet::contains(double t) const {
  double w = wrap_angle(t);
  for (const Arc& p : pieces_)
    if (w >= p.lo && w <= p.hi) return true;
  return false;
}

IntervalSet IntervalSet::complement() const {
  IntervalSet out;
  if (pieces_.empty()) return full_circle();
  double cursor = -kPi;
  for (const Arc& p : pieces_) {
    if (p.lo > cursor) out.pieces_.push_back({cursor, p.lo});
    cursor = std::max(cursor, p.hi);
  }
  if (cursor < kPi) out.pieces_.push_back({cursor, kPi});
  out.normalize();
  return out;
}

IntervalSet IntervalSet::union_with(const IntervalSet& other) const {
  IntervalSet out;
  out.pieces_ = pieces_;
  out.pieces_.insert(out.pieces_.end(), other.pieces_.begin(), other.pieces_.end());
  out.normalize();
  return out;
}

std::size_t IntervalSet::circular_arc_count() const {
  if (pieces_.empty()) return 0;
  std::size_t n = pieces_.size();
  if (n >= 2 && pieces_.front().lo <= -kPi + kSeamTol &&
      pieces_.back().hi >= kPi - kSeamTol)
    --n;  // seam-wrapping arc counted once
  return n;
}

double IntervalSet::min_circular_arc_length() const {
  if (pieces_.empty()) return 0.0;
  bool wraps = pieces_.size() >= 2 && pieces_.front().lo <= -kPi + kSeamTol &&
               pieces_.back().hi >= kPi - kSeamTol;
  double best = kTwoPi;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double len = pieces_[i].length();
    if (wraps && i == 0) len += pieces_.back().length();
    if (wraps && i + 1 == pieces_.size()) continue;
    best = std::min(best, len);
  }
  return best;
}

}  // namespace polyweight
