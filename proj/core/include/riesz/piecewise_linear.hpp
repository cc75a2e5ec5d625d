#pragma once

#include <string>
#include <utility>
#include <vector>

#include "riesz/closed_set.hpp"
#include "riesz/interval.hpp"
#include "riesz/rational.hpp"

namespace riesz {

// Continuous piecewise-linear function with rational breakpoints, affine
// between consecutive breakpoints and constant beyond the outermost ones.
class PiecewiseLinear {
 public:
  PiecewiseLinear();  // identically zero
  static PiecewiseLinear constant(const Rat& c);
  // strictly increasing x required, at least one point
  static PiecewiseLinear from_points(std::vector<std::pair<Rat, Rat>> pts);

  const std::vector<std::pair<Rat, Rat>>& points() const { return pts_; }
  bool is_constant() const;

  Rat eval(const Rat& x) const;
  // exact range of values over the closed interval [x.lo, x.hi]
  QInterval range_on(const QInterval& x) const;
  Rat min_on(const ClosedSetR& f) const;  // f nonempty; exact (constant tails)
  Rat max_on(const ClosedSetR& f) const;

  PiecewiseLinear reflected() const;  // x -> -x

  std::string str() const;
  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<std::pair<Rat, Rat>> pts_;
};

PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b);
PiecewiseLinear operator-(const PiecewiseLinear& a, const PiecewiseLinear& b);
PiecewiseLinear operator-(const PiecewiseLinear& a);
PiecewiseLinear operator*(const Rat& c, const PiecewiseLinear& a);

}  // namespace riesz
