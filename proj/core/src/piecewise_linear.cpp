#include "riesz/piecewise_linear.hpp"

#include <algorithm>

#include "riesz/error.hpp"

namespace riesz {

PiecewiseLinear::PiecewiseLinear() : pts_{{Rat(0), Rat(0)}} {}

PiecewiseLinear PiecewiseLinear::constant(const Rat& c) {
  PiecewiseLinear p;
  p.pts_ = {{Rat(0), c}};
  return p;
}

PiecewiseLinear PiecewiseLinear::from_points(std::vector<std::pair<Rat, Rat>> pts) {
  if (pts.empty()) fail(errc::precondition, "piecewise-linear needs a point");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i - 1].first >= pts[i].first)
      fail(errc::precondition, "breakpoints must be strictly increasing");
  }
  PiecewiseLinear p;
  p.pts_ = std::move(pts);
  return p;
}

bool PiecewiseLinear::is_constant() const {
  for (const auto& [x, v] : pts_)
    if (v != pts_.front().second) return false;
  return true;
}

Rat PiecewiseLinear::eval(const Rat& x) const {
  if (x <= pts_.front().first) return pts_.front().second;
  if (x >= pts_.back().first) return pts_.back().second;
  auto it = std::upper_bound(
      pts_.begin(), pts_.end(), x,
      [](const Rat& v, const std::pair<Rat, Rat>& p) { return v < p.first; });
  const auto& [x1, v1] = *(it - 1);
  const auto& [x2, v2] = *it;
  return v1 + (v2 - v1) * (x - x1) / (x2 - x1);
}

QInterval PiecewiseLinear::range_on(const QInterval& x) const {
  Rat lo = eval(x.lo), hi = lo;
  auto take = [&](const Rat& v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  };
  take(eval(x.hi));
  for (const auto& [bx, bv] : pts_) {
    if (x.lo < bx && bx < x.hi) take(bv);
  }
  return QInterval(lo, hi);
}

namespace {

Rat extreme_on(const PiecewiseLinear& p, const ClosedSetR& f, bool want_min) {
  if (f.is_empty()) fail(errc::precondition, "extremum over the empty set");
  bool first = true;
  Rat best(0);
  auto take = [&](const Rat& v) {
    if (first || (want_min ? v < best : v > best)) best = v;
    first = false;
  };
  for (const auto& c : f.components()) {
    if (c.lo) take(p.eval(*c.lo));
    if (c.hi) take(p.eval(*c.hi));
    // constant extension: the outermost breakpoint value covers each
    // unbounded side, and interior extrema sit at breakpoints
    if (!c.lo) take(p.points().front().second);
    if (!c.hi) take(p.points().back().second);
    for (const auto& [bx, bv] : p.points()) {
      if ((!c.lo || *c.lo < bx) && (!c.hi || bx < *c.hi)) take(bv);
    }
  }
  return best;
}

}  // namespace

Rat PiecewiseLinear::min_on(const ClosedSetR& f) const { return extreme_on(*this, f, true); }

Rat PiecewiseLinear::max_on(const ClosedSetR& f) const { return extreme_on(*this, f, false); }

PiecewiseLinear PiecewiseLinear::reflected() const {
  std::vector<std::pair<Rat, Rat>> pts;
  for (auto it = pts_.rbegin(); it != pts_.rend(); ++it) pts.push_back({-it->first, it->second});
  return from_points(std::move(pts));
}

std::string PiecewiseLinear::str() const {
  std::string s = "pl{";
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    if (i) s += ", ";
    s += "(" + to_string(pts_[i].first) + ", " + to_string(pts_[i].second) + ")";
  }
  return s + "}";
}

PiecewiseLinear operator+(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  std::vector<Rat> xs;
  for (const auto& [x, v] : a.points()) xs.push_back(x);
  for (const auto& [x, v] : b.points()) xs.push_back(x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<std::pair<Rat, Rat>> pts;
  for (const auto& x : xs) pts.push_back({x, a.eval(x) + b.eval(x)});
  return PiecewiseLinear::from_points(std::move(pts));
}

PiecewiseLinear operator-(const PiecewiseLinear& a, const PiecewiseLinear& b) {
  return a + (Rat(-1) * b);
}

PiecewiseLinear operator-(const PiecewiseLinear& a) { return Rat(-1) * a; }

PiecewiseLinear operator*(const Rat& c, const PiecewiseLinear& a) {
  std::vector<std::pair<Rat, Rat>> pts;
  for (const auto& [x, v] : a.points()) pts.push_back({x, c * v});
  return PiecewiseLinear::from_points(std::move(pts));
}

}  // namespace riesz
