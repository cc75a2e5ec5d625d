#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riesz/rational.hpp"

namespace riesz {

// Closed subset of the real line: finitely many points, closed intervals,
// and rays with rational endpoints. Components are kept disjoint, sorted,
// and merged, so structural equality is set equality.
class ClosedSetR {
 public:
  // One maximal connected piece; an absent endpoint means that side is
  // unbounded. lo == hi is a single point, both absent is the whole line.
  struct Component {
    std::optional<Rat> lo, hi;
    bool operator==(const Component&) const = default;
    bool is_point() const { return lo && hi && *lo == *hi; }
    std::string str() const;
  };

  ClosedSetR() = default;
  explicit ClosedSetR(std::vector<Component> raw);

  static ClosedSetR empty() { return ClosedSetR(); }
  static ClosedSetR whole_line();
  static ClosedSetR point(const Rat& a);
  static ClosedSetR interval(const Rat& a, const Rat& b);
  static ClosedSetR ray_below(const Rat& a);  // (-inf, a]
  static ClosedSetR ray_above(const Rat& a);  // [a, inf)

  const std::vector<Component>& components() const { return components_; }
  bool is_empty() const { return components_.empty(); }
  bool contains(const Rat& x) const;

  bool bounded_below() const;
  bool bounded_above() const;
  bool is_bounded() const { return bounded_below() && bounded_above(); }
  // at least one side bounded (the whole line is the only normalized
  // violator, but empty unions of rays are handled uniformly)
  bool semi_bounded() const { return bounded_below() || bounded_above(); }

  std::optional<Rat> min_point() const;  // absent when empty or unbounded below
  std::optional<Rat> max_point() const;

  ClosedSetR reflected() const;                    // {-x : x in F}
  ClosedSetR clip_below(const Rat& r) const;       // F intersect [r, inf)
  ClosedSetR clip_above(const Rat& r) const;       // F intersect (-inf, r]
  ClosedSetR unite(const ClosedSetR& other) const;

  std::string str() const;
  bool operator==(const ClosedSetR&) const = default;

 private:
  std::vector<Component> components_;
};

}  // namespace riesz
