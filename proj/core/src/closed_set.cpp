#include "riesz/closed_set.hpp"

#include <algorithm>

#include "riesz/error.hpp"

namespace riesz {

namespace {

bool below_all(const std::optional<Rat>& lo) { return !lo.has_value(); }

// sort key: unbounded-below first, then by lower endpoint
bool component_less(const ClosedSetR::Component& a, const ClosedSetR::Component& b) {
  if (below_all(a.lo) != below_all(b.lo)) return below_all(a.lo);
  if (!a.lo) return false;
  if (*a.lo != *b.lo) return *a.lo < *b.lo;
  // same lower endpoint: shorter first (irrelevant after merging)
  if (a.hi && b.hi) return *a.hi < *b.hi;
  return a.hi.has_value();
}

// overlap or touch: next starts at or before the end of cur
bool mergeable(const ClosedSetR::Component& cur, const ClosedSetR::Component& next) {
  if (!cur.hi || !next.lo) return true;
  return *next.lo <= *cur.hi;
}

}  // namespace

std::string ClosedSetR::Component::str() const {
  if (!lo && !hi) return "R";
  if (!lo) return "(-inf, " + to_string(*hi) + "]";
  if (!hi) return "[" + to_string(*lo) + ", inf)";
  if (*lo == *hi) return "{" + to_string(*lo) + "}";
  return "[" + to_string(*lo) + ", " + to_string(*hi) + "]";
}

ClosedSetR::ClosedSetR(std::vector<Component> raw) {
  for (const auto& c : raw) {
    if (c.lo && c.hi && *c.lo > *c.hi)
      fail(errc::precondition, "component endpoints out of order");
  }
  std::sort(raw.begin(), raw.end(), component_less);
  for (auto& c : raw) {
    if (components_.empty() || !mergeable(components_.back(), c)) {
      components_.push_back(std::move(c));
      continue;
    }
    Component& cur = components_.back();
    if (cur.hi && (!c.hi || *c.hi > *cur.hi)) cur.hi = c.hi;
  }
}

ClosedSetR ClosedSetR::whole_line() { return ClosedSetR({Component{}}); }

ClosedSetR ClosedSetR::point(const Rat& a) { return ClosedSetR({Component{a, a}}); }

ClosedSetR ClosedSetR::interval(const Rat& a, const Rat& b) {
  return ClosedSetR({Component{a, b}});
}

ClosedSetR ClosedSetR::ray_below(const Rat& a) {
  return ClosedSetR({Component{std::nullopt, a}});
}

ClosedSetR ClosedSetR::ray_above(const Rat& a) {
  return ClosedSetR({Component{a, std::nullopt}});
}

bool ClosedSetR::contains(const Rat& x) const {
  for (const auto& c : components_) {
    if (c.lo && x < *c.lo) continue;
    if (c.hi && x > *c.hi) continue;
    return true;
  }
  return false;
}

bool ClosedSetR::bounded_below() const {
  if (components_.empty()) return true;
  return components_.front().lo.has_value();
}

bool ClosedSetR::bounded_above() const {
  if (components_.empty()) return true;
  return components_.back().hi.has_value();
}

std::optional<Rat> ClosedSetR::min_point() const {
  if (components_.empty() || !bounded_below()) return std::nullopt;
  return components_.front().lo;
}

std::optional<Rat> ClosedSetR::max_point() const {
  if (components_.empty() || !bounded_above()) return std::nullopt;
  return components_.back().hi;
}

ClosedSetR ClosedSetR::reflected() const {
  std::vector<Component> out;
  for (const auto& c : components_) {
    Component r;
    if (c.hi) r.lo = -*c.hi;
    if (c.lo) r.hi = -*c.lo;
    out.push_back(std::move(r));
  }
  return ClosedSetR(std::move(out));
}

ClosedSetR ClosedSetR::clip_below(const Rat& r) const {
  std::vector<Component> out;
  for (const auto& c : components_) {
    if (c.hi && *c.hi < r) continue;
    Component k = c;
    if (!k.lo || *k.lo < r) k.lo = r;
    out.push_back(std::move(k));
  }
  return ClosedSetR(std::move(out));
}

ClosedSetR ClosedSetR::clip_above(const Rat& r) const {
  return reflected().clip_below(-r).reflected();
}

ClosedSetR ClosedSetR::unite(const ClosedSetR& other) const {
  std::vector<Component> all = components_;
  all.insert(all.end(), other.components_.begin(), other.components_.end());
  return ClosedSetR(std::move(all));
}

std::string ClosedSetR::str() const {
  if (components_.empty()) return "{}";
  std::string s;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) s += " u ";
    s += components_[i].str();
  }
  return s;
}

}  // namespace riesz
