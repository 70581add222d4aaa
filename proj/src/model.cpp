#include "robta/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace robta {

ClockSet::ClockSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw ModelError("clock set must not be empty");
  std::set<std::string> seen;
  for (const auto& n : names_)
    if (!seen.insert(n).second) throw ModelError("duplicate clock '" + n + "'");
}

std::optional<ClockId> ClockSet::find(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<ClockId>(it - names_.begin());
}

Valuation shifted(const Valuation& v, const Rational& d) {
  Valuation out = v;
  for (auto& x : out.values) x += d;
  return out;
}

Valuation delay(const Valuation& v, const Rational& d, int bound) {
  if (d < 0) throw ModelError("negative delay " + to_string(d));
  Valuation out = shifted(v, d);
  if (!within_bound(out, bound)) throw ModelError("delay " + to_string(d) + " exceeds clock bound");
  return out;
}

Valuation reset(const Valuation& v, const std::vector<ClockId>& clocks) {
  Valuation out = v;
  for (ClockId c : clocks) out.values.at(c) = 0;
  return out;
}

bool within_bound(const Valuation& v, int bound) {
  return std::all_of(v.values.begin(), v.values.end(), [&](const Rational& x) { return x >= 0 && x <= bound; });
}

Rational manhattan_norm(const Valuation& v) {
  Rational s = 0;
  for (const auto& x : v.values) s += abs(x);
  return s;
}

Rational sup_distance(const Valuation& a, const Valuation& b) {
  Rational best = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational d = abs(a[i] - b[i]);
    if (d > best) best = d;
  }
  return best;
}

std::string to_string(const Valuation& v, const ClockSet& clocks) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << clocks.name(i) << '=' << to_string(v[i]);
  }
  os << ')';
  return os.str();
}

bool AtomicConstraint::holds(const Valuation& v) const {
  Rational t = v[clock];
  if (minus) t -= v[*minus];
  if (lower) {
    if (lower->strict ? !(t > lower->value) : !(t >= lower->value)) return false;
  }
  if (upper) {
    if (upper->strict ? !(t < upper->value) : !(t <= upper->value)) return false;
  }
  return true;
}

const char* to_string(Punctuality p) {
  switch (p) {
    case Punctuality::Empty: return "empty";
    case Punctuality::Punctual: return "punctual";
    case Punctuality::NonPunctual: return "non-punctual";
  }
  return "?";
}

bool satisfies(const Valuation& v, const Guard& g) {
  return std::all_of(g.atoms.begin(), g.atoms.end(), [&](const AtomicConstraint& a) { return a.holds(v); });
}

namespace {

std::string term(const AtomicConstraint& a, const ClockSet& clocks) {
  std::string t = clocks.name(a.clock);
  if (a.minus) t += "-" + clocks.name(*a.minus);
  return t;
}

const char* rel(bool strict) { return strict ? "<" : "<="; }

}  // namespace

std::string to_string(const Guard& g, const ClockSet& clocks) {
  std::string out;
  for (const auto& a : g.atoms) {
    if (!a.lower && !a.upper) continue;  // vacuous
    if (!out.empty()) out += " && ";
    std::string t = term(a, clocks);
    if (a.lower && a.upper && !a.lower->strict && !a.upper->strict && a.lower->value == a.upper->value) {
      out += t + "==" + std::to_string(a.lower->value);
      continue;
    }
    if (a.lower) out += std::to_string(a.lower->value) + rel(a.lower->strict);
    out += t;
    if (a.upper) out += std::string(rel(a.upper->strict)) + std::to_string(a.upper->value);
  }
  return out.empty() ? "true" : out;
}

TimedAutomaton::TimedAutomaton(ClockSet clocks, std::vector<std::string> locations, int bound,
                               std::vector<Edge> edges, LocationId initial, std::optional<Guard> initial_constraint,
                               std::vector<LocationId> buchi)
    : clocks_(std::move(clocks)),
      locations_(std::move(locations)),
      bound_(bound),
      edges_(std::move(edges)),
      initial_(initial),
      initial_constraint_(std::move(initial_constraint)) {
  if (clocks_.size() == 0) throw ModelError("automaton needs at least one clock");
  if (locations_.empty()) throw ModelError("automaton needs at least one location");
  if (bound_ < 1) throw ModelError("bound must be a positive integer");
  std::set<std::string> seen;
  for (const auto& l : locations_)
    if (!seen.insert(l).second) throw ModelError("duplicate location '" + l + "'");
  if (initial_ >= locations_.size()) throw ModelError("initial location out of range");

  auto check_guard = [&](const Guard& g, const std::string& where) {
    for (const auto& a : g.atoms) {
      if (a.clock >= clocks_.size() || (a.minus && *a.minus >= clocks_.size()))
        throw ModelError("unknown clock in " + where);
      if (a.minus && *a.minus == a.clock) throw ModelError("diagonal atom with a single clock in " + where);
      if (a.lower && a.upper && a.lower->value > a.upper->value)
        throw ModelError("lower bound exceeds upper bound in " + where);
    }
  };
  if (initial_constraint_) check_guard(*initial_constraint_, "initial constraint");

  outgoing_.assign(locations_.size(), {});
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    auto& edge = edges_[e];
    if (edge.source >= locations_.size() || edge.target >= locations_.size())
      throw ModelError("edge " + std::to_string(e) + " has an unknown endpoint");
    check_guard(edge.guard, "edge " + std::to_string(e));
    std::sort(edge.resets.begin(), edge.resets.end());
    edge.resets.erase(std::unique(edge.resets.begin(), edge.resets.end()), edge.resets.end());
    for (ClockId c : edge.resets)
      if (c >= clocks_.size()) throw ModelError("edge " + std::to_string(e) + " resets an unknown clock");
    edge.punctuality = classify_guard(edge.guard, clocks_.size(), bound_).kind;
    outgoing_[edge.source].push_back(e);
  }

  buchi_.assign(locations_.size(), false);
  for (LocationId l : buchi) {
    if (l >= locations_.size()) throw ModelError("Büchi location out of range");
    buchi_[l] = true;
  }
}

std::optional<LocationId> TimedAutomaton::find_location(const std::string& name) const {
  auto it = std::find(locations_.begin(), locations_.end(), name);
  if (it == locations_.end()) return std::nullopt;
  return static_cast<LocationId>(it - locations_.begin());
}

std::vector<LocationId> TimedAutomaton::buchi_locations() const {
  std::vector<LocationId> out;
  for (LocationId l = 0; l < buchi_.size(); ++l)
    if (buchi_[l]) out.push_back(l);
  return out;
}

}  // namespace robta
