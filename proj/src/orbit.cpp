#include "robta/orbit.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace robta {

BoolMatrix OrbitGraph::relation() const {
  BoolMatrix r = BoolMatrix::identity(layers.front().dimension() + 1);
  for (const auto& s : steps) r = r * s;
  return r;
}

OrbitGraph orbit_identity(const Region& r) { return OrbitGraph{{r}, {}}; }

namespace {

bool is_uniform_shift(const Valuation& from, const Valuation& to) {
  Rational d = to[0] - from[0];
  if (d < 0) return false;
  for (std::size_t x = 1; x < from.size(); ++x)
    if (to[x] - from[x] != d) return false;
  return true;
}

}  // namespace

OrbitGraph orbit_of_delay(const Region& r, const Region& r2, int bound) {
  if (!is_time_successor(r, r2, bound)) throw ModelError("delay target is not a time-successor");
  auto cs = r.corners(), cs2 = r2.corners();
  BoolMatrix rel(cs.size(), cs2.size());
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs2.size(); ++j)
      if (is_uniform_shift(cs[i], cs2[j])) rel.set(i, j);
  return OrbitGraph{{r, r2}, {rel}};
}

OrbitGraph orbit_of_edge(const Region& r, const Edge& e) {
  if (!region_satisfies(r, e.guard)) throw ModelError("guard does not hold on region");
  Region r2 = region_reset(r, e.resets);
  auto cs = r.corners(), cs2 = r2.corners();
  BoolMatrix rel(cs.size(), cs2.size());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    Valuation c = reset(cs[i], e.resets);
    bool found = false;
    for (std::size_t j = 0; j < cs2.size(); ++j)
      if (cs2[j] == c) {
        rel.set(i, j);
        found = true;
      }
    if (!found) throw ModelError("reset corner is not a corner of the reset region");
  }
  return OrbitGraph{{r, r2}, {rel}};
}

OrbitGraph orbit_of_step(const TimedAutomaton& a, const AtomicStep& s) {
  return concat(orbit_of_delay(s.source.region, s.delay_target, a.bound()),
                orbit_of_edge(s.delay_target, a.edge(s.edge)));
}

OrbitGraph orbit_of_path(const TimedAutomaton& a, const RegionPath& path) {
  if (path.empty()) throw ModelError("empty region path");
  OrbitGraph g = orbit_of_step(a, path[0]);
  for (std::size_t k = 1; k < path.size(); ++k) g = concat(g, orbit_of_step(a, path[k]));
  return g;
}

OrbitGraph concat(const OrbitGraph& a, const OrbitGraph& b) {
  if (a.layers.back() != b.layers.front()) throw ModelError("orbit graphs do not meet in the same region");
  OrbitGraph out = a;
  out.layers.insert(out.layers.end(), b.layers.begin() + 1, b.layers.end());
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return out;
}

FoldedOrbitGraph fold(const OrbitGraph& g) {
  if (g.layers.front() != g.layers.back()) throw ModelError("orbit graph is not a cycle");
  return FoldedOrbitGraph{g.layers.front(), g.relation()};
}

BoolMatrix step_relation(const TimedAutomaton& a, const AtomicStep& s) {
  return orbit_of_step(a, s).relation();
}

FoldedOrbitGraph fog_of_cycle(const TimedAutomaton& a, const RegionPath& cycle) {
  if (cycle.empty()) throw ModelError("empty cycle");
  if (!(cycle.front().source == cycle.back().target)) throw ModelError("path is not a cycle");
  BoolMatrix r = BoolMatrix::identity(cycle.front().source.region.dimension() + 1);
  for (const auto& s : cycle) r = r * step_relation(a, s);
  return FoldedOrbitGraph{cycle.front().source.region, r};
}

FoldedOrbitGraph compose_fog(const FoldedOrbitGraph& a, const FoldedOrbitGraph& b) {
  if (a.region != b.region) throw ModelError("folded orbit graphs over different regions");
  return FoldedOrbitGraph{a.region, a.relation * b.relation};
}

FoldedOrbitGraph fog_power(const FoldedOrbitGraph& f, std::size_t k) {
  FoldedOrbitGraph out{f.region, BoolMatrix::identity(f.size())};
  for (std::size_t i = 0; i < k; ++i) out = compose_fog(out, f);
  return out;
}

bool is_cluster(const BoolMatrix& rel) {
  std::size_t n = rel.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (!rel(i, i)) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (rel(i, j) != rel(j, i)) return false;
      if (!rel(i, j)) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (rel(j, k) && !rel(i, k)) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::size_t> colors_of(const BoolMatrix& same) {
  std::size_t n = same.rows();
  std::vector<std::size_t> color(n, n);
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (color[i] != n) continue;
    for (std::size_t j = i; j < n; ++j)
      if (same(i, j)) color[j] = next;
    ++next;
  }
  return color;
}

BoolMatrix transpose(const BoolMatrix& m) {
  BoolMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j)) t.set(j, i);
  return t;
}

BoolMatrix mutual(const BoolMatrix& reach) {
  BoolMatrix out(reach.rows(), reach.cols());
  for (std::size_t i = 0; i < reach.rows(); ++i)
    for (std::size_t j = 0; j < reach.cols(); ++j)
      if (reach(i, j) && reach(j, i)) out.set(i, j);
  return out;
}

}  // namespace

std::vector<std::size_t> scc_colors(const BoolMatrix& rel) { return colors_of(mutual(rel.closure())); }

std::vector<std::size_t> wcc_colors(const BoolMatrix& rel) { return colors_of((rel | transpose(rel)).closure()); }

bool has_non_strong_component(const BoolMatrix& rel) { return scc_colors(rel) != wcc_colors(rel); }

std::string IterationClass::to_string() const {
  return std::string(kind == Kind::ClusterAt ? "ClusterAt(" : "Doomed(") + std::to_string(k) + ")";
}

IterationClass iterate_classify(const FoldedOrbitGraph& f) {
  std::map<BoolMatrix, std::size_t> seen;
  BoolMatrix p = f.relation;
  std::optional<IterationClass> found;
  for (std::size_t k = 1;; ++k) {
    auto [it, fresh] = seen.emplace(p, k);
    if (!fresh) {
      if (!found) throw ModelError("folded orbit graph powers are neither eventually cluster nor doomed");
      found->period_start = it->second;
      found->period = k - it->second;
      return *found;
    }
    if (!found) {
      if (is_cluster(p)) found = IterationClass{IterationClass::Kind::ClusterAt, k};
      else if (has_non_strong_component(p)) found = IterationClass{IterationClass::Kind::Doomed, k};
    }
    p = p * f.relation;
  }
}

std::size_t cluster_bound(std::size_t m) {
  std::size_t fact = 1;
  for (std::size_t i = 2; i <= m + 1; ++i) fact *= i;
  return std::max<std::size_t>(1, m * fact);
}

std::size_t doomed_bound(std::size_t m) {
  std::size_t fact = 1;
  for (std::size_t i = 2; i <= m + 1; ++i) fact *= i;
  return fact;
}

}  // namespace robta
