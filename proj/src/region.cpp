#include "robta/region.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace robta {

Region::Region(std::vector<long> iota, std::vector<std::vector<ClockId>> blocks)
    : iota_(std::move(iota)), blocks_(std::move(blocks)) {
  if (blocks_.empty()) blocks_.emplace_back();
  std::vector<int> seen(iota_.size(), 0);
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i > 0 && blocks_[i].empty()) throw ModelError("region block " + std::to_string(i) + " is empty");
    std::sort(blocks_[i].begin(), blocks_[i].end());
    for (ClockId c : blocks_[i]) {
      if (c >= iota_.size()) throw ModelError("region block mentions an unknown clock");
      ++seen[c];
    }
  }
  for (std::size_t c = 0; c < seen.size(); ++c) {
    if (seen[c] != 1) throw ModelError("region blocks do not partition the clocks");
    if (iota_[c] < 0) throw ModelError("negative integral part in region");
  }
}

std::size_t Region::block_of(ClockId x) const {
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    if (std::binary_search(blocks_[i].begin(), blocks_[i].end(), x)) return i;
  throw ModelError("clock not in region");
}

bool Region::contains(const Valuation& v) const {
  if (v.size() != iota_.size()) return false;
  for (const auto& x : v.values)
    if (x < 0) return false;
  return region_of(v) == *this;
}

std::vector<Valuation> Region::corners() const {
  std::size_t m = dimension();
  std::vector<Valuation> out;
  for (std::size_t i = 0; i <= m; ++i) {
    Valuation c = Valuation::zero(iota_.size());
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (ClockId x : blocks_[b]) c[x] = iota_[x] + (b > m - i ? 1 : 0);
    out.push_back(std::move(c));
  }
  return out;
}

Valuation Region::combine(const std::vector<Rational>& weights) const {
  auto cs = corners();
  if (weights.size() != cs.size()) throw ModelError("weight vector does not match region dimension");
  Valuation v = Valuation::zero(iota_.size());
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t x = 0; x < v.size(); ++x) v[x] += weights[i] * cs[i][x];
  for (auto& q : v.values) q.canonicalize();
  return v;
}

Valuation Region::representative() const {
  std::size_t k = dimension() + 1;
  return combine(std::vector<Rational>(k, Rational(1, k)));
}

Dbm Region::to_dbm() const {
  Dbm z(iota_.size());
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (ClockId x : blocks_[b]) {
      if (b == 0) {
        z.constrain(x + 1, 0, Bound::le(iota_[x]));
        z.constrain(0, x + 1, Bound::le(-iota_[x]));
      } else {
        z.constrain(x + 1, 0, Bound::lt(iota_[x] + 1));
        z.constrain(0, x + 1, Bound::lt(-iota_[x]));
      }
    }
  // Fractional order: same block equal, lower block strictly smaller.
  for (std::size_t b = 1; b < blocks_.size(); ++b)
    for (ClockId x : blocks_[b])
      for (std::size_t b2 = 1; b2 < blocks_.size(); ++b2)
        for (ClockId y : blocks_[b2]) {
          if (x == y) continue;
          Rational d = iota_[x] - iota_[y];
          if (b == b2) z.constrain(x + 1, y + 1, Bound::le(d));
          else if (b < b2) z.constrain(x + 1, y + 1, Bound::lt(d));
          else z.constrain(x + 1, y + 1, Bound::lt(d + 1));
        }
  z.canonicalize();
  return z;
}

std::string Region::to_string(const ClockSet& clocks) const {
  Guard g;
  for (ClockId x = 0; x < iota_.size(); ++x) {
    AtomicConstraint a;
    a.clock = x;
    if (block_of(x) == 0) {
      a.lower = a.upper = ConstraintBound{iota_[x], false};
    } else {
      a.lower = ConstraintBound{iota_[x], true};
      a.upper = ConstraintBound{iota_[x] + 1, true};
    }
    g.atoms.push_back(a);
  }
  for (std::size_t b = 1; b < blocks_.size(); ++b) {
    const auto& blk = blocks_[b];
    for (std::size_t k = 1; k < blk.size(); ++k) {
      AtomicConstraint a;
      a.clock = blk[k - 1];
      a.minus = blk[k];
      a.lower = a.upper = ConstraintBound{iota_[blk[k - 1]] - iota_[blk[k]], false};
      g.atoms.push_back(a);
    }
    if (b + 1 < blocks_.size()) {
      AtomicConstraint a;
      a.clock = blk[0];
      a.minus = blocks_[b + 1][0];
      a.upper = ConstraintBound{iota_[blk[0]] - iota_[blocks_[b + 1][0]], true};
      g.atoms.push_back(a);
    }
  }
  return robta::to_string(g, clocks);
}

Region region_of(const Valuation& v) {
  std::vector<long> iota(v.size());
  std::vector<std::pair<Rational, ClockId>> fracs;
  std::vector<std::vector<ClockId>> blocks(1);
  for (ClockId x = 0; x < v.size(); ++x) {
    if (v[x] < 0) throw ModelError("negative clock value");
    iota[x] = floor_of(v[x]);
    Rational f = fract(v[x]);
    if (f == 0) blocks[0].push_back(x);
    else fracs.emplace_back(f, x);
  }
  std::sort(fracs.begin(), fracs.end());
  for (std::size_t k = 0; k < fracs.size(); ++k) {
    if (k == 0 || fracs[k].first != fracs[k - 1].first) blocks.emplace_back();
    blocks.back().push_back(fracs[k].second);
  }
  return Region(std::move(iota), std::move(blocks));
}

std::vector<Rational> corner_weights(const Valuation& v, const Region& r) {
  std::size_t m = r.dimension();
  std::vector<Rational> f(m + 2);
  f[0] = 0;
  f[m + 1] = 1;
  for (std::size_t j = 1; j <= m; ++j) f[j] = fract(v[r.block(j)[0]]);
  std::vector<Rational> lambda(m + 1);
  for (std::size_t i = 0; i <= m; ++i) {
    lambda[i] = f[m - i + 1] - f[m - i];
    lambda[i].canonicalize();
  }
  return lambda;
}

std::vector<Rational> corner_weights(const Valuation& v) { return corner_weights(v, region_of(v)); }

std::optional<Region> immediate_time_successor(const Region& r, int bound) {
  auto iota = r.iota();
  auto blocks = r.blocks();
  if (r.punctual()) {
    for (ClockId x : blocks[0])
      if (iota[x] >= bound) return std::nullopt;
    blocks.insert(blocks.begin(), std::vector<ClockId>{});
    return Region(std::move(iota), std::move(blocks));
  }
  if (r.dimension() == 0) return std::nullopt;  // no clocks at all
  std::vector<ClockId> top = blocks.back();
  blocks.pop_back();
  for (ClockId x : top) iota[x] += 1;
  blocks[0] = top;
  return Region(std::move(iota), std::move(blocks));
}

std::vector<Region> time_successors(const Region& r, int bound) {
  std::vector<Region> out{r};
  while (auto next = immediate_time_successor(out.back(), bound)) out.push_back(*next);
  return out;
}

bool is_time_successor(const Region& r, const Region& r2, int bound) {
  auto chain = time_successors(r, bound);
  return std::find(chain.begin(), chain.end(), r2) != chain.end();
}

std::optional<Rational> delay_into(const Valuation& v, const Region& target, int bound) {
  std::vector<Rational> ts;
  for (const auto& x : v.values)
    for (long k = floor_of(x); k <= bound; ++k)
      if (Rational(k) >= x) ts.push_back(Rational(k) - x);
  ts.push_back(0);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (int mid = 0; mid < 2; ++mid) {
      if (mid && i + 1 == ts.size()) break;
      Rational d = mid ? Rational((ts[i] + ts[i + 1]) / 2) : ts[i];
      Valuation w = shifted(v, d);
      if (!within_bound(w, bound)) return std::nullopt;
      if (target.contains(w)) return d;
    }
  }
  return std::nullopt;
}

Region region_reset(const Region& r, const std::vector<ClockId>& resets) {
  if (resets.empty()) return r;
  auto iota = r.iota();
  std::vector<std::vector<ClockId>> blocks;
  for (std::size_t b = 0; b < r.blocks().size(); ++b) {
    std::vector<ClockId> kept;
    for (ClockId x : r.block(b))
      if (std::find(resets.begin(), resets.end(), x) == resets.end()) kept.push_back(x);
    if (b == 0 || !kept.empty()) blocks.push_back(std::move(kept));
  }
  for (ClockId x : resets) {
    iota[x] = 0;
    blocks[0].push_back(x);
  }
  return Region(std::move(iota), std::move(blocks));
}

bool region_satisfies(const Region& r, const Guard& g) { return satisfies(r.representative(), g); }

std::vector<Region> all_regions(std::size_t clocks, int bound) {
  std::vector<Region> out;
  std::vector<std::size_t> rank(clocks);
  std::vector<long> iota(clocks);
  std::function<void(std::size_t)> ranks = [&](std::size_t x) {
    if (x < clocks) {
      for (std::size_t k = 0; k <= clocks; ++k) {
        rank[x] = k;
        ranks(x + 1);
      }
      return;
    }
    std::size_t m = 0;
    for (auto k : rank) m = std::max(m, k);
    std::vector<std::vector<ClockId>> blocks(m + 1);
    for (ClockId c = 0; c < clocks; ++c) blocks[rank[c]].push_back(c);
    for (std::size_t b = 1; b <= m; ++b)
      if (blocks[b].empty()) return;
    std::function<void(std::size_t)> ints = [&](std::size_t c) {
      if (c == clocks) {
        out.emplace_back(iota, blocks);
        return;
      }
      long top = rank[c] == 0 ? bound : bound - 1;
      for (long k = 0; k <= top; ++k) {
        iota[c] = k;
        ints(c + 1);
      }
    };
    ints(0);
  };
  ranks(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Region> regions_in(const Guard& g, std::size_t clocks, int bound) {
  std::vector<Region> out;
  for (auto& r : all_regions(clocks, bound))
    if (region_satisfies(r, g)) out.push_back(std::move(r));
  return out;
}

std::optional<Region> region_from_guard(const Guard& g, std::size_t clocks, int bound) {
  Dbm z = Dbm::from_guard(g, clocks, bound);
  if (z.empty()) return std::nullopt;
  Region r = region_of(z.sample_point());
  if (r.to_dbm() == z) return r;
  return std::nullopt;
}

std::string to_string(const RegionState& s, const TimedAutomaton& a) {
  return a.location_name(s.location) + ": " + s.region.to_string(a.clocks());
}

std::vector<AtomicStep> atomic_steps(const TimedAutomaton& a, const RegionState& s) {
  std::vector<AtomicStep> out;
  for (const auto& r2 : time_successors(s.region, a.bound()))
    for (EdgeId e : a.outgoing(s.location)) {
      const Edge& edge = a.edge(e);
      if (!region_satisfies(r2, edge.guard)) continue;
      out.push_back(AtomicStep{s, r2, e, RegionState{edge.target, region_reset(r2, edge.resets)}});
    }
  return out;
}

std::string check_well_formed(const TimedAutomaton& a, const RegionPath& path) {
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto& st = path[k];
    std::string at = "step " + std::to_string(k) + ": ";
    if (st.edge >= a.edges().size()) return at + "unknown edge";
    const Edge& e = a.edge(st.edge);
    if (e.source != st.source.location || e.target != st.target.location) return at + "edge does not match locations";
    if (!is_time_successor(st.source.region, st.delay_target, a.bound()))
      return at + "delay target is not a time-successor";
    if (!region_satisfies(st.delay_target, e.guard)) return at + "guard does not hold on the delay target";
    if (region_reset(st.delay_target, e.resets) != st.target.region) return at + "target is not the reset image";
    if (k + 1 < path.size() && !(path[k + 1].source == st.target)) return at + "next step does not start here";
  }
  return {};
}

std::vector<RegionState> initial_states(const TimedAutomaton& a) {
  std::vector<RegionState> out;
  if (a.initial_constraint()) {
    for (auto& r : regions_in(*a.initial_constraint(), a.clock_count(), a.bound()))
      out.push_back(RegionState{a.initial(), std::move(r)});
  } else {
    out.push_back(RegionState{a.initial(), region_of(Valuation::zero(a.clock_count()))});
  }
  return out;
}

RegionGraph build_region_automaton(const TimedAutomaton& a) {
  RegionGraph g;
  std::deque<std::size_t> work;
  auto intern = [&](const RegionState& s) {
    auto [it, fresh] = g.index.emplace(s, g.states.size());
    if (fresh) {
      g.states.push_back(s);
      work.push_back(it->second);
    }
    return it->second;
  };
  for (const auto& s : initial_states(a)) g.initial.push_back(intern(s));
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    RegionState s = g.states[i];
    for (const auto& r2 : time_successors(s.region, a.bound())) {
      std::size_t j = intern(RegionState{s.location, r2});
      g.transitions.push_back({i, j, RegionGraph::Kind::Delay, 0});
    }
    for (EdgeId e : a.outgoing(s.location)) {
      const Edge& edge = a.edge(e);
      if (!region_satisfies(s.region, edge.guard)) continue;
      std::size_t j = intern(RegionState{edge.target, region_reset(s.region, edge.resets)});
      g.transitions.push_back({i, j, RegionGraph::Kind::Edge, e});
    }
  }
  return g;
}

}  // namespace robta
