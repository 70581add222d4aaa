#include "robta/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <thread>

namespace robta {

std::vector<AtomicStep> robust_steps(const TimedAutomaton& a, const RegionState& s) {
  std::vector<AtomicStep> out;
  for (auto& st : atomic_steps(a, s))
    if (is_robust_step(a, st)) out.push_back(std::move(st));
  return out;
}

RobustReach robust_reachable(const TimedAutomaton& a, std::size_t max_states) {
  RobustReach out;
  std::map<RegionState, std::size_t> index;
  std::deque<std::size_t> work;
  auto visit = [&](const RegionState& s, RegionPath prefix) {
    if (index.count(s)) return;
    if (out.states.size() >= max_states) {
      out.budget_exceeded = true;
      return;
    }
    index.emplace(s, out.states.size());
    work.push_back(out.states.size());
    out.states.push_back(s);
    out.prefixes.push_back(std::move(prefix));
  };
  for (const auto& s : initial_states(a)) visit(s, {});
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    for (auto& st : robust_steps(a, out.states[i])) {
      RegionPath p = out.prefixes[i];
      RegionState t = st.target;
      p.push_back(std::move(st));
      visit(t, std::move(p));
    }
  }
  return out;
}

CycleSearch search_cycles(const TimedAutomaton& a, const RegionState& anchor, std::size_t max_nodes,
                          std::optional<std::uint64_t> shuffle_seed) {
  CycleSearch out;
  struct Node {
    RegionState state;
    BoolMatrix rel;
    std::size_t parent;  // npos for seeds
    AtomicStep step;
  };
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<Node> nodes;
  std::set<std::pair<RegionState, BoolMatrix>> seen;
  std::set<BoolMatrix> fogs;
  std::deque<std::size_t> work;
  std::optional<std::mt19937_64> rng;
  if (shuffle_seed) rng.emplace(*shuffle_seed);

  auto path_to = [&](std::size_t i) {
    RegionPath p;
    for (; i != npos; i = nodes[i].parent) p.push_back(nodes[i].step);
    std::reverse(p.begin(), p.end());
    return p;
  };
  auto steps_from = [&](const RegionState& s) {
    auto v = robust_steps(a, s);
    if (rng) std::shuffle(v.begin(), v.end(), *rng);
    return v;
  };
  auto push = [&](RegionState s, BoolMatrix rel, std::size_t parent, AtomicStep st) {
    if (seen.count({s, rel})) return;
    if (nodes.size() >= max_nodes) {
      out.budget_exceeded = true;
      return;
    }
    seen.emplace(s, rel);
    nodes.push_back(Node{std::move(s), std::move(rel), parent, std::move(st)});
    std::size_t i = nodes.size() - 1;
    work.push_back(i);
    if (nodes[i].state == anchor && fogs.insert(nodes[i].rel).second) out.cycles.emplace_back(nodes[i].rel, path_to(i));
  };

  for (auto& st : steps_from(anchor)) {
    BoolMatrix rel = step_relation(a, st);
    RegionState t = st.target;
    push(std::move(t), std::move(rel), npos, std::move(st));
  }
  while (!work.empty()) {
    std::size_t i = work.front();
    work.pop_front();
    for (auto& st : steps_from(nodes[i].state)) {
      BoolMatrix rel = nodes[i].rel * step_relation(a, st);
      RegionState t = st.target;
      push(std::move(t), std::move(rel), i, std::move(st));
    }
  }
  out.nodes = nodes.size();
  return out;
}

RegionPath repeat(const RegionPath& cycle, std::size_t k) {
  RegionPath out;
  out.reserve(cycle.size() * k);
  for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), cycle.begin(), cycle.end());
  return out;
}

Dbm certificate_interior(const LassoWitness& w) { return interior_zone(w.anchor.region, w.eta); }

Dbm certificate_slice_zone(const LassoWitness& w) {
  return intersect(certificate_interior(w), slice_to_zone(w.partition, w.slice));
}

namespace {

// Exclusive upper bound on δ for the three certificate conditions at margin
// eta, or a failure message.
struct BoundCheck {
  std::string failure;
  std::optional<Rational> below;

  void cap(const std::optional<Rational>& d) {
    if (d && (!below || *d < *below)) below = *d;
  }
};

BoundCheck certificate_bound(const TimedAutomaton& a, const RegionPath& prefix, const RegionPath& loop,
                             const Dbm& n, const Dbm& ns) {
  BoundCheck out;
  if (n.empty() || ns.empty()) {
    out.failure = "interior zone or slice zone is empty";
    return out;
  }
  auto inv = included_for_small_delta(n, shrunk_cpre_path(a, loop, ShrunkDbm(n)));
  if (!inv.holds) {
    out.failure = "interior zone is not contained in its own controllable predecessor";
    return out;
  }
  out.cap(inv.below);
  auto sl = included_for_small_delta(ns, shrunk_cpre_path(a, loop, ShrunkDbm(ns)));
  if (!sl.holds) {
    out.failure = "slice zone is not contained in its own controllable predecessor";
    return out;
  }
  out.cap(sl.below);
  if (!prefix.empty()) {
    ShrunkDbm pre = shrunk_cpre_path(a, prefix, ShrunkDbm(n));
    if (pre.empty()) {
      out.failure = "interior zone is not robustly reachable along the prefix";
      return out;
    }
    out.cap(pre.limit());
  }
  return out;
}

Rational eta_at(std::size_t m, unsigned t) {
  Rational e(1, 4 * (m + 1));
  for (unsigned i = 0; i < t; ++i) e /= 2;
  e.canonicalize();
  return e;
}

}  // namespace

std::optional<CertifiedBounds> certify(const TimedAutomaton& a, const RegionState& anchor, const RegionPath& prefix,
                                       const RegionPath& cycle, std::size_t k, const CornerPartition& partition) {
  const Region& r = anchor.region;
  RegionPath loop = repeat(cycle, k);
  auto w = barycentric_slice(partition);
  Dbm s = slice_to_zone(partition, w);
  for (unsigned t = 0; t <= 16; ++t) {
    Rational eta = eta_at(r.dimension(), t);
    Dbm n = interior_zone(r, eta);
    auto b = certificate_bound(a, prefix, loop, n, intersect(n, s));
    if (!b.failure.empty()) continue;
    Rational d = b.below ? std::min(*b.below, Rational(2)) : Rational(2);
    d /= 2;
    d.canonicalize();
    return CertifiedBounds{eta, w, d};
  }
  return std::nullopt;
}

namespace {

struct Candidate {
  std::size_t cycle_length;
  std::size_t anchor;
  std::size_t order;
  BoolMatrix fog;
  RegionPath cycle;
  std::size_t k;
};

}  // namespace

Verdict decide(const TimedAutomaton& a, const SynthesisOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  v.initial_constraint = a.initial_constraint().has_value();
  RobustReach reach = robust_reachable(a, options.budget.max_states);
  v.stats.regions = reach.states.size();

  std::vector<std::size_t> anchors;
  for (std::size_t i = 0; i < reach.states.size(); ++i)
    if (a.is_buchi(reach.states[i].location)) anchors.push_back(i);
  v.stats.anchors = anchors.size();

  std::vector<AnchorReport> reports(anchors.size());
  std::vector<CycleSearch> searches(anchors.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      std::size_t j = next.fetch_add(1);
      if (j >= anchors.size()) return;
      try {
        const RegionState& anchor = reach.states[anchors[j]];
        std::optional<std::uint64_t> seed;
        if (options.shuffle_seed) seed = *options.shuffle_seed + j;
        searches[j] = search_cycles(a, anchor, options.budget.max_fogs, seed);
        AnchorReport& rep = reports[j];
        rep.anchor = anchor;
        rep.search_nodes = searches[j].nodes;
        rep.budget_exceeded = searches[j].budget_exceeded;
        for (const auto& [fog, cycle] : searches[j].cycles)
          rep.fogs.push_back(FogReport{fog, iterate_classify(FoldedOrbitGraph{anchor.region, fog}), cycle.size()});
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(anchors.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  bool capped = reach.budget_exceeded;
  std::vector<Candidate> candidates;
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    capped = capped || reports[j].budget_exceeded;
    v.stats.fogs += reports[j].fogs.size();
    v.stats.search_nodes += reports[j].search_nodes;
    for (std::size_t i = 0; i < reports[j].fogs.size(); ++i) {
      const auto& f = reports[j].fogs[i];
      if (f.iteration.kind != IterationClass::Kind::ClusterAt) continue;
      candidates.push_back(Candidate{f.cycle_length, j, i, f.fog, searches[j].cycles[i].second, f.iteration.k});
    }
  }
  // Discovery order depends on the exploration order, so ties fall back to
  // comparing the cycles themselves to keep the witness choice stable.
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.cycle_length != y.cycle_length) return x.cycle_length < y.cycle_length;
    if (x.anchor != y.anchor) return x.anchor < y.anchor;
    if (x.fog != y.fog) return x.fog < y.fog;
    return x.order < y.order;
  });

  std::size_t uncertified = 0;
  for (const auto& c : candidates) {
    const RegionState& anchor = reach.states[anchors[c.anchor]];
    const RegionPath& prefix = reach.prefixes[anchors[c.anchor]];
    auto partition = cluster_corner_partition(fog_power(FoldedOrbitGraph{anchor.region, c.fog}, c.k));
    auto cert = certify(a, anchor, prefix, c.cycle, c.k, partition);
    if (!cert) {
      ++uncertified;
      continue;
    }
    v.outcome = Verdict::Outcome::Controllable;
    v.witness = LassoWitness{anchor, prefix, c.cycle, c.fog, c.k, partition, cert->slice, cert->eta, cert->delta0};
    break;
  }
  if (!v.witness) {
    if (uncertified > 0) {
      v.outcome = Verdict::Outcome::ResourceCap;
      v.note = std::to_string(uncertified) + " cluster cycle(s) found but no certificate margin was found";
    } else if (capped) {
      v.outcome = Verdict::Outcome::ResourceCap;
      v.note = "search budget exhausted before a winning lasso was found";
    } else {
      v.outcome = Verdict::Outcome::NotControllable;
    }
  }
  v.anchors = std::move(reports);
  v.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

std::vector<std::string> validate(const LassoWitness& w, const TimedAutomaton& a) {
  std::vector<std::string> bad;
  auto fail = [&](std::string s) { bad.push_back(std::move(s)); };
  if (w.anchor.location >= a.locations().size()) {
    fail("anchor location does not exist");
    return bad;
  }
  if (!a.is_buchi(w.anchor.location)) fail("anchor location is not a Büchi location");

  auto inits = initial_states(a);
  const RegionState& start = w.prefix.empty() ? w.anchor : w.prefix.front().source;
  if (std::find(inits.begin(), inits.end(), start) == inits.end()) fail("prefix does not start at an initial state");
  if (!w.prefix.empty()) {
    if (!(w.prefix.back().target == w.anchor)) fail("prefix does not end at the anchor");
    if (auto e = check_well_formed(a, w.prefix); !e.empty()) fail("prefix is not well formed: " + e);
    else if (!is_robust(a, w.prefix)) fail("prefix is not robust");
  }

  bool cycle_ok = false;
  if (w.cycle.empty()) {
    fail("cycle is empty");
  } else if (!(w.cycle.front().source == w.anchor) || !(w.cycle.back().target == w.anchor)) {
    fail("cycle does not start and end at the anchor");
  } else if (auto e = check_well_formed(a, w.cycle); !e.empty()) {
    fail("cycle is not well formed: " + e);
  } else {
    cycle_ok = true;
    if (!is_robust(a, w.cycle)) fail("cycle is not robust");
  }
  if (!cycle_ok) return bad;

  FoldedOrbitGraph f = fog_of_cycle(a, w.cycle);
  if (f.relation != w.fog) fail("recorded folded orbit graph differs from the cycle's");
  auto cls = iterate_classify(f);
  if (cls.kind != IterationClass::Kind::ClusterAt || cls.k != w.k)
    fail("iterate_classify gives " + cls.to_string() + ", witness claims ClusterAt(" + std::to_string(w.k) + ")");
  FoldedOrbitGraph fk = fog_power(f, w.k);
  if (!is_cluster(fk)) {
    fail("is_cluster fails on the " + std::to_string(w.k) + "-th iterate");
    return bad;
  }
  if (cluster_corner_partition(fk) != w.partition) fail("corner partition differs from the SCCs of the iterate");
  if (w.partition.region != w.anchor.region) return bad;
  if (w.slice != barycentric_slice(w.partition)) fail("slice weights are not the barycentric slice");
  if (w.eta <= 0) {
    fail("interior margin is not positive");
    return bad;
  }
  if (w.delta0 <= 0) {
    fail("delta0 is not positive");
    return bad;
  }

  RegionPath loop = repeat(w.cycle, w.k);
  Dbm n = certificate_interior(w);
  Dbm ns = certificate_slice_zone(w);
  auto b = certificate_bound(a, w.prefix, loop, n, ns);
  if (!b.failure.empty()) fail(b.failure);
  else if (b.below && !(w.delta0 < *b.below))
    fail("delta0 " + to_string(w.delta0) + " is not below the certified bound " + to_string(*b.below));

  // Concrete recomputation at delta0.
  if (!cpre_path(a, loop, n, w.delta0).includes(n)) fail("interior inclusion fails at delta0");
  if (!ns.empty() && !cpre_path(a, loop, ns, w.delta0).includes(ns)) fail("slice inclusion fails at delta0");
  if (!w.prefix.empty() && cpre_path(a, w.prefix, n, w.delta0).empty())
    fail("prefix controllable predecessor is empty at delta0");
  return bad;
}

namespace {

bool extend_cycle(const TimedAutomaton& a, const RegionState& anchor, const std::vector<LocationId>& locs,
                  bool robust_only, RegionPath& path) {
  std::size_t k = path.size();
  const RegionState& here = k == 0 ? anchor : path.back().target;
  LocationId want = locs[(k + 1) % locs.size()];
  for (auto& st : atomic_steps(a, here)) {
    if (st.target.location != want || (robust_only && !is_robust_step(a, st))) continue;
    path.push_back(st);
    if (k + 1 == locs.size()) {
      if (path.back().target == anchor) return true;
    } else if (extend_cycle(a, anchor, locs, robust_only, path)) {
      return true;
    }
    path.pop_back();
  }
  return false;
}

}  // namespace

std::optional<RegionPath> cycle_through(const TimedAutomaton& a, const RegionState& anchor,
                                        const std::vector<LocationId>& locations, bool robust_only) {
  if (locations.empty() || locations[0] != anchor.location) return std::nullopt;
  RegionPath path;
  if (!extend_cycle(a, anchor, locations, robust_only, path)) return std::nullopt;
  return path;
}

}  // namespace robta
