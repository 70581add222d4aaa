#include "robta/game.hpp"

#include <algorithm>
#include <sstream>

#include "robta/io.hpp"

namespace robta {

// ---------------------------------------------------------------- windows

bool DelayWindow::contains(const Rational& t) const {
  bool above = t > lo || (!lo_strict && t == lo);
  bool below = !hi || t < *hi || (!hi_strict && t == *hi);
  return above && below;
}

bool DelayWindow::empty() const { return hi && (lo > *hi || (lo == *hi && (lo_strict || hi_strict))); }

namespace {

bool satisfied(const Rational& lhs, const Bound& b) { return b.inf || lhs < b.value || (!b.strict && lhs == b.value); }

}  // namespace

std::optional<DelayWindow> delay_window(const Dbm& z, const Valuation& v) {
  if (z.empty()) return std::nullopt;
  std::size_t n = z.clocks();
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      if (i != j && !satisfied(v[i - 1] - v[j - 1], z.at(i, j))) return std::nullopt;
  DelayWindow w{Rational(0), false, std::nullopt, false};
  for (std::size_t i = 1; i <= n; ++i) {
    const Bound& ub = z.at(i, 0);
    if (!ub.inf) {
      Rational c = ub.value - v[i - 1];
      if (!w.hi || c < *w.hi) {
        w.hi = c;
        w.hi_strict = ub.strict;
      } else if (c == *w.hi) {
        w.hi_strict = w.hi_strict || ub.strict;
      }
    }
    const Bound& lb = z.at(0, i);
    if (!lb.inf) {
      Rational c = -lb.value - v[i - 1];
      if (c > w.lo) {
        w.lo = c;
        w.lo_strict = lb.strict;
      } else if (c == w.lo) {
        w.lo_strict = w.lo_strict || lb.strict;
      }
    }
  }
  if (w.empty()) return std::nullopt;
  return w;
}

std::optional<DelayWindow> robust_delays(const DelayWindow& w, const Rational& delta) {
  DelayWindow d = w;
  d.lo = Rational(w.lo + delta);
  if (w.hi) d.hi = Rational(*w.hi - delta);
  if (delta > d.lo) {
    d.lo = delta;
    d.lo_strict = false;
  }
  if (d.empty()) return std::nullopt;
  return d;
}

namespace {

Rational upper_end(const DelayWindow& w) { return w.hi ? *w.hi : Rational(w.lo + 1); }

}  // namespace

Rational pick(const DelayWindow& w, Pick p) {
  Rational hi = upper_end(w);
  Rational len = hi - w.lo;
  if (len == 0) return w.lo;
  Rational t;
  switch (p) {
    case Pick::Earliest: t = w.lo_strict ? Rational(w.lo + len / 100) : w.lo; break;
    case Pick::Latest: t = (w.hi && w.hi_strict) ? Rational(hi - len / 100) : hi; break;
    case Pick::Midpoint: t = (w.lo + hi) / 2; break;
  }
  t.canonicalize();
  return t;
}

Rational pick_fraction(const DelayWindow& w, const Rational& u) {
  Rational hi = upper_end(w);
  Rational len = hi - w.lo;
  Rational t = w.lo + u * len;
  if (w.lo_strict && t == w.lo) t = w.lo + len / 100;
  if (w.hi && w.hi_strict && t == hi) t = hi - len / 100;
  t.canonicalize();
  return t;
}

// ---------------------------------------------------------------- moves

std::string check_move(const TimedAutomaton& a, const Valuation& v, LocationId l, const Move& m, const Rational& delta) {
  if (m.edge >= a.edges().size()) return "unknown edge";
  const Edge& e = a.edge(m.edge);
  if (e.source != l) return "edge does not leave the current location";
  if (m.delay < 0) return "negative delay";
  if (e.punctual()) {
    Valuation w = shifted(v, m.delay);
    if (!within_bound(w, a.bound())) return "delay leaves the clock bound";
    if (!satisfies(w, e.guard)) return "punctual guard does not hold after the delay";
    return {};
  }
  if (m.delay < delta) return "delay below delta on a non-punctual edge";
  auto win = delay_window(Dbm::from_guard(e.guard, a.clock_count(), a.bound()), v);
  if (!win || !win->contains(m.delay - delta) || !win->contains(m.delay + delta))
    return "guard does not hold on the whole perturbation interval";
  return {};
}

namespace {

PlayState apply(const TimedAutomaton& a, const PlayState& s, EdgeId edge, const Rational& actual) {
  const Edge& e = a.edge(edge);
  PlayState out;
  out.location = e.target;
  out.valuation = reset(shifted(s.valuation, actual), e.resets);
  return out;
}

}  // namespace

PlayState step(const TimedAutomaton& a, const PlayState& s, const Move& m, const Rational& delta) {
  if (s.turn != PlayState::Turn::Controller) throw IllegalMove("not Controller's turn");
  if (auto err = check_move(a, s.valuation, s.location, m, delta); !err.empty()) throw IllegalMove(err);
  if (a.edge(m.edge).punctual()) return apply(a, s, m.edge, m.delay);
  PlayState out = s;
  out.turn = PlayState::Turn::Perturbator;
  out.pending = m;
  return out;
}

PlayState step(const TimedAutomaton& a, const PlayState& s, const Rational& actual, const Rational& delta) {
  if (s.turn != PlayState::Turn::Perturbator || !s.pending) throw IllegalMove("not Perturbator's turn");
  if (actual < s.pending->delay - delta || actual > s.pending->delay + delta)
    throw IllegalMove("perturbation outside [d-delta, d+delta]");
  return apply(a, s, s.pending->edge, actual);
}

// ---------------------------------------------------------------- perturbators

Rational sigma_epsilon(const Rational& delta, std::size_t clocks) {
  Rational e = delta / (2 * (clocks + 1));
  e.canonicalize();
  return e;
}

namespace {

class SigmaP : public Perturbator {
 public:
  SigmaP(std::size_t clocks, Rational delta) : clocks_(clocks), delta_(std::move(delta)) {}

  Rational perturb(const PlayState& s) override {
    const Rational& d = s.pending->delay;
    Rational end = d + delta_;
    std::vector<Rational> cuts{d};
    for (const auto& x : s.valuation.values) {
      Rational at = x + d;
      mpz_class k = floor_of(at) + 1;
      Rational t = Rational(k) - x;
      if (t < end) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(end);
    Rational need = delta_ / (clocks_ + 1);
    for (std::size_t i = cuts.size() - 1; i > 0; --i)
      if (cuts[i] - cuts[i - 1] >= need) {
        Rational mid = (cuts[i] + cuts[i - 1]) / 2;
        mid.canonicalize();
        return mid;
      }
    return d;  // unreachable: |X| cuts leave some piece of length δ/(|X|+1)
  }
  std::string name() const override { return "sigma-p"; }

 private:
  std::size_t clocks_;
  Rational delta_;
};

class RandomPerturbator : public Perturbator {
 public:
  RandomPerturbator(Rational delta, std::uint64_t seed, unsigned grid) : delta_(std::move(delta)), rng_(seed), grid_(grid) {}

  Rational perturb(const PlayState& s) override {
    std::uniform_int_distribution<unsigned> pick(0, grid_);
    Rational t = s.pending->delay - delta_ + 2 * delta_ * Rational(pick(rng_), grid_);
    t.canonicalize();
    return t;
  }
  std::string name() const override { return "random"; }

 private:
  Rational delta_;
  std::mt19937_64 rng_;
  unsigned grid_;
};

class NoPerturbator : public Perturbator {
 public:
  Rational perturb(const PlayState& s) override { return s.pending->delay; }
  std::string name() const override { return "none"; }
};

}  // namespace

std::unique_ptr<Perturbator> sigma_p(const TimedAutomaton& a, const Rational& delta) {
  return std::make_unique<SigmaP>(a.clock_count(), delta);
}

std::unique_ptr<Perturbator> random_perturbator(const Rational& delta, std::uint64_t seed, unsigned grid) {
  return std::make_unique<RandomPerturbator>(delta, seed, grid);
}

std::unique_ptr<Perturbator> no_perturbator() { return std::make_unique<NoPerturbator>(); }

// ---------------------------------------------------------------- controllers

namespace {

// Delay for `st` from v such that every perturbation lands in y, chosen by
// `choose` among the admissible delays.
template <class Choose>
std::optional<Move> delay_into_zone(const TimedAutomaton& a, const AtomicStep& st, const Dbm& y, const Valuation& v,
                                    const Rational& delta, Choose choose) {
  auto w = delay_window(y, v);
  if (!w) return std::nullopt;
  if (a.edge(st.edge).punctual()) return Move{pick(*w, Pick::Earliest), st.edge};
  auto d = robust_delays(*w, delta);
  if (!d) return std::nullopt;
  return Move{choose(*d), st.edge};
}

// Walks a fixed region path: `prefix` once, then `loop` forever.
class PathFollower {
 public:
  PathFollower(RegionPath prefix, RegionPath loop) : prefix_(std::move(prefix)), loop_(std::move(loop)) {}

  bool in_prefix() const { return pos_ < prefix_.size(); }
  std::size_t loop_index() const { return (pos_ - prefix_.size()) % loop_.size(); }
  const AtomicStep& current() const { return in_prefix() ? prefix_[pos_] : loop_[loop_index()]; }
  bool on_track() const { return on_track_; }
  std::size_t position() const { return pos_; }

  void advance(const AtomicStep& realized) {
    if (!(realized.target == current().target) || !(realized.source == current().source)) on_track_ = false;
    ++pos_;
  }

 private:
  RegionPath prefix_, loop_;
  std::size_t pos_ = 0;
  bool on_track_ = true;
};

std::vector<Dbm> cpre_chain(const TimedAutomaton& a, const RegionPath& path, const Dbm& goal, const Rational& delta) {
  std::vector<Dbm> z(path.size() + 1, goal);
  for (std::size_t j = path.size(); j > 0; --j) z[j - 1] = cpre_atomic(a, path[j - 1], z[j], delta);
  return z;
}

Dbm landing_zone(const TimedAutomaton& a, const AtomicStep& st, const Dbm& next) {
  const Edge& e = a.edge(st.edge);
  return intersect_guard(intersect(st.delay_target.to_dbm(), unreset(next, e.resets, a.bound())), e.guard);
}

class SliceController : public Controller {
 public:
  SliceController(const TimedAutomaton& a, const LassoWitness& w, const Rational& delta)
      : a_(a), delta_(delta), follow_(w.prefix, repeat(w.cycle, w.k)) {
    if (delta <= 0) throw IllegalMove("delta must be positive");
    if (delta > w.delta0) throw IllegalMove("delta exceeds the certified bound " + to_string(w.delta0));
    Dbm n = certificate_interior(w);
    RegionPath loop = repeat(w.cycle, w.k);
    prefix_targets_ = cpre_chain(a, w.prefix, n, delta);
    loop_targets_ = cpre_chain(a, loop, n, delta);
  }

  std::optional<Move> propose(const PlayState& s) override {
    if (!follow_.on_track()) return std::nullopt;
    const AtomicStep& st = follow_.current();
    if (s.location != st.source.location) return std::nullopt;
    const Dbm& next = follow_.in_prefix() ? prefix_targets_[follow_.position() + 1] : loop_targets_[follow_.loop_index() + 1];
    return delay_into_zone(a_, st, landing_zone(a_, st, next), s.valuation, delta_,
                           [](const DelayWindow& d) { return pick(d, Pick::Midpoint); });
  }

  void observe(const AtomicStep& realized) override { follow_.advance(realized); }
  std::string name() const override { return "slice"; }

 private:
  const TimedAutomaton& a_;
  Rational delta_;
  PathFollower follow_;
  std::vector<Dbm> prefix_targets_, loop_targets_;
};

class ScriptedController : public Controller {
 public:
  ScriptedController(const TimedAutomaton& a, RegionPath cycle, Rational delta, ScriptMode mode, std::uint64_t seed)
      : a_(a), delta_(std::move(delta)), mode_(mode), rng_(seed), follow_({}, std::move(cycle)) {}

  std::optional<Move> propose(const PlayState& s) override {
    if (!follow_.on_track()) return std::nullopt;
    const AtomicStep& st = follow_.current();
    if (s.location != st.source.location || !st.source.region.contains(s.valuation)) return std::nullopt;
    Dbm y = intersect_guard(st.delay_target.to_dbm(), a_.edge(st.edge).guard);
    return delay_into_zone(a_, st, y, s.valuation, delta_, [&](const DelayWindow& d) {
      switch (mode_) {
        case ScriptMode::Earliest: return pick(d, Pick::Earliest);
        case ScriptMode::Latest: return pick(d, Pick::Latest);
        case ScriptMode::Midpoint: return pick(d, Pick::Midpoint);
        case ScriptMode::Random: break;
      }
      std::uniform_int_distribution<unsigned> u(0, 1000);
      return pick_fraction(d, Rational(u(rng_), 1000));
    });
  }

  void observe(const AtomicStep& realized) override { follow_.advance(realized); }
  std::string name() const override { return "scripted"; }

 private:
  const TimedAutomaton& a_;
  Rational delta_;
  ScriptMode mode_;
  std::mt19937_64 rng_;
  PathFollower follow_;
};

class GreedyController : public Controller {
 public:
  GreedyController(const TimedAutomaton& a, Rational delta) : a_(a), delta_(std::move(delta)) {}

  std::optional<Move> propose(const PlayState& s) override {
    for (EdgeId e : a_.outgoing(s.location)) {
      const Edge& edge = a_.edge(e);
      auto w = delay_window(Dbm::from_guard(edge.guard, a_.clock_count(), a_.bound()), s.valuation);
      if (!w) continue;
      if (edge.punctual()) return Move{pick(*w, Pick::Earliest), e};
      if (auto d = robust_delays(*w, delta_)) return Move{pick(*d, Pick::Midpoint), e};
    }
    return std::nullopt;
  }
  std::string name() const override { return "greedy"; }

 private:
  const TimedAutomaton& a_;
  Rational delta_;
};

}  // namespace

std::unique_ptr<Controller> slice_controller(const TimedAutomaton& a, const LassoWitness& w, const Rational& delta) {
  return std::make_unique<SliceController>(a, w, delta);
}

std::unique_ptr<Controller> scripted_controller(const TimedAutomaton& a, const RegionPath& cycle,
                                                const Rational& delta, ScriptMode mode, std::uint64_t seed) {
  if (cycle.empty()) throw ModelError("empty cycle");
  return std::make_unique<ScriptedController>(a, cycle, delta, mode, seed);
}

std::unique_ptr<Controller> greedy_controller(const TimedAutomaton& a, const Rational& delta) {
  return std::make_unique<GreedyController>(a, delta);
}

Valuation slice_start(const TimedAutomaton& a, const LassoWitness& w, const Rational& delta) {
  Dbm n = certificate_interior(w);
  Dbm z = w.prefix.empty() ? n : cpre_path(a, w.prefix, n, delta);
  if (z.empty()) throw IllegalMove("no starting valuation at this delta");
  if (!a.initial_constraint()) return Valuation::zero(a.clock_count());
  return z.sample_point();
}

// ---------------------------------------------------------------- simulation

Rational LyapunovTracker::value(const Valuation& v, const Region& r) const {
  auto lambda = corner_weights(v, r);
  Rational s = 0;
  for (std::size_t i = 0; i < lambda.size(); ++i)
    if (in_i.at(i)) s += lambda[i];
  s.canonicalize();
  return s;
}

namespace {

bool edge_between(const BoolMatrix& fog, const std::vector<std::size_t>& color, std::size_t from, std::size_t to) {
  for (std::size_t i = 0; i < fog.rows(); ++i)
    for (std::size_t j = 0; j < fog.cols(); ++j)
      if (fog(i, j) && color[i] == from && color[j] == to) return true;
  return false;
}

}  // namespace

std::optional<std::vector<bool>> initial_escaping_scc(const BoolMatrix& fog) {
  auto color = scc_colors(fog);
  std::size_t k = *std::max_element(color.begin(), color.end()) + 1;
  for (std::size_t c = 0; c < k; ++c) {
    bool entered = false, leaves = false;
    for (std::size_t o = 0; o < k; ++o) {
      if (o == c) continue;
      entered = entered || edge_between(fog, color, o, c);
      leaves = leaves || edge_between(fog, color, c, o);
    }
    if (!entered && leaves) {
      std::vector<bool> in(color.size());
      for (std::size_t i = 0; i < color.size(); ++i) in[i] = color[i] == c;
      return in;
    }
  }
  return std::nullopt;
}

bool escapes(const BoolMatrix& fog, const std::vector<bool>& in_i) {
  auto color = scc_colors(fog);
  std::optional<std::size_t> c;
  for (std::size_t i = 0; i < color.size(); ++i)
    if (in_i[i]) {
      if (c && *c != color[i]) return false;
      c = color[i];
    }
  if (!c) return false;
  for (std::size_t i = 0; i < color.size(); ++i)
    if ((color[i] == *c) != in_i[i]) return false;
  for (std::size_t i = 0; i < fog.rows(); ++i)
    for (std::size_t j = 0; j < fog.cols(); ++j)
      if (fog(i, j) && in_i[i] && !in_i[j]) return true;
  return false;
}

const char* to_string(PlayTrace::Status s) {
  switch (s) {
    case PlayTrace::Status::BudgetExhausted: return "budget-exhausted";
    case PlayTrace::Status::Blocked: return "blocked";
    case PlayTrace::Status::IllegalMove: return "illegal-move";
  }
  return "?";
}

PlayTrace simulate(const TimedAutomaton& a, const GameConfig& cfg, Controller& cont, Perturbator& pert) {
  PlayTrace t;
  if (cfg.delta <= 0) throw IllegalMove("delta must be positive");
  PlayState s{cfg.start_location, cfg.start, PlayState::Turn::Controller, std::nullopt};
  RegionPath segment;

  auto visit = [&] {
    if (!cfg.anchor || !(RegionState{s.location, region_of(s.valuation)} == *cfg.anchor)) return;
    AnchorVisit v{t.visits.size(), t.steps.size(), s.valuation, {}, std::nullopt, std::nullopt, false};
    const Region& r = cfg.anchor->region;
    if (cfg.partition) v.slice = slice_of(s.valuation, *cfg.partition);
    if (cfg.lyapunov) v.lyapunov = cfg.lyapunov->value(s.valuation, r);
    if (!segment.empty() && segment.front().source == *cfg.anchor) {
      v.segment_fog = fog_of_cycle(a, segment).relation;
      v.segment_nonpunctual = std::any_of(segment.begin(), segment.end(),
                                          [&](const AtomicStep& st) { return !a.edge(st.edge).punctual(); });
    }
    segment.clear();
    t.visits.push_back(std::move(v));
  };

  visit();
  while (t.steps.size() < cfg.max_steps) {
    auto m = cont.propose(s);
    if (!m) {
      t.status = PlayTrace::Status::Blocked;
      t.message = cont.name() + " controller has no legal move";
      return t;
    }
    PlayState next;
    Rational actual = m->delay;
    bool perturbed = false;
    try {
      next = step(a, s, *m, cfg.delta);
      if (next.turn == PlayState::Turn::Perturbator) {
        actual = pert.perturb(next);
        perturbed = true;
        next = step(a, next, actual, cfg.delta);
      }
    } catch (const IllegalMove& e) {
      t.status = PlayTrace::Status::IllegalMove;
      t.message = e.what();
      return t;
    }
    AtomicStep realized{RegionState{s.location, region_of(s.valuation)},
                        region_of(shifted(s.valuation, actual)), m->edge,
                        RegionState{next.location, region_of(next.valuation)}};
    t.steps.push_back(TraceStep{t.steps.size(), s.location, s.valuation, *m, actual, perturbed, next.location,
                                next.valuation});
    cont.observe(realized);
    segment.push_back(std::move(realized));
    s = std::move(next);
    visit();
  }
  t.status = PlayTrace::Status::BudgetExhausted;
  return t;
}

namespace {

json values(const Valuation& v) {
  json out = json::array();
  for (const auto& q : v.values) out.push_back(to_string(q));
  return out;
}

}  // namespace

std::string trace_jsonl(const PlayTrace& t, const TimedAutomaton& a) {
  std::ostringstream out;
  for (const auto& s : t.steps)
    out << json{{"step", s.index},
                {"location", a.location_name(s.location)},
                {"valuation", values(s.before)},
                {"edge", s.move.edge},
                {"delay", to_string(s.move.delay)},
                {"actual", to_string(s.actual)},
                {"perturbed", s.perturbed},
                {"target", a.location_name(s.target)},
                {"after", values(s.after)}}
               .dump()
        << "\n";
  for (const auto& v : t.visits) {
    json j{{"visit", v.visit}, {"step", v.step}, {"valuation", values(v.valuation)}};
    if (!v.slice.empty()) {
      json w = json::array();
      for (const auto& q : v.slice) w.push_back(to_string(q));
      j["slice"] = w;
    }
    if (v.lyapunov) j["lyapunov"] = to_string(*v.lyapunov);
    if (v.segment_fog) j["segment_fog"] = v.segment_fog->to_string();
    out << j.dump() << "\n";
  }
  out << json{{"status", to_string(t.status)}, {"message", t.message}, {"steps", t.steps.size()},
              {"visits", t.visits.size()}}
             .dump()
      << "\n";
  return out.str();
}

std::string trace_csv(const PlayTrace& t) {
  std::ostringstream out;
  std::size_t k = 0;
  for (const auto& v : t.visits) k = std::max(k, v.slice.size());
  out << "visit,step";
  for (std::size_t i = 0; i < k; ++i) out << ",w" << i;
  out << ",L\n";
  for (const auto& v : t.visits) {
    out << v.visit << "," << v.step;
    for (std::size_t i = 0; i < k; ++i) out << "," << (i < v.slice.size() ? to_string(v.slice[i]) : "");
    out << "," << (v.lyapunov ? to_string(*v.lyapunov) : "") << "\n";
  }
  return out.str();
}

}  // namespace robta
