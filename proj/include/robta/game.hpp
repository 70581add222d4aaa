#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "robta/synthesis.hpp"

namespace robta {

class IllegalMove : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The delays t ≥ 0 with v+t inside a zone: an interval, possibly open at
/// either end. `hi` is unset when unbounded.
struct DelayWindow {
  Rational lo;
  bool lo_strict = false;
  std::optional<Rational> hi;
  bool hi_strict = false;

  bool contains(const Rational& t) const;
  bool empty() const;
};

std::optional<DelayWindow> delay_window(const Dbm& z, const Valuation& v);
/// {d ≥ delta | d-delta ∈ w and d+delta ∈ w}.
std::optional<DelayWindow> robust_delays(const DelayWindow& w, const Rational& delta);

enum class Pick { Earliest, Latest, Midpoint };
/// A point of a non-empty window; open ends are approached to within 1/100
/// of the window length. Unbounded windows are treated as [lo, lo+1].
Rational pick(const DelayWindow& w, Pick p);
/// lo + u·(hi-lo) for u ∈ [0,1], nudged inside open ends.
Rational pick_fraction(const DelayWindow& w, const Rational& u);

struct Move {
  Rational delay;
  EdgeId edge = 0;
};

struct PlayState {
  enum class Turn { Controller, Perturbator };
  LocationId location = 0;
  Valuation valuation;
  Turn turn = Turn::Controller;
  std::optional<Move> pending;
};

/// Empty when legal, otherwise the rule that is broken. Punctual edges need
/// v+d ⊨ g exactly; others need d ≥ δ and v+t ⊨ g for every t ∈ [d-δ, d+δ].
/// Clocks must stay within the bound throughout.
std::string check_move(const TimedAutomaton& a, const Valuation& v, LocationId l, const Move& m, const Rational& delta);

/// Controller's move. Punctual edges are applied at once and the turn stays
/// with Controller; otherwise the move becomes pending for Perturbator.
PlayState step(const TimedAutomaton& a, const PlayState& s, const Move& m, const Rational& delta);
/// Perturbator's answer d' ∈ [d-δ, d+δ] to the pending move.
PlayState step(const TimedAutomaton& a, const PlayState& s, const Rational& actual, const Rational& delta);

// ---------------------------------------------------------------- strategies

class Controller {
 public:
  virtual ~Controller() = default;
  /// nullopt: no move is available (the play is blocked).
  virtual std::optional<Move> propose(const PlayState& s) = 0;
  /// Called with each realized transition.
  virtual void observe(const AtomicStep&) {}
  virtual std::string name() const = 0;
};

class Perturbator {
 public:
  virtual ~Perturbator() = default;
  /// The actual delay for the pending move of s.
  virtual Rational perturb(const PlayState& s) = 0;
  virtual std::string name() const = 0;
};

/// Time progress guaranteed by sigma_p: δ / (2(|X|+1)).
Rational sigma_epsilon(const Rational& delta, std::size_t clocks);

/// Splits (d, d+δ) at the times where some clock crosses an integer, takes
/// the latest piece of length at least δ/(|X|+1) and answers its midpoint.
std::unique_ptr<Perturbator> sigma_p(const TimedAutomaton& a, const Rational& delta);
/// d' = d - δ + 2δ·k/grid with k uniform in [0, grid].
std::unique_ptr<Perturbator> random_perturbator(const Rational& delta, std::uint64_t seed, unsigned grid = 1000);
std::unique_ptr<Perturbator> no_perturbator();

/// Follows prefix·(cycle^k)^ω of a witness, keeping the valuation inside the
/// concrete CPre chain into the certificate's interior zone. Throws
/// IllegalMove if δ exceeds the certified bound.
std::unique_ptr<Controller> slice_controller(const TimedAutomaton& a, const LassoWitness& w, const Rational& delta);

enum class ScriptMode { Earliest, Latest, Midpoint, Random };
/// Repeats `cycle` forever from its first state, choosing delays that keep
/// every perturbation on the cycle's regions.
std::unique_ptr<Controller> scripted_controller(const TimedAutomaton& a, const RegionPath& cycle,
                                                const Rational& delta, ScriptMode mode, std::uint64_t seed = 0);
/// First outgoing edge with a legal delay; midpoint of its window.
std::unique_ptr<Controller> greedy_controller(const TimedAutomaton& a, const Rational& delta);

/// A valuation the slice controller can start from: the zero valuation, or
/// a point of the prefix CPre inside the initial constraint.
Valuation slice_start(const TimedAutomaton& a, const LassoWitness& w, const Rational& delta);

// ---------------------------------------------------------------- simulation

/// L_I(ν) = Σ_{c_i ∈ I} λ_i at the anchor region.
struct LyapunovTracker {
  std::vector<bool> in_i;

  Rational value(const Valuation& v, const Region& r) const;
};

/// An SCC with no incoming edge from other SCCs and an edge out of it.
std::optional<std::vector<bool>> initial_escaping_scc(const BoolMatrix& fog);
/// I is exactly an SCC of fog and some edge leaves it.
bool escapes(const BoolMatrix& fog, const std::vector<bool>& in_i);

struct GameConfig {
  Rational delta;
  std::size_t max_steps = 1000;
  LocationId start_location = 0;
  Valuation start;
  std::optional<RegionState> anchor;          // where diagnostics are recorded
  std::optional<CornerPartition> partition;   // slice weights at the anchor
  std::optional<LyapunovTracker> lyapunov;
};

struct TraceStep {
  std::size_t index;
  LocationId location;
  Valuation before;
  Move move;
  Rational actual;
  bool perturbed;
  LocationId target;
  Valuation after;
};

struct AnchorVisit {
  std::size_t visit;
  std::size_t step;  // number of steps taken so far
  Valuation valuation;
  std::vector<Rational> slice;
  std::optional<Rational> lyapunov;
  std::optional<BoolMatrix> segment_fog;  // of the realized path since the previous visit
  bool segment_nonpunctual = false;
};

struct PlayTrace {
  enum class Status { BudgetExhausted, Blocked, IllegalMove };
  Status status = Status::BudgetExhausted;
  std::string message;
  std::vector<TraceStep> steps;
  std::vector<AnchorVisit> visits;
};

const char* to_string(PlayTrace::Status s);

PlayTrace simulate(const TimedAutomaton& a, const GameConfig& cfg, Controller& cont, Perturbator& pert);

/// One JSON object per step, then one per anchor visit, then a summary line.
std::string trace_jsonl(const PlayTrace& t, const TimedAutomaton& a);
/// visit,step,w0..wk,L
std::string trace_csv(const PlayTrace& t);

}  // namespace robta
