#pragma once

// Shared fixtures for the unit and acceptance tests: figure models, seeded
// random data, a generated path corpus, and oracles written independently of
// the library code they check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "robta/orbit.hpp"
#include "robta/parser.hpp"
#include "robta/region.hpp"

namespace robta::testing {

TimedAutomaton load_model(const std::string& name);  // e.g. "fig3.ta"
/// Same automaton text with a different bound line.
TimedAutomaton load_model_with_bound(const std::string& name, int bound);
std::string model_path(const std::string& name);

using Rng = std::mt19937_64;

Rational random_rational(Rng& rng, long den, long lo_num, long hi_num);  // uniform k/den in [lo_num/den, hi_num/den]
Valuation random_valuation(Rng& rng, std::size_t clocks, int bound, long den = 64);
/// A uniformly drawn point of r: random positive corner weights, combined.
Valuation random_point(Rng& rng, const Region& r, long den = 97);

/// Random bounded automaton with 1..3 clocks and bound 1..3 whose guards mix
/// punctual and non-punctual atoms.
TimedAutomaton random_automaton(Rng& rng);

struct CorpusPath {
  TimedAutomaton automaton;
  RegionPath path;
};

/// At least `robust` robust and `fragile` non-robust well-formed paths over
/// random automata.
std::vector<CorpusPath> path_corpus(std::uint64_t seed, std::size_t robust, std::size_t fragile);

// ------------------------------------------------------------------ oracles

/// Region built straight from floors and fractional parts.
Region region_oracle(const Valuation& v);

/// Delay relation composed from immediate time-successor steps; each step
/// relates c to c' when c' - c is 0 or 1 on every clock alike. For r2 = r the
/// in-region delay: identity plus c_0 -> c_m when r is not punctual.
BoolMatrix delay_relation_oracle(const Region& r, const Region& r2, int bound);

/// Punctuality from a single DBM query: a guard whose zone has positive
/// extent along the diagonal has extent at least 1 (integer constants), so
/// shrinking by 1/4 leaves something.
Punctuality punctuality_oracle(const Guard& g, std::size_t clocks, int bound);

bool equivalence_oracle(const BoolMatrix& m);
bool non_strong_weak_component_oracle(const BoolMatrix& m);

/// Minimal k ≤ limit with m^k an equivalence relation (0 if none), and the
/// same for a weak component that is not strong.
struct PowerScan {
  std::size_t first_cluster = 0;
  std::size_t first_doomed = 0;
};
PowerScan scan_powers(const BoolMatrix& m, std::size_t limit);

std::size_t factorial(std::size_t n);

/// Coloring of corners 0..m from splitting positions P:
/// C_0 = [0,p_0] ∪ (p_k,m], C_j = (p_{j-1},p_j], renumbered by first appearance.
std::vector<std::size_t> coloring_from_positions(std::size_t m, const std::vector<std::size_t>& positions);
/// Every distinct coloring produced by some non-empty P ⊆ {0..m}.
std::vector<std::vector<std::size_t>> interval_colorings(std::size_t m);
/// The cluster graph whose complete components are the color classes.
BoolMatrix cluster_of(const std::vector<std::size_t>& color);
/// 0 < x_0 < ... < x_{d-1} < 1 over d clocks; the origin of one clock for d = 0.
Region open_region(std::size_t d);
/// Points of r whose coordinates are k/d in [0, bound] with d ≤ max_den.
std::vector<Valuation> grid_points(const Region& r, long max_den, int bound);

}  // namespace robta::testing
