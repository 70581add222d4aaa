#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "robta/dbm.hpp"
#include "robta/robust.hpp"

namespace robta::testing {

std::string model_path(const std::string& name) { return std::string(ROBTA_MODELS_DIR) + "/" + name; }

namespace {

std::string read_model(const std::string& name) {
  std::ifstream in(model_path(name));
  if (!in) throw std::runtime_error("missing model " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TimedAutomaton load_model(const std::string& name) { return parse_automaton(read_model(name)); }

TimedAutomaton load_model_with_bound(const std::string& name, int bound) {
  static const std::regex line(R"(^bound\s+\d+)", std::regex::multiline);
  return parse_automaton(std::regex_replace(read_model(name), line, "bound " + std::to_string(bound)));
}

Rational random_rational(Rng& rng, long den, long lo_num, long hi_num) {
  std::uniform_int_distribution<long> d(lo_num, hi_num);
  Rational q(d(rng), den);
  q.canonicalize();
  return q;
}

Valuation random_valuation(Rng& rng, std::size_t clocks, int bound, long den) {
  std::vector<Rational> v;
  for (std::size_t i = 0; i < clocks; ++i) v.push_back(random_rational(rng, den, 0, bound * den));
  return Valuation(v);
}

Valuation random_point(Rng& rng, const Region& r, long den) {
  std::uniform_int_distribution<long> d(1, den);
  std::vector<Rational> w(r.dimension() + 1);
  Rational total = 0;
  for (auto& x : w) {
    x = d(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return r.combine(w);
}

namespace {

AtomicConstraint random_atom(Rng& rng, std::size_t clocks, int bound) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_int_distribution<std::size_t> clock(0, clocks - 1);
  std::uniform_int_distribution<long> k(0, bound);
  AtomicConstraint a;
  a.clock = clock(rng);
  int kind = pick(rng);
  if (kind == 5 && clocks > 1) {
    ClockId y = clock(rng);
    while (y == a.clock) y = clock(rng);
    a.minus = y;
    std::uniform_int_distribution<long> c(-bound, bound);
    long lo = c(rng);
    a.lower = ConstraintBound{lo, bool(rng() & 1)};
    a.upper = ConstraintBound{lo + long(rng() % 2), a.lower->strict};
    if (a.upper->value == lo) a.lower->strict = a.upper->strict = false;
    return a;
  }
  long v = k(rng);
  switch (kind) {
    case 0:  // x == k
      a.lower = a.upper = ConstraintBound{v, false};
      break;
    case 1:  // k < x < k+1
      v = std::min<long>(v, bound - 1);
      a.lower = ConstraintBound{v, true};
      a.upper = ConstraintBound{v + 1, true};
      break;
    case 2:
      a.upper = ConstraintBound{std::max<long>(v, 1), true};
      break;
    case 3:
      a.upper = ConstraintBound{v, false};
      break;
    default:
      a.lower = ConstraintBound{v, bool(rng() & 1)};
      break;
  }
  return a;
}

}  // namespace

TimedAutomaton random_automaton(Rng& rng) {
  std::uniform_int_distribution<std::size_t> nclocks(1, 3), nlocs(2, 3), nedges(3, 6), natoms(0, 2);
  std::uniform_int_distribution<int> nbound(1, 3);
  std::size_t n = nclocks(rng), L = nlocs(rng);
  int bound = nbound(rng);
  std::vector<std::string> clock_names, locs;
  for (std::size_t i = 0; i < n; ++i) clock_names.push_back(std::string(1, char('x' + i)));
  for (std::size_t i = 0; i < L; ++i) locs.push_back("l" + std::to_string(i));
  std::vector<Edge> edges;
  std::uniform_int_distribution<std::size_t> loc(0, L - 1);
  std::size_t ne = nedges(rng);
  for (std::size_t e = 0; e < ne; ++e) {
    Edge edge;
    edge.source = loc(rng);
    edge.target = loc(rng);
    std::size_t atoms = natoms(rng);
    for (std::size_t i = 0; i < atoms; ++i) edge.guard.atoms.push_back(random_atom(rng, n, bound));
    for (ClockId c = 0; c < n; ++c)
      if (rng() % 3 == 0) edge.resets.push_back(c);
    edges.push_back(edge);
  }
  return TimedAutomaton(ClockSet(clock_names), locs, bound, edges, 0, std::nullopt, {0});
}

std::vector<CorpusPath> path_corpus(std::uint64_t seed, std::size_t robust, std::size_t fragile) {
  Rng rng(seed);
  std::vector<CorpusPath> out;
  std::size_t have_robust = 0, have_fragile = 0;
  for (int attempt = 0; attempt < 200000 && (have_robust < robust || have_fragile < fragile); ++attempt) {
    TimedAutomaton a = random_automaton(rng);
    auto regions = all_regions(a.clock_count(), a.bound());
    for (int walk = 0; walk < 8; ++walk) {
      RegionState s{LocationId(rng() % a.locations().size()), regions[rng() % regions.size()]};
      RegionPath path;
      std::size_t len = 1 + rng() % 4;
      while (path.size() < len) {
        auto steps = atomic_steps(a, s);
        if (steps.empty()) break;
        path.push_back(steps[rng() % steps.size()]);
        s = path.back().target;
      }
      if (path.empty()) continue;
      bool r = is_robust(a, path);
      if (r && have_robust >= robust) continue;
      if (!r && have_fragile >= fragile) continue;
      (r ? have_robust : have_fragile)++;
      out.push_back(CorpusPath{a, path});
    }
  }
  if (have_robust < robust || have_fragile < fragile) throw std::runtime_error("corpus generation fell short");
  return out;
}

Region region_oracle(const Valuation& v) {
  std::vector<long> iota;
  std::map<Rational, std::vector<ClockId>> by_frac;
  for (ClockId x = 0; x < v.size(); ++x) {
    Rational f = v[x] - Rational(floor_of(v[x]));
    iota.push_back(floor_of(v[x]));
    by_frac[f].push_back(x);
  }
  std::vector<std::vector<ClockId>> blocks;
  if (by_frac.begin()->first != 0) blocks.emplace_back();
  for (auto& [f, xs] : by_frac) blocks.push_back(xs);
  return Region(iota, blocks);
}

namespace {

BoolMatrix shift_relation(const Region& r, const Region& r2, int max_shift) {
  auto cs = r.corners(), cs2 = r2.corners();
  BoolMatrix m(cs.size(), cs2.size());
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs2.size(); ++j)
      for (int d = 0; d <= max_shift; ++d) {
        bool ok = true;
        for (ClockId x = 0; x < cs[i].size(); ++x) ok = ok && cs2[j][x] == cs[i][x] + d;
        if (ok) m.set(i, j);
      }
  return m;
}

}  // namespace

BoolMatrix delay_relation_oracle(const Region& r, const Region& r2, int bound) {
  std::size_t n = r.dimension() + 1;
  if (r == r2) {
    BoolMatrix m = BoolMatrix::identity(n);
    if (!r.punctual()) m.set(0, n - 1);
    return m;
  }
  BoolMatrix m = BoolMatrix::identity(n);
  Region cur = r;
  while (cur != r2) {
    auto next = immediate_time_successor(cur, bound);
    if (!next) throw std::runtime_error("target is not a time-successor");
    m = m * shift_relation(cur, *next, 1);
    cur = *next;
  }
  return m;
}

Punctuality punctuality_oracle(const Guard& g, std::size_t clocks, int bound) {
  Dbm z = Dbm::from_guard(g, clocks, bound);
  if (z.empty()) return Punctuality::Empty;
  return shrink(z, Rational(1, 4)).empty() ? Punctuality::Punctual : Punctuality::NonPunctual;
}

namespace {

std::vector<std::vector<bool>> warshall(std::vector<std::vector<bool>> r) {
  std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (r[i][k] && r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace

bool equivalence_oracle(const BoolMatrix& m) {
  std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (!m(i, i)) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) != m(j, i)) return false;
      for (std::size_t k = 0; k < n; ++k)
        if (m(i, j) && m(j, k) && !m(i, k)) return false;
    }
  }
  return true;
}

bool non_strong_weak_component_oracle(const BoolMatrix& m) {
  std::size_t n = m.rows();
  std::vector<std::vector<bool>> dir(n, std::vector<bool>(n)), und(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      dir[i][j] = m(i, j);
      und[i][j] = m(i, j) || m(j, i);
    }
  dir = warshall(dir);
  und = warshall(und);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (und[i][j] && !(dir[i][j] && dir[j][i])) return true;
  return false;
}

PowerScan scan_powers(const BoolMatrix& m, std::size_t limit) {
  PowerScan s;
  BoolMatrix p = m;
  for (std::size_t k = 1; k <= limit; ++k) {
    if (!s.first_cluster && equivalence_oracle(p)) s.first_cluster = k;
    if (!s.first_doomed && non_strong_weak_component_oracle(p)) s.first_doomed = k;
    p = p * m;
  }
  return s;
}

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::vector<std::size_t> coloring_from_positions(std::size_t m, const std::vector<std::size_t>& positions) {
  std::vector<std::size_t> raw(m + 1, 0);
  std::size_t k = positions.size() - 1;
  for (std::size_t j = 1; j <= k; ++j)
    for (std::size_t i = positions[j - 1] + 1; i <= positions[j]; ++i) raw[i] = j;
  std::map<std::size_t, std::size_t> renumber;
  std::vector<std::size_t> out;
  for (auto c : raw) out.push_back(renumber.emplace(c, renumber.size()).first->second);
  return out;
}

std::vector<std::vector<std::size_t>> interval_colorings(std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 1; mask < (std::size_t(1) << (m + 1)); ++mask) {
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i <= m; ++i)
      if (mask >> i & 1) p.push_back(i);
    auto c = coloring_from_positions(m, p);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

BoolMatrix cluster_of(const std::vector<std::size_t>& color) {
  BoolMatrix m(color.size(), color.size());
  for (std::size_t i = 0; i < color.size(); ++i)
    for (std::size_t j = 0; j < color.size(); ++j)
      if (color[i] == color[j]) m.set(i, j);
  return m;
}

Region open_region(std::size_t d) {
  if (d == 0) return Region({0}, {{0}});
  std::vector<std::vector<ClockId>> blocks{{}};
  for (ClockId x = 0; x < d; ++x) blocks.push_back({x});
  return Region(std::vector<long>(d, 0), blocks);
}

std::vector<Valuation> grid_points(const Region& r, long max_den, int bound) {
  auto q = [](long n, long d) {
    Rational x(n, d);
    x.canonicalize();
    return x;
  };
  std::set<Rational> coords;
  for (long d = 1; d <= max_den; ++d)
    for (long k = 0; k <= bound * d; ++k) coords.insert(q(k, d));
  std::vector<Valuation> out;
  std::size_t n = r.clock_count();
  std::vector<Rational> cs(coords.begin(), coords.end());
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    std::vector<Rational> v;
    for (auto i : idx) v.push_back(cs[i]);
    if (r.contains(Valuation(v))) out.emplace_back(v);
    std::size_t p = 0;
    while (p < n && ++idx[p] == cs.size()) idx[p++] = 0;
    if (p == n) break;
  }
  return out;
}

}  // namespace robta::testing
