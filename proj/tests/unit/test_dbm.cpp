#include <doctest.h>

#include "robta/dbm.hpp"
#include "robta/parser.hpp"
#include "support.hpp"

using namespace robta;
using namespace robta::testing;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

const ClockSet xy({"x", "y"});
const ClockSet x1({"x"});

Dbm zone(const std::string& g, const ClockSet& c, int bound) {
  return Dbm::from_guard(parse_guard(g, c), c.size(), bound);
}

// Sampled semantics of the four operations, straight from their definitions.
bool in_pretime(const Dbm& z, const Valuation& v, const Rational& delta, int bound) {
  for (long k = 0; k <= 64 * bound; ++k) {
    Rational d = q(k, 64);
    if (d >= delta && z.contains(shifted(v, d))) return true;
  }
  return false;
}

bool in_shrink(const Dbm& z, const Valuation& v, const Rational& delta) {
  for (long k = -16; k <= 16; ++k) {
    Valuation w = shifted(v, delta * q(k, 16));
    bool nonneg = true;
    for (const auto& x : w.values) nonneg = nonneg && x >= 0;
    if (!nonneg || !z.contains(w)) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("dbm") {
  TEST_CASE("canonical form of a region zone") {
    Dbm z = zone("0<x && x-y<0 && y<1", xy, 2);
    REQUIRE(!z.empty());
    CHECK(z.at(1, 2) == Bound::lt(0));  // x - y < 0
    CHECK(z.at(0, 1) == Bound::lt(0));  // -x < 0
    CHECK(z.at(2, 0) == Bound::lt(1));  // y < 1
    CHECK(z.at(1, 0) == Bound::lt(1));  // derived: x < 1
    Dbm again = z;
    again.canonicalize();
    CHECK(again == z);
    CHECK(zone("x<0", x1, 2).empty());
  }

  TEST_CASE("membership agrees with direct atom evaluation") {
    Rng rng(5);
    int inside = 0;
    for (int i = 0; i < 40; ++i) {
      TimedAutomaton a = random_automaton(rng);
      for (const auto& e : a.edges()) {
        Dbm z = Dbm::from_guard(e.guard, a.clock_count(), a.bound());
        for (int k = 0; k < 25; ++k) {
          Valuation v = random_valuation(rng, a.clock_count(), a.bound(), 4);
          bool direct = satisfies(v, e.guard);
          CHECK(z.contains(v) == direct);
          inside += direct;
        }
      }
    }
    CHECK(inside > 100);
  }

  TEST_CASE("pretime_geq") {
    Dbm seg = zone("x==1", x1, 2);
    CHECK(pretime_geq(seg, 0) == zone("x<=1", x1, 2));
    Dbm p = pretime_geq(zone("0<x<1", x1, 2), q(1, 4));
    CHECK(p.contains(Valuation({q(0)})));
    CHECK(p.contains(Valuation({q(74, 100)})));
    CHECK(!p.contains(Valuation({q(3, 4)})));

    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
      TimedAutomaton a = random_automaton(rng);
      Dbm z = Dbm::from_guard(a.edge(0).guard, a.clock_count(), a.bound());
      Rational d1 = random_rational(rng, 8, 0, 4), d2 = d1 + random_rational(rng, 8, 0, 4);
      CHECK(pretime_geq(z, 0).includes(z));
      CHECK(pretime_geq(z, d1).includes(pretime_geq(z, d2)));
      Dbm pz = pretime_geq(z, d1);
      for (int k = 0; k < 20; ++k) {
        Valuation v = random_valuation(rng, a.clock_count(), a.bound(), 8);
        // The sampled delay grid can only miss members, never invent them.
        if (in_pretime(z, v, d1, a.bound())) CHECK(pz.contains(v));
      }
    }
  }

  TEST_CASE("intersect_guard") {
    Dbm z = zone("0<x<1", x1, 2);
    CHECK(intersect_guard(z, Guard{}) == z);
    CHECK(intersect_guard(z, parse_guard("1<=x", x1)).empty());
    CHECK(intersect_guard(zone("0<x && x-y<0 && y<1", xy, 2), parse_guard("y==2", xy)).empty());
  }

  TEST_CASE("unreset") {
    Dbm z = zone("y==0 && 0<x<1", xy, 3);
    CHECK(unreset(z, {1}, 3) == zone("0<x<1 && y<=3", xy, 3));
    CHECK(unreset(z, {}, 3) == z);
    CHECK(unreset(zone("x<0", xy, 3), {1}, 3).empty());
  }

  TEST_CASE("shrink") {
    Dbm s = shrink(zone("0<x<1", x1, 2), q(1, 4));
    CHECK(s.contains(Valuation({q(1, 2)})));
    CHECK(!s.contains(Valuation({q(1, 4)})));
    CHECK(!s.contains(Valuation({q(3, 4)})));
    CHECK(s.contains(Valuation({q(26, 100)})));
    Dbm z = zone("0<x<1 && y<2", xy, 2);
    CHECK(shrink(z, 0) == z);
    Dbm diag = zone("x-y==1", xy, 2);
    Dbm sd = shrink(diag, q(1, 8));
    CHECK(sd.at(1, 2) == diag.at(1, 2));
    CHECK(sd.at(2, 1) == diag.at(2, 1));
    CHECK(sd.at(1, 0) == Bound::le(q(15, 8)));

    Rng rng(9);
    for (int i = 0; i < 20; ++i) {
      TimedAutomaton a = random_automaton(rng);
      for (const auto& e : a.edges()) {
        Dbm g = Dbm::from_guard(e.guard, a.clock_count(), a.bound());
        Rational d = random_rational(rng, 16, 1, 8);
        Dbm sh = shrink(g, d);
        CHECK(shrink(g, d / 2).includes(sh));
        for (int k = 0; k < 10; ++k) {
          Valuation v = random_valuation(rng, a.clock_count(), a.bound(), 16);
          CHECK(sh.contains(v) == in_shrink(g, v, d));
        }
      }
    }
  }

  TEST_CASE("shrunk shrink of 0<x<1") {
    ShrunkDbm s = shrink(ShrunkDbm(zone("0<x<1", x1, 2)));
    CHECK(!s.empty());
    auto p = s.shrinking_matrix();
    CHECK(p[0 * 2 + 1] == 1);  // lower bound row
    CHECK(p[1 * 2 + 0] == 1);  // upper bound row
    REQUIRE(s.limit());
    CHECK(*s.limit() == q(1, 2));
    CHECK(s.instantiate(q(1, 8)) == shrink(zone("0<x<1", x1, 2), q(1, 8)));
    CHECK(s.base() == zone("0<x<1", x1, 2));
  }

  TEST_CASE("zero shrinking matrix reproduces the plain operations") {
    Dbm z = zone("0<x && x-y<0 && y<1", xy, 2);
    ShrunkDbm s(z);
    for (Rational d : {q(1, 10), q(1, 3), q(1)}) CHECK(s.instantiate(d) == z);
    ShrunkDbm u = unreset(s, {1}, 2);
    CHECK(u.instantiate(q(1, 7)) == unreset(z, {1}, 2));
    ShrunkDbm pt = pretime_geq0(s);
    CHECK(pt.instantiate(q(1, 7)) == pretime_geq(z, 0));
  }

  TEST_CASE("shrunk pipelines commute with instantiation") {
    Rng rng(21);
    int compared = 0;
    for (int i = 0; i < 80; ++i) {
      TimedAutomaton a = random_automaton(rng);
      const Edge& e = a.edges()[rng() % a.edges().size()];
      Dbm z = Dbm::from_guard(e.guard, a.clock_count(), a.bound());
      if (z.empty()) continue;
      ShrunkDbm s = pretime_geq(shrink(intersect_guard(unreset(ShrunkDbm(z), e.resets, a.bound()),
                                                       a.edges()[0].guard)));
      if (s.empty()) continue;
      Rational top = s.limit() ? *s.limit() : Rational(1);
      for (long k = 1; k <= 3; ++k) {
        Rational d = top * q(k, 4);
        d.canonicalize();
        Dbm concrete = pretime_geq(
            shrink(intersect_guard(unreset(z, e.resets, a.bound()), a.edges()[0].guard), d), d);
        CHECK(s.instantiate(d) == concrete);
        ++compared;
      }
    }
    CHECK(compared > 60);
  }

  TEST_CASE("included_for_small_delta") {
    Dbm inner = zone("0<x<1", x1, 2);
    ShrunkDbm wide = shrink(ShrunkDbm(zone("x<2", x1, 2)));
    // Points near x=0 leave every shrink of x<2.
    CHECK(!included_for_small_delta(inner, wide).holds);
    ShrunkDbm tight = shrink(ShrunkDbm(inner));
    CHECK(!included_for_small_delta(inner, tight).holds);
    Dbm mid = zone("0<x<1", x1, 2);
    mid.constrain(0, 1, Bound::le(q(-1, 4)));
    mid.constrain(1, 0, Bound::le(q(3, 4)));
    mid.canonicalize();
    auto m = included_for_small_delta(mid, tight);
    CHECK(m.holds);
    REQUIRE(m.below);
    CHECK(*m.below == q(1, 4));
    CHECK(tight.instantiate(q(1, 5)).includes(mid));
    CHECK(!tight.instantiate(q(3, 10)).includes(mid));
    auto w = included_for_small_delta(mid, wide);
    CHECK(w.holds);
    REQUIRE(w.below);
    CHECK(*w.below == q(1, 4));
  }
}
