#include <doctest.h>

#include "robta/parser.hpp"
#include "robta/robust.hpp"
#include "robta/synthesis.hpp"
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

Region reg(const std::string& g, int bound = 2) {
  auto r = region_from_guard(parse_guard(g, xy), 2, bound);
  REQUIRE(r);
  return *r;
}

RegionPath fig3_cycle(const TimedAutomaton& a) {
  auto c = cycle_through(a, RegionState{0, reg("0<x && x-y<0 && y<1")}, {0, 1, 2});
  REQUIRE(c);
  return *c;
}

// Direct reading of the one-step controllable predecessor: some d ≥ δ such
// that every d' ∈ [d-δ, d+δ] lands in r' ∩ g and resets into s. Delays and
// perturbations are sampled, so a hit proves membership but a miss proves
// nothing.
bool sampled_cpre_hit(const TimedAutomaton& a, const AtomicStep& st, const Dbm& s, const Valuation& v,
                      const Rational& delta) {
  const Edge& e = a.edge(st.edge);
  Rational eff = e.punctual() ? Rational(0) : delta;
  for (long k = 0; k <= 48 * a.bound(); ++k) {
    Rational d = q(k, 48);
    if (d < eff) continue;
    bool all = true;
    for (long j = -4; j <= 4 && all; ++j) {
      Rational dd = d + eff * q(j, 4);
      Valuation w = shifted(v, dd);
      all = within_bound(w, a.bound()) && st.delay_target.contains(w) && satisfies(w, e.guard) &&
            s.contains(reset(w, e.resets));
    }
    if (all) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("robust") {
  TEST_CASE("robustness of figure paths") {
    TimedAutomaton f3 = load_model("fig3.ta");
    RegionPath c = fig3_cycle(f3);
    CHECK(is_robust(f3, c));
    auto rc = robust_nonempty(f3, c);
    CHECK(rc.robust);
    CHECK(rc.delta0 > 0);

    // fig1's x<2 edge taken when y sits exactly at 1.
    TimedAutomaton f1 = load_model("fig1.ta");
    AtomicStep bad{RegionState{1, reg("y==0 && 0<x<1", 3)}, reg("y==1 && 1<x<2", 3), 1,
                   RegionState{2, reg("y==1 && x==0", 3)}};
    AtomicStep first{RegionState{0, reg("x==0 && y==0", 3)}, reg("0<x && x-y==0 && x<1", 3), 0,
                     RegionState{1, reg("y==0 && 0<x<1", 3)}};
    RegionPath p{first, bad};
    REQUIRE(check_well_formed(f1, p).empty());
    CHECK(!is_robust(f1, p));
    CHECK(first_non_robust_step(f1, p) == 1u);
    auto nr = robust_nonempty(f1, p);
    CHECK(!nr.robust);
    CHECK(nr.offending_step == 1u);

    // Only the punctual y==2 edge: robust whatever the regions.
    AtomicStep punct{RegionState{2, reg("x==0 && 1<y<2", 3)}, reg("y==2 && 0<x<1", 3), 2,
                     RegionState{1, reg("y==0 && 0<x<1", 3)}};
    REQUIRE(check_well_formed(f1, {punct}).empty());
    CHECK(is_robust(f1, {punct}));
    CHECK(robust_nonempty(f1, {punct}).robust);
  }

  TEST_CASE("cpre_atomic examples") {
    TimedAutomaton f1 = load_model("fig1.ta");
    AtomicStep punct{RegionState{2, reg("x==0 && 1<y<2", 3)}, reg("y==2 && 0<x<1", 3), 2,
                     RegionState{1, reg("y==0 && 0<x<1", 3)}};
    Dbm last = punct.target.region.to_dbm();
    Dbm at0 = cpre_atomic(f1, punct, last, 0);
    CHECK(at0 == punct.source.region.to_dbm());
    for (Rational d : {q(1, 8), q(1, 3), q(1)}) CHECK(cpre_atomic(f1, punct, last, d) == at0);

    AtomicStep bad{RegionState{1, reg("y==0 && 0<x<1", 3)}, reg("y==1 && 1<x<2", 3), 1,
                   RegionState{2, reg("y==1 && x==0", 3)}};
    CHECK(cpre_atomic(f1, bad, bad.target.region.to_dbm(), q(1, 8)).empty());
    CHECK(cpre_atomic(f1, bad, bad.target.region.to_dbm(), 0) == bad.source.region.to_dbm());
  }

  TEST_CASE("corpus identities") {
    auto corpus = path_corpus(53, 60, 60);
    int robust = 0;
    for (const auto& [a, path] : corpus) {
      Dbm last = path.back().target.region.to_dbm();
      Dbm first = path.front().source.region.to_dbm();
      CHECK(cpre_path(a, path, last, 0) == first);

      auto rc = robust_nonempty(a, path);
      CHECK(rc.robust == is_robust(a, path));
      CHECK(rc.offending_step == first_non_robust_step(a, path));

      ShrunkDbm sh = shrunk_cpre_path(a, path, ShrunkDbm(last));
      Rational top = sh.delta0();
      for (Rational d : {top, Rational(top / 3), Rational(top / 10)}) {
        d.canonicalize();
        Dbm concrete = cpre_path(a, path, last, d);
        CHECK(sh.instantiate(d) == concrete);
        CHECK(concrete.empty() == !rc.robust);
        CHECK(cpre_path(a, path, last, d / 2).includes(concrete));
      }
      if (rc.robust) {
        ++robust;
        CHECK(!cpre_path(a, path, last, rc.delta0).empty());
      }

      if (path.size() >= 2) {
        std::size_t cut = 1 + path.size() / 2 - (path.size() == 2);
        RegionPath head(path.begin(), path.begin() + cut), tail(path.begin() + cut, path.end());
        Rational d = q(1, 16);
        CHECK(cpre_path(a, path, last, d) == cpre_path(a, head, cpre_path(a, tail, last, d), d));
      }
    }
    CHECK(robust >= 60);
  }

  TEST_CASE("cpre is monotone and sound on samples") {
    auto corpus = path_corpus(59, 40, 10);
    Rng rng(61);
    int hits = 0;
    for (const auto& [a, path] : corpus) {
      const AtomicStep& st = path.back();
      const Region& r2 = st.target.region;
      Valuation c = random_point(rng, r2);
      Dbm small = ball_zone(c, q(1, 16), r2), big = ball_zone(c, q(1, 4), r2);
      REQUIRE(big.includes(small));
      for (Rational d : {Rational(0), q(1, 32), q(1, 8)}) {
        Dbm lo = cpre_atomic(a, st, small, d), hi = cpre_atomic(a, st, big, d);
        CHECK(hi.includes(lo));
        for (int k = 0; k < 8; ++k) {
          Valuation v = random_point(rng, st.source.region, 24);
          if (sampled_cpre_hit(a, st, big, v, d)) {
            CHECK(hi.contains(v));
            ++hits;
          }
        }
      }
    }
    CHECK(hits > 50);
  }

  TEST_CASE("balls survive robust paths") {
    auto corpus = path_corpus(67, 60, 0);
    Rng rng(71);
    for (const auto& [a, path] : corpus) {
      const Region& last = path.back().target.region;
      Valuation c = random_point(rng, last);
      ShrunkDbm target(ball_zone(c, q(1, 8), last));
      ShrunkDbm pre = shrunk_cpre_path(a, path, target);
      REQUIRE(!pre.empty());
      Dbm z = pre.instantiate(pre.delta0());
      Ball b = interior_ball(z, path.front().source.region);
      CHECK(b.radius > 0);
      CHECK(z.includes(ball_zone(b.center, b.radius, path.front().source.region)));
    }
  }
}
