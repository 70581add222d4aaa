#include <doctest.h>

#include <set>
#include <stdexcept>

#include "robta/parser.hpp"
#include "robta/slice.hpp"
#include "support.hpp"

using namespace robta;
using namespace robta::testing;

namespace {

Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

Valuation val(std::initializer_list<Rational> xs) { return Valuation(std::vector<Rational>(xs)); }

const ClockSet xy({"x", "y"});

Region reg(const std::string& g, int bound = 2) {
  auto r = region_from_guard(parse_guard(g, xy), 2, bound);
  if (!r) throw std::runtime_error("not a region: " + g);
  return *r;
}

const Region tri = reg("0<x && x-y<0 && y<1");

FoldedOrbitGraph fig3_fog() {
  BoolMatrix m(3, 3);
  for (auto [i, j] : {std::pair{0, 0}, {0, 2}, {1, 1}, {2, 0}, {2, 2}}) m.set(i, j);
  return FoldedOrbitGraph{tri, m};
}

}  // namespace

TEST_SUITE("slice") {
  TEST_CASE("cluster corner partitions") {
    CornerPartition p = cluster_corner_partition(fig3_fog());
    CHECK(p.color == std::vector<std::size_t>{0, 1, 0});
    CHECK(p.colors() == 2);
    CHECK(p.class_size(0) == 2);
    CornerPartition one = cluster_corner_partition(FoldedOrbitGraph{tri, cluster_of({0, 0, 0})});
    CHECK(one.colors() == 1);
    CornerPartition all = cluster_corner_partition(FoldedOrbitGraph{tri, BoolMatrix::identity(3)});
    CHECK(all.color == std::vector<std::size_t>{0, 1, 2});
    BoolMatrix not_cluster = BoolMatrix::identity(3);
    not_cluster.set(0, 1);
    CHECK_THROWS(cluster_corner_partition(FoldedOrbitGraph{tri, not_cluster}));
  }

  TEST_CASE("splitting positions") {
    CHECK(splitting_positions(CornerPartition{tri, {0, 1, 0}}) == std::vector<std::size_t>{0, 1});
    CHECK(splitting_positions(CornerPartition{tri, {0, 0, 0}}) == std::vector<std::size_t>{2});
    CHECK(splitting_positions(CornerPartition{tri, {0, 1, 2}}) == std::vector<std::size_t>{0, 1, 2});
    CHECK_THROWS(splitting_positions(CornerPartition{open_region(3), {0, 1, 0, 1}}));
    for (std::size_t m = 0; m <= 4; ++m)
      for (const auto& c : interval_colorings(m)) {
        auto p = splitting_positions(CornerPartition{open_region(m), c});
        CHECK(coloring_from_positions(m, p) == c);
      }
  }

  TEST_CASE("slice weights") {
    CornerPartition p{tri, {0, 1, 0}};
    CHECK(slice_of(val({q(1, 4), q(7, 10)}), p) == std::vector<Rational>{q(11, 20), q(9, 20)});
    CHECK(slice_of(val({q(1, 4), q(7, 10)}), CornerPartition{tri, {0, 0, 0}}) == std::vector<Rational>{1});
    CHECK(slice_of(val({q(1, 4), q(3, 4)}), p) == std::vector<Rational>{q(1, 2), q(1, 2)});
    CHECK_THROWS(slice_of(val({q(3, 4), q(1, 4)}), p));
  }

  TEST_CASE("slice zones") {
    CornerPartition p{tri, {0, 1, 0}};
    Dbm expect = tri.to_dbm();
    expect.constrain(2, 1, Bound::le(q(1, 2)));
    expect.constrain(1, 2, Bound::le(q(-1, 2)));
    expect.canonicalize();
    CHECK(slice_to_zone(p, {q(1, 2), q(1, 2)}) == expect);
    CHECK(slice_to_zone(CornerPartition{tri, {0, 0, 0}}, {1}) == tri.to_dbm());

    Rng rng(73);
    for (std::size_t m = 0; m <= 3; ++m) {
      Region r = open_region(m);
      for (const auto& c : interval_colorings(m)) {
        CornerPartition part{r, c};
        for (int i = 0; i < 500 / int(m + 1); ++i) {
          Valuation v = random_point(rng, r, 12), w = random_point(rng, r, 12);
          auto sv = slice_of(v, part);
          Dbm z = slice_to_zone(part, sv);
          CHECK(z.contains(v));
          CHECK(z.contains(w) == (slice_of(w, part) == sv));
        }
      }
    }
  }

  TEST_CASE("slices partition the region") {
    Rng rng(79);
    Region r = open_region(3);
    for (const auto& c : interval_colorings(3)) {
      CornerPartition part{r, c};
      std::vector<Valuation> pts;
      for (int i = 0; i < 60; ++i) pts.push_back(random_point(rng, r, 6));
      for (const auto& v : pts) {
        int holders = 0;
        for (const auto& w : pts) holders += slice_to_zone(part, slice_of(w, part)).contains(v);
        // v sits in its own slice and in exactly the slices of points sharing its weights.
        int same = 0;
        for (const auto& w : pts) same += slice_of(w, part) == slice_of(v, part);
        CHECK(holders == same);
      }
    }
  }

  TEST_CASE("slice representatives") {
    CornerPartition p{tri, {0, 1, 0}};
    CHECK(slice_representative(p, {q(1, 2), q(1, 2)}) == val({q(1, 4), q(3, 4)}));
    CHECK(slice_representative(CornerPartition{tri, {0, 0, 0}}, {1}) == tri.representative());
    CHECK(corner_weights(tri.representative(), tri) == std::vector<Rational>{q(1, 3), q(1, 3), q(1, 3)});
    std::vector<Rational> w{q(1, 5), q(1, 2), q(3, 10)};
    CHECK(corner_weights(slice_representative(CornerPartition{tri, {0, 1, 2}}, w), tri) == w);
    CHECK(barycentric_slice(p) == std::vector<Rational>{q(2, 3), q(1, 3)});
  }

  TEST_CASE("flow reachability") {
    auto f = fig3_fog();
    CHECK(flow_reachable(val({q(1, 5), q(7, 10)}), val({q(3, 10), q(4, 5)}), f));
    CHECK(!flow_reachable(val({q(1, 5), q(7, 10)}), val({q(1, 5), q(4, 5)}), f));
    FoldedOrbitGraph id{tri, BoolMatrix::identity(3)};
    CHECK(flow_reachable(val({q(1, 5), q(7, 10)}), val({q(1, 5), q(7, 10)}), id));
    CHECK(!flow_reachable(val({q(1, 5), q(7, 10)}), val({q(3, 10), q(4, 5)}), id));
  }

  TEST_CASE("slice, zone and flow agree on a small grid") {
    for (const Region& r : {tri, reg("x==1 && 0<y<1"), reg("1<x<2 && 0<y<1 && x-y<1")}) {
      auto pts = grid_points(r, 4, 2);
      REQUIRE(pts.size() >= 2);
      for (const auto& c : interval_colorings(r.dimension())) {
        CornerPartition part{r, c};
        FoldedOrbitGraph f{r, cluster_of(c)};
        for (const auto& v : pts) {
          auto sv = slice_of(v, part);
          Dbm z = slice_to_zone(part, sv);
          for (const auto& w : pts) {
            bool same = slice_of(w, part) == sv;
            CHECK(z.contains(w) == same);
            CHECK(flow_reachable(v, w, f) == same);
          }
        }
      }
    }
  }

  TEST_CASE("time-invariant slices commute with shrinking") {
    Rng rng(83);
    for (std::size_t m = 1; m <= 3; ++m) {
      Region r = open_region(m);
      for (const auto& c : interval_colorings(m)) {
        auto p = splitting_positions(CornerPartition{r, c});
        if (p.back() == m) continue;  // fixes a clock's fractional part, not shift-invariant
        CornerPartition part{r, c};
        for (int i = 0; i < 10; ++i) {
          Dbm s = slice_to_zone(part, slice_of(random_point(rng, r, 9), part));
          for (Rational d : {q(1, 64), q(1, 16), q(1, 5)})
            CHECK(shrink(s, d) == intersect(shrink(r.to_dbm(), d), s));
        }
      }
    }
  }

  TEST_CASE("interior zones") {
    Rng rng(89);
    for (std::size_t m = 0; m <= 3; ++m) {
      Region r = open_region(m);
      Rational eta = q(1, 4 * long(m + 1));
      Dbm z = interior_zone(r, eta);
      for (int i = 0; i < 200; ++i) {
        Valuation v = random_point(rng, r, 10);
        bool all = true;
        for (const auto& l : corner_weights(v, r)) all = all && l >= eta;
        CHECK(z.contains(v) == all);
      }
    }
  }
}
