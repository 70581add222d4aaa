#include "robta/slice.hpp"

#include <algorithm>
#include <deque>
#include <optional>

namespace robta {

std::size_t CornerPartition::colors() const {
  std::size_t k = 0;
  for (auto c : color) k = std::max(k, c + 1);
  return k;
}

std::size_t CornerPartition::class_size(std::size_t c) const {
  return static_cast<std::size_t>(std::count(color.begin(), color.end(), c));
}

CornerPartition cluster_corner_partition(const FoldedOrbitGraph& f) {
  if (!is_cluster(f)) throw ModelError("folded orbit graph is not a cluster graph");
  return CornerPartition{f.region, scc_colors(f.relation)};
}

std::vector<std::size_t> splitting_positions(const CornerPartition& p) {
  const auto& col = p.color;
  std::size_t m = col.size() - 1;
  std::vector<std::size_t> pos;
  std::size_t i = 0;
  while (i + 1 <= m && col[i + 1] == 0) ++i;
  pos.push_back(i);
  std::size_t expect = 1;
  ++i;
  while (i <= m && col[i] != 0) {
    if (col[i] != expect) throw ModelError("corner partition has no interval structure");
    while (i + 1 <= m && col[i + 1] == expect) ++i;
    pos.push_back(i);
    ++expect;
    ++i;
  }
  for (; i <= m; ++i)
    if (col[i] != 0) throw ModelError("corner partition has no interval structure");
  if (expect != p.colors()) throw ModelError("corner partition has no interval structure");
  return pos;
}

std::vector<Rational> slice_of(const Valuation& v, const CornerPartition& p) {
  if (!p.region.contains(v)) throw ModelError("valuation outside the partition's region");
  auto lambda = corner_weights(v, p.region);
  std::vector<Rational> w(p.colors(), Rational(0));
  for (std::size_t i = 0; i < lambda.size(); ++i) w[p.color[i]] += lambda[i];
  for (auto& q : w) q.canonicalize();
  return w;
}

namespace {

// T_b is the fractional part of block b, with T_0 = 0 and T_{m+1} = 1.
// Returns (DBM index, offset) such that T_b = x_index - offset.
std::pair<std::size_t, Rational> frac_term(const Region& r, std::size_t b) {
  std::size_t m = r.dimension();
  if (b == 0) return {0, Rational(0)};
  if (b == m + 1) return {0, Rational(-1)};
  ClockId rep = r.block(b)[0];
  return {rep + 1, Rational(r.iota()[rep])};
}

// Adds T_a - T_b ≤ c.
void frac_upper(Dbm& z, const Region& r, std::size_t a, std::size_t b, const Rational& c) {
  auto [ia, oa] = frac_term(r, a);
  auto [ib, ob] = frac_term(r, b);
  Rational k = c + oa - ob;
  if (ia == ib) {
    if (k < 0) z.set(0, 0, Bound::lt(0));  // contradiction
    return;
  }
  z.constrain(ia, ib, Bound::le(k));
}

void frac_equal(Dbm& z, const Region& r, std::size_t a, std::size_t b, const Rational& c) {
  frac_upper(z, r, a, b, c);
  frac_upper(z, r, b, a, -c);
}

}  // namespace

Dbm slice_to_zone(const CornerPartition& p, const std::vector<Rational>& w) {
  const Region& r = p.region;
  std::size_t m = r.dimension();
  auto pos = splitting_positions(p);
  if (w.size() != pos.size()) throw ModelError("weight vector does not match the partition");
  Dbm z = r.to_dbm();
  std::size_t k = pos.size() - 1;
  for (std::size_t j = 1; j <= k; ++j) frac_equal(z, r, m - pos[j - 1], m - pos[j], w[j]);
  if (pos[k] != pos[0]) frac_equal(z, r, m - pos[k], m - pos[0], w[0] - 1);
  else if (w[0] != 1) z.set(0, 0, Bound::lt(0));
  z.canonicalize();
  return z;
}

Valuation slice_representative(const CornerPartition& p, const std::vector<Rational>& w) {
  std::vector<Rational> lambda(p.color.size());
  for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = w.at(p.color[i]) / Rational(p.class_size(p.color[i]));
  return p.region.combine(lambda);
}

std::vector<Rational> barycentric_slice(const CornerPartition& p) {
  std::vector<Rational> w(p.colors());
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = Rational(p.class_size(c), p.color.size());
  for (auto& q : w) q.canonicalize();
  return w;
}

bool flow_reachable(const Valuation& v, const Valuation& v2, const FoldedOrbitGraph& f) {
  if (!f.region.contains(v) || !f.region.contains(v2)) return false;
  auto src = corner_weights(v, f.region), dst = corner_weights(v2, f.region);
  std::size_t n = src.size(), N = 2 * n + 2, s = 0, t = 2 * n + 1;
  // nullopt capacity = unbounded
  std::vector<std::optional<Rational>> cap(N * N, Rational(0));
  auto c = [&](std::size_t a, std::size_t b) -> std::optional<Rational>& { return cap[a * N + b]; };
  for (std::size_t i = 0; i < n; ++i) {
    c(s, 1 + i) = src[i];
    c(1 + n + i, t) = dst[i];
    for (std::size_t j = 0; j < n; ++j)
      if (f.relation(i, j)) c(1 + i, 1 + n + j) = std::nullopt;
  }
  auto positive = [](const std::optional<Rational>& q) { return !q || *q > 0; };
  Rational flow = 0;
  for (;;) {
    std::vector<std::size_t> parent(N, N);
    parent[s] = s;
    std::deque<std::size_t> q{s};
    while (!q.empty() && parent[t] == N) {
      std::size_t u = q.front();
      q.pop_front();
      for (std::size_t x = 0; x < N; ++x)
        if (parent[x] == N && positive(c(u, x))) {
          parent[x] = u;
          q.push_back(x);
        }
    }
    if (parent[t] == N) break;
    std::optional<Rational> bottleneck;
    for (std::size_t x = t; x != s; x = parent[x]) {
      const auto& e = c(parent[x], x);
      if (e && (!bottleneck || *e < *bottleneck)) bottleneck = *e;
    }
    // Every s-t path crosses a finite source edge, so bottleneck is set.
    for (std::size_t x = t; x != s; x = parent[x]) {
      auto& fwd = c(parent[x], x);
      auto& back = c(x, parent[x]);
      if (fwd) *fwd -= *bottleneck;
      if (back) *back += *bottleneck;
    }
    flow += *bottleneck;
  }
  return flow == 1;
}

Dbm interior_zone(const Region& r, const Rational& eta) {
  std::size_t m = r.dimension();
  Dbm z = r.to_dbm();
  // λ_i = T_{m-i+1} - T_{m-i} ≥ eta
  for (std::size_t i = 0; i <= m; ++i) frac_upper(z, r, m - i, m - i + 1, -eta);
  z.canonicalize();
  return z;
}

}  // namespace robta
