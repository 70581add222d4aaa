#include "robta/robust.hpp"

namespace robta {

bool is_robust_step(const TimedAutomaton& a, const AtomicStep& s) {
  return a.edge(s.edge).punctual() || !s.delay_target.punctual();
}

std::optional<std::size_t> first_non_robust_step(const TimedAutomaton& a, const RegionPath& path) {
  for (std::size_t k = 0; k < path.size(); ++k)
    if (!is_robust_step(a, path[k])) return k;
  return std::nullopt;
}

bool is_robust(const TimedAutomaton& a, const RegionPath& path) { return !first_non_robust_step(a, path); }

Dbm cpre_atomic(const TimedAutomaton& a, const AtomicStep& step, const Dbm& s, const Rational& delta) {
  const Edge& e = a.edge(step.edge);
  Dbm z = intersect_guard(intersect(step.delay_target.to_dbm(), unreset(s, e.resets, a.bound())), e.guard);
  z = e.punctual() ? pretime_geq(z, 0) : pretime_geq(shrink(z, delta), delta);
  return intersect(step.source.region.to_dbm(), z);
}

Dbm cpre_path(const TimedAutomaton& a, const RegionPath& path, const Dbm& s, const Rational& delta) {
  Dbm z = s;
  for (auto it = path.rbegin(); it != path.rend(); ++it) z = cpre_atomic(a, *it, z, delta);
  return z;
}

ShrunkDbm shrunk_cpre_atomic(const TimedAutomaton& a, const AtomicStep& step, const ShrunkDbm& s) {
  const Edge& e = a.edge(step.edge);
  ShrunkDbm z = intersect_guard(intersect(unreset(s, e.resets, a.bound()), step.delay_target.to_dbm()), e.guard);
  z = e.punctual() ? pretime_geq0(z) : pretime_geq(shrink(z));
  return intersect(z, step.source.region.to_dbm());
}

ShrunkDbm shrunk_cpre_path(const TimedAutomaton& a, const RegionPath& path, const ShrunkDbm& s) {
  ShrunkDbm z = s;
  for (auto it = path.rbegin(); it != path.rend(); ++it) z = shrunk_cpre_atomic(a, *it, z);
  return z;
}

RobustCheck robust_nonempty(const TimedAutomaton& a, const RegionPath& path) {
  RobustCheck out;
  out.offending_step = first_non_robust_step(a, path);
  if (path.empty()) throw ModelError("empty region path");
  ShrunkDbm z = shrunk_cpre_path(a, path, ShrunkDbm(path.back().target.region.to_dbm()));
  out.robust = !z.empty();
  if (out.robust) out.delta0 = z.delta0();
  out.cpre = std::move(z);
  return out;
}

namespace {

bool fixed_in(const Dbm& r, std::size_t i, std::size_t j) {
  const Bound &u = r.at(i, j), &l = r.at(j, i);
  return !u.inf && !l.inf && !u.strict && !l.strict && u.value == -l.value;
}

}  // namespace

Ball interior_ball(const Dbm& zone, const Region& r) {
  Ball b{zone.sample_point(), Rational(0)};
  Dbm rz = r.to_dbm();
  auto val = [&](std::size_t i) { return i == 0 ? Rational(0) : b.center[i - 1]; };
  std::optional<Rational> slack;
  for (std::size_t i = 0; i < zone.dim(); ++i)
    for (std::size_t j = 0; j < zone.dim(); ++j) {
      if (i == j || zone.at(i, j).inf || fixed_in(rz, i, j)) continue;
      Rational s = zone.at(i, j).value - (val(i) - val(j));
      if (!slack || s < *slack) slack = s;
    }
  // A diagonal moves by up to twice the radius, so halve once more.
  if (slack) b.radius = *slack / 4;
  else b.radius = 1;
  return b;
}

Dbm ball_zone(const Valuation& v, const Rational& radius, const Region& r) {
  Dbm z(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    z.constrain(x + 1, 0, Bound::le(v[x] + radius));
    z.constrain(0, x + 1, Bound::le(radius - v[x]));
  }
  z.canonicalize();
  return intersect(z, r.to_dbm());
}

}  // namespace robta
