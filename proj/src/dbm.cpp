#include "robta/dbm.hpp"

#include <sstream>

namespace robta {

bool operator<(const Bound& a, const Bound& b) {
  if (a.inf) return false;
  if (b.inf) return true;
  if (a.value != b.value) return a.value < b.value;
  return a.strict && !b.strict;
}

Bound operator+(const Bound& a, const Bound& b) {
  if (a.inf || b.inf) return Bound::infinity();
  return Bound{a.value + b.value, a.strict || b.strict, false};
}

Dbm::Dbm(std::size_t clocks) : n_(clocks + 1), m_(n_ * n_, Bound::infinity()) {
  for (std::size_t i = 0; i < n_; ++i) {
    set(i, i, Bound::le(0));
    set(0, i, Bound::le(0));
  }
}

Dbm Dbm::box(std::size_t clocks, int bound) {
  Dbm z(clocks);
  for (std::size_t i = 1; i <= clocks; ++i) z.set(i, 0, Bound::le(bound));
  z.canonicalize();
  return z;
}

Dbm Dbm::from_guard(const Guard& g, std::size_t clocks, int bound) { return intersect_guard(box(clocks, bound), g); }

Dbm Dbm::point(const Valuation& v) {
  Dbm z(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    z.set(i + 1, 0, Bound::le(v[i]));
    z.set(0, i + 1, Bound::le(-v[i]));
  }
  z.canonicalize();
  return z;
}

void Dbm::constrain(std::size_t i, std::size_t j, const Bound& b) {
  if (b < at(i, j)) set(i, j, b);
}

void Dbm::constrain(const AtomicConstraint& a) {
  std::size_t i = a.clock + 1, j = a.minus ? *a.minus + 1 : 0;
  if (a.upper) constrain(i, j, Bound{Rational(a.upper->value), a.upper->strict, false});
  if (a.lower) constrain(j, i, Bound{Rational(-a.lower->value), a.lower->strict, false});
}

bool Dbm::canonicalize() {
  if (empty_) return false;
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i) {
      if (at(i, k).inf) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (at(k, j).inf) continue;
        Bound via = at(i, k) + at(k, j);
        if (via < at(i, j)) set(i, j, via);
      }
      if (at(i, i) < Bound::le(0)) {
        empty_ = true;
        return false;
      }
    }
  return true;
}

bool Dbm::contains(const Valuation& v) const {
  if (empty_) return false;
  auto val = [&](std::size_t i) { return i == 0 ? Rational(0) : v[i - 1]; };
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const Bound& b = at(i, j);
      if (b.inf) continue;
      Rational d = val(i) - val(j);
      if (b.strict ? !(d < b.value) : !(d <= b.value)) return false;
    }
  return true;
}

bool Dbm::includes(const Dbm& other) const {
  if (other.empty_) return true;
  if (empty_) return false;
  for (std::size_t k = 0; k < m_.size(); ++k)
    if (m_[k] < other.m_[k]) return false;
  return true;
}

bool Dbm::operator==(const Dbm& other) const {
  if (empty_ || other.empty_) return empty_ == other.empty_ && n_ == other.n_;
  return n_ == other.n_ && m_ == other.m_;
}

Valuation Dbm::sample_point() const {
  if (empty_) throw ModelError("sample_point on an empty zone");
  Dbm z = *this;
  Valuation v = Valuation::zero(clocks());
  for (std::size_t k = 1; k < n_; ++k) {
    Rational lo = -z.at(0, k).value;
    const Bound& up = z.at(k, 0);
    Rational c = up.inf ? Rational(lo + 1) : Rational((lo + up.value) / 2);
    c.canonicalize();
    v[k - 1] = c;
    z.set(k, 0, Bound::le(c));
    z.set(0, k, Bound::le(-c));
    if (!z.canonicalize()) throw ModelError("sample_point: zone was not canonical");
  }
  return v;
}

std::string Dbm::to_string(const ClockSet& clocks) const {
  if (empty_) return "false";
  std::vector<std::string> parts;
  auto name = [&](std::size_t i) { return clocks.name(i - 1); };
  for (std::size_t i = 1; i < n_; ++i) {
    const Bound& lo = at(0, i);
    if (!(lo == Bound::le(0))) parts.push_back(robta::to_string(Rational(-lo.value)) + (lo.strict ? "<" : "<=") + name(i));
    const Bound& up = at(i, 0);
    if (!up.inf) parts.push_back(name(i) + (up.strict ? "<" : "<=") + robta::to_string(up.value));
  }
  for (std::size_t i = 1; i < n_; ++i)
    for (std::size_t j = 1; j < n_; ++j) {
      if (i == j || at(i, j).inf) continue;
      parts.push_back(name(i) + "-" + name(j) + (at(i, j).strict ? "<" : "<=") + robta::to_string(at(i, j).value));
    }
  if (parts.empty()) return "true";
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " && ") + p;
  return out;
}

Dbm intersect(const Dbm& a, const Dbm& b) {
  if (a.empty()) return a;
  if (b.empty()) return b;
  Dbm out = a;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out.constrain(i, j, b.at(i, j));
  out.canonicalize();
  return out;
}

Dbm intersect_guard(const Dbm& z, const Guard& g) {
  if (z.empty()) return z;
  Dbm out = z;
  for (const auto& a : g.atoms) out.constrain(a);
  out.canonicalize();
  return out;
}

Dbm pretime_geq(const Dbm& z, const Rational& delta) {
  if (z.empty()) return z;
  Dbm out = z;
  for (std::size_t i = 1; i < z.dim(); ++i) {
    out.set(i, 0, z.at(i, 0) + Bound::le(-delta));
    out.set(0, i, Bound::le(0));
  }
  out.canonicalize();
  return out;
}

Dbm unreset(const Dbm& z, const std::vector<ClockId>& resets, int bound) {
  if (z.empty() || resets.empty()) return z;
  Dbm out = z;
  for (ClockId c : resets) {
    out.constrain(c + 1, 0, Bound::le(0));
    out.constrain(0, c + 1, Bound::le(0));
  }
  if (!out.canonicalize()) return out;
  for (ClockId c : resets) {
    std::size_t x = c + 1;
    for (std::size_t k = 0; k < out.dim(); ++k) {
      if (k == x) continue;
      out.set(x, k, Bound::infinity());
      out.set(k, x, Bound::infinity());
    }
    out.set(x, 0, Bound::le(bound));
    out.set(0, x, Bound::le(0));
  }
  out.canonicalize();
  return out;
}

Dbm shrink(const Dbm& z, const Rational& delta) {
  if (z.empty()) return z;
  Dbm out = z;
  for (std::size_t i = 1; i < z.dim(); ++i) {
    out.set(i, 0, z.at(i, 0) + Bound::le(-delta));
    out.set(0, i, z.at(0, i) + Bound::le(-delta));
  }
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------- shrunk

namespace {

ShrunkBound add(const ShrunkBound& a, const ShrunkBound& b) {
  if (a.inf || b.inf) return ShrunkBound::infinity();
  return ShrunkBound{a.m + b.m, a.p + b.p, a.strict || b.strict, false};
}

const ShrunkBound kZero{Rational(0), 0, false, false};

}  // namespace

Bound ShrunkBound::at(const Rational& delta) const {
  if (inf) return Bound::infinity();
  return Bound{m - delta * p, strict, false};
}

ShrunkDbm::ShrunkDbm(const Dbm& base) : n_(base.dim()), m_(n_ * n_) {
  Dbm c = base;
  c.canonicalize();
  empty_ = c.empty();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) set(i, j, ShrunkBound::from(c.at(i, j)));
}

void ShrunkDbm::restrict_limit(const Rational& delta) {
  if (!limit_ || delta < *limit_) limit_ = delta;
}

bool ShrunkDbm::less(const ShrunkBound& a, const ShrunkBound& b) {
  if (a.inf) return false;
  if (b.inf) return true;
  if (a.m != b.m) {
    if (a.p != b.p) {
      Rational cross = (a.m - b.m) / Rational(a.p - b.p);
      if (cross > 0) restrict_limit(cross);
    }
    return a.m < b.m;
  }
  if (a.p != b.p) return a.p > b.p;
  return a.strict && !b.strict;
}

bool ShrunkDbm::canonicalize() {
  if (empty_) return false;
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i) {
      if (at(i, k).inf) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (at(k, j).inf) continue;
        ShrunkBound via = add(at(i, k), at(k, j));
        if (less(via, at(i, j))) set(i, j, via);
      }
      if (less(at(i, i), kZero)) {
        empty_ = true;
        return false;
      }
    }
  return true;
}

Rational ShrunkDbm::delta0() const { return limit_ ? Rational(*limit_ / 2) : Rational(1); }

Dbm ShrunkDbm::base() const {
  Dbm z(clocks());
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) z.set(i, j, ShrunkBound{at(i, j).m, 0, at(i, j).strict, at(i, j).inf}.at(0));
  return z;
}

std::vector<long> ShrunkDbm::shrinking_matrix() const {
  std::vector<long> p(m_.size());
  for (std::size_t k = 0; k < m_.size(); ++k) p[k] = m_[k].inf ? 0 : m_[k].p;
  return p;
}

Dbm ShrunkDbm::instantiate(const Rational& delta) const {
  Dbm z(clocks());
  if (empty_) {
    z.set(0, 0, Bound::lt(0));
    z.canonicalize();
    return z;
  }
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) z.set(i, j, at(i, j).at(delta));
  z.canonicalize();
  return z;
}

bool ShrunkDbm::operator==(const ShrunkDbm& other) const {
  if (empty_ || other.empty_) return empty_ == other.empty_ && n_ == other.n_;
  return n_ == other.n_ && m_ == other.m_;
}

std::string ShrunkDbm::to_string(const ClockSet& clocks) const {
  if (empty_) return "false";
  auto name = [&](std::size_t i) { return i == 0 ? std::string("0") : clocks.name(i - 1); };
  std::string out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& b = at(i, j);
      if (i == j || b.inf) continue;
      if (i == 0 && b == kZero) continue;
      std::ostringstream os;
      os << name(i) << "-" << name(j) << (b.strict ? "<" : "<=") << robta::to_string(b.m);
      if (b.p) os << "-" << b.p << "d";
      out += (out.empty() ? "" : " && ") + os.str();
    }
  return out.empty() ? "true" : out;
}

ShrunkDbm intersect(const ShrunkDbm& a, const ShrunkDbm& b) {
  ShrunkDbm out = a;
  if (b.limit_) out.restrict_limit(*b.limit_);
  if (a.empty_ || b.empty_) {
    out.empty_ = true;
    return out;
  }
  for (std::size_t k = 0; k < out.m_.size(); ++k)
    if (out.less(b.m_[k], out.m_[k])) out.m_[k] = b.m_[k];
  out.canonicalize();
  return out;
}

ShrunkDbm intersect(const ShrunkDbm& a, const Dbm& b) { return intersect(a, ShrunkDbm(b)); }

ShrunkDbm intersect_guard(const ShrunkDbm& z, const Guard& g) {
  Dbm constraints(z.clocks());
  for (const auto& a : g.atoms) constraints.constrain(a);
  return intersect(z, constraints);
}

ShrunkDbm pretime_geq(const ShrunkDbm& z) {
  ShrunkDbm out = z;
  if (out.empty_) return out;
  for (std::size_t i = 1; i < z.n_; ++i) {
    auto b = z.at(i, 0);
    if (!b.inf) b.p += 1;
    out.set(i, 0, b);
    out.set(0, i, kZero);
  }
  out.canonicalize();
  return out;
}

ShrunkDbm pretime_geq0(const ShrunkDbm& z) {
  ShrunkDbm out = z;
  if (out.empty_) return out;
  for (std::size_t i = 1; i < z.n_; ++i) out.set(0, i, kZero);
  out.canonicalize();
  return out;
}

ShrunkDbm unreset(const ShrunkDbm& z, const std::vector<ClockId>& resets, int bound) {
  ShrunkDbm out = z;
  if (out.empty_ || resets.empty()) return out;
  for (ClockId c : resets) {
    std::size_t x = c + 1;
    if (out.less(kZero, out.at(x, 0))) out.set(x, 0, kZero);
    if (out.less(kZero, out.at(0, x))) out.set(0, x, kZero);
  }
  if (!out.canonicalize()) return out;
  for (ClockId c : resets) {
    std::size_t x = c + 1;
    for (std::size_t k = 0; k < out.n_; ++k) {
      if (k == x) continue;
      out.set(x, k, ShrunkBound::infinity());
      out.set(k, x, ShrunkBound::infinity());
    }
    out.set(x, 0, ShrunkBound{Rational(bound), 0, false, false});
    out.set(0, x, kZero);
  }
  out.canonicalize();
  return out;
}

ShrunkDbm shrink(const ShrunkDbm& z) {
  ShrunkDbm out = z;
  if (out.empty_) return out;
  for (std::size_t i = 1; i < z.n_; ++i) {
    auto up = z.at(i, 0), lo = z.at(0, i);
    if (!up.inf) up.p += 1;
    if (!lo.inf) lo.p += 1;
    out.set(i, 0, up);
    out.set(0, i, lo);
  }
  out.canonicalize();
  return out;
}

SmallDeltaInclusion included_for_small_delta(const Dbm& z, const ShrunkDbm& s) {
  SmallDeltaInclusion out;
  out.below = s.limit();
  auto cap = [&](const Rational& d) {
    if (!out.below || d < *out.below) out.below = d;
  };
  if (z.empty()) {
    out.holds = true;
    return out;
  }
  if (s.empty()) return out;
  for (std::size_t i = 0; i < z.dim(); ++i)
    for (std::size_t j = 0; j < z.dim(); ++j) {
      const Bound& zb = z.at(i, j);
      const ShrunkBound& sb = s.at(i, j);
      if (sb.inf) continue;
      if (zb.inf) return out;
      if (sb.p <= 0) {
        if (Bound{sb.m, sb.strict, false} < zb) return out;
        continue;
      }
      if (zb.value >= sb.m) return out;
      cap((sb.m - zb.value) / Rational(sb.p));
    }
  out.holds = true;
  return out;
}

}  // namespace robta
