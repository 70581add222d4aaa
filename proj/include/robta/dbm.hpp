#pragma once

#include <optional>
#include <string>
#include <vector>

#include "robta/model.hpp"
#include "robta/rational.hpp"

namespace robta {

/// A DBM entry: x_i - x_j ⪯ value, or no constraint when `inf`.
struct Bound {
  Rational value;
  bool strict = false;
  bool inf = false;

  static Bound infinity() { return Bound{Rational(0), false, true}; }
  static Bound le(const Rational& v) { return Bound{v, false, false}; }
  static Bound lt(const Rational& v) { return Bound{v, true, false}; }

  bool operator==(const Bound&) const = default;
};

bool operator<(const Bound& a, const Bound& b);
Bound operator+(const Bound& a, const Bound& b);
inline const Bound& min(const Bound& a, const Bound& b) { return b < a ? b : a; }

/// Difference bound matrix over clocks 1..n with index 0 the constant-zero
/// reference clock. Entry (i,j) bounds x_i - x_j. All instances keep clocks
/// non-negative; most constructors also impose the box [0,M].
class Dbm {
 public:
  /// Every valuation with non-negative clocks.
  explicit Dbm(std::size_t clocks);
  /// [0,bound]^X.
  static Dbm box(std::size_t clocks, int bound);
  /// [0,bound]^X ∩ g, canonical.
  static Dbm from_guard(const Guard& g, std::size_t clocks, int bound);
  /// The single valuation v.
  static Dbm point(const Valuation& v);

  std::size_t dim() const { return n_; }  // clocks + 1
  std::size_t clocks() const { return n_ - 1; }
  const Bound& at(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, const Bound& b) { m_[i * n_ + j] = b; }
  /// at(i,j) := min(at(i,j), b); leaves the matrix non-canonical.
  void constrain(std::size_t i, std::size_t j, const Bound& b);
  void constrain(const AtomicConstraint& a);

  /// Floyd–Warshall closure. Returns false (and marks empty) on a negative cycle.
  bool canonicalize();
  bool empty() const { return empty_; }

  bool contains(const Valuation& v) const;
  /// Inclusion of canonical DBMs.
  bool includes(const Dbm& other) const;
  bool operator==(const Dbm& other) const;

  /// A valuation inside the (canonical, non-empty) zone, chosen clock by
  /// clock at the midpoint of the feasible interval.
  Valuation sample_point() const;

  /// "0<x && x-y<1/2 && ..." over the non-trivial entries.
  std::string to_string(const ClockSet& clocks) const;

 private:
  std::size_t n_;
  std::vector<Bound> m_;
  bool empty_ = false;
};

Dbm intersect(const Dbm& a, const Dbm& b);
Dbm intersect_guard(const Dbm& z, const Guard& g);
/// {ν ≥ 0 | ∃d ≥ delta, ν+d ∈ z}.
Dbm pretime_geq(const Dbm& z, const Rational& delta);
/// {ν ∈ [0,bound]^X | ν[R:=0] ∈ z}.
Dbm unreset(const Dbm& z, const std::vector<ClockId>& resets, int bound);
/// {ν | ν+ε ∈ z for every ε ∈ [-delta, delta]}.
Dbm shrink(const Dbm& z, const Rational& delta);

// ---------------------------------------------------------------------------
// Shrunk DBMs: entries m - δ·p with an integer shrinking coefficient p. Every
// comparison is decided for infinitesimal δ and the smallest positive
// crossing point seen is kept as `limit`; below it, instantiation commutes
// with canonicalization and with every operation below.

struct ShrunkBound {
  Rational m;
  long p = 0;
  bool strict = false;
  bool inf = false;

  static ShrunkBound infinity() { return ShrunkBound{Rational(0), 0, false, true}; }
  static ShrunkBound from(const Bound& b) { return ShrunkBound{b.value, 0, b.strict, b.inf}; }
  Bound at(const Rational& delta) const;

  bool operator==(const ShrunkBound&) const = default;
};

class ShrunkDbm {
 public:
  explicit ShrunkDbm(const Dbm& base);

  std::size_t dim() const { return n_; }
  std::size_t clocks() const { return n_ - 1; }
  const ShrunkBound& at(std::size_t i, std::size_t j) const { return m_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, const ShrunkBound& b) { m_[i * n_ + j] = b; }

  /// Empty for every sufficiently small δ > 0.
  bool empty() const { return empty_; }
  /// Exclusive upper end of the δ range where the symbolic form is exact;
  /// nullopt when no crossing was recorded.
  const std::optional<Rational>& limit() const { return limit_; }
  /// Certified value: instantiation is exact for all 0 < δ ≤ delta0().
  Rational delta0() const;
  bool valid_at(const Rational& delta) const { return delta > 0 && (!limit_ || delta < *limit_); }

  /// The base matrix M (entries m) and shrinking matrix P (entries p).
  Dbm base() const;
  std::vector<long> shrinking_matrix() const;

  /// Canonical form of M - δP.
  Dbm instantiate(const Rational& delta) const;

  bool canonicalize();
  void restrict_limit(const Rational& delta);

  bool operator==(const ShrunkDbm& other) const;
  std::string to_string(const ClockSet& clocks) const;

 private:
  bool less(const ShrunkBound& a, const ShrunkBound& b);  // records crossings
  friend ShrunkDbm intersect(const ShrunkDbm& a, const ShrunkDbm& b);
  friend ShrunkDbm intersect(const ShrunkDbm& a, const Dbm& b);
  friend ShrunkDbm pretime_geq(const ShrunkDbm& z);
  friend ShrunkDbm pretime_geq0(const ShrunkDbm& z);
  friend ShrunkDbm unreset(const ShrunkDbm& z, const std::vector<ClockId>& resets, int bound);
  friend ShrunkDbm shrink(const ShrunkDbm& z);

  std::size_t n_;
  std::vector<ShrunkBound> m_;
  bool empty_ = false;
  std::optional<Rational> limit_;
};

ShrunkDbm intersect(const ShrunkDbm& a, const ShrunkDbm& b);
ShrunkDbm intersect(const ShrunkDbm& a, const Dbm& b);
ShrunkDbm intersect_guard(const ShrunkDbm& z, const Guard& g);
/// Parametric PreTime_{≥δ}.
ShrunkDbm pretime_geq(const ShrunkDbm& z);
/// PreTime_{≥0}.
ShrunkDbm pretime_geq0(const ShrunkDbm& z);
ShrunkDbm unreset(const ShrunkDbm& z, const std::vector<ClockId>& resets, int bound);
/// Parametric Shrink_δ.
ShrunkDbm shrink(const ShrunkDbm& z);

/// Whether z ⊆ s(δ) for every sufficiently small δ > 0. When it holds,
/// `below` is an exclusive bound under which it does, already capped by the
/// validity limit of s (nullopt: no bound).
struct SmallDeltaInclusion {
  bool holds = false;
  std::optional<Rational> below;
};
SmallDeltaInclusion included_for_small_delta(const Dbm& z, const ShrunkDbm& s);

}  // namespace robta
