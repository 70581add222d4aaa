#include "robta/model.hpp"
#include "robta/region.hpp"

namespace robta {

GuardClassification classify_guard(const Guard& g, std::size_t clock_count, int bound) {
  auto inside = regions_in(g, clock_count, bound);
  GuardClassification out;
  if (inside.empty()) return out;
  out.kind = Punctuality::Punctual;
  for (const auto& r : inside) {
    if (!r.punctual()) {
      // The barycenter has fractional parts j/(m+1); half a step stays put.
      out.kind = Punctuality::NonPunctual;
      out.witness = DelayWitness{r.representative(), Rational(1, 2 * (r.dimension() + 1))};
      return out;
    }
  }
  for (const auto& r : inside) {
    for (const auto& r2 : time_successors(r, bound)) {
      if (r2 == r || !region_satisfies(r2, g)) continue;
      Valuation v = r.representative();
      auto d = delay_into(v, r2, bound);
      if (!d) throw ModelError("time-successor region not reachable from its predecessor");
      out.kind = Punctuality::NonPunctual;
      out.witness = DelayWitness{v, *d};
      return out;
    }
  }
  return out;
}

}  // namespace robta
