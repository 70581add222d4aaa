#include "robta/io.hpp"

namespace robta {

const char* to_string(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::Controllable: return "controllable";
    case Verdict::Outcome::NotControllable: return "not-controllable";
    case Verdict::Outcome::ResourceCap: return "resource-cap";
  }
  return "?";
}

json to_json(const Region& r, const ClockSet& clocks) {
  return json{{"text", r.to_string(clocks)}, {"iota", r.iota()}, {"blocks", r.blocks()}};
}

Region region_from_json(const json& j, std::size_t clocks) {
  auto iota = j.at("iota").get<std::vector<long>>();
  if (iota.size() != clocks) throw ModelError("region has the wrong number of clocks");
  return Region(std::move(iota), j.at("blocks").get<std::vector<std::vector<ClockId>>>());
}

json to_json(const RegionState& s, const TimedAutomaton& a) {
  return json{{"location", a.location_name(s.location)}, {"region", to_json(s.region, a.clocks())}};
}

RegionState state_from_json(const json& j, const TimedAutomaton& a) {
  auto name = j.at("location").get<std::string>();
  auto l = a.find_location(name);
  if (!l) throw ModelError("unknown location '" + name + "'");
  return RegionState{*l, region_from_json(j.at("region"), a.clock_count())};
}

json to_json(const RegionPath& p, const TimedAutomaton& a) {
  json out = json::array();
  for (const auto& s : p)
    out.push_back(json{{"source", to_json(s.source, a)},
                       {"delay_target", to_json(s.delay_target, a.clocks())},
                       {"edge", s.edge},
                       {"target", to_json(s.target, a)}});
  return out;
}

RegionPath path_from_json(const json& j, const TimedAutomaton& a) {
  RegionPath p;
  for (const auto& s : j)
    p.push_back(AtomicStep{state_from_json(s.at("source"), a), region_from_json(s.at("delay_target"), a.clock_count()),
                           s.at("edge").get<EdgeId>(), state_from_json(s.at("target"), a)});
  return p;
}

namespace {

std::vector<std::string> rationals(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

std::vector<Rational> rationals_from(const json& j) {
  std::vector<Rational> out;
  for (const auto& s : j) out.push_back(parse_rational(s.get<std::string>()));
  return out;
}

std::vector<std::string> fog_rows(const BoolMatrix& m) {
  std::vector<std::string> rows;
  std::string s = m.to_string();
  std::size_t i = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(s.substr(i, m.cols()));
    i += m.cols() + 1;
  }
  return rows;
}

BoolMatrix fog_from_rows(const json& j) {
  auto rows = j.get<std::vector<std::string>>();
  BoolMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw ModelError("folded orbit graph is not square");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[i][k] != '0' && rows[i][k] != '1') throw ModelError("folded orbit graph rows must be 0/1 strings");
      if (rows[i][k] == '1') m.set(i, k);
    }
  }
  return m;
}

json classes_of(const CornerPartition& p) {
  json out = json::array();
  for (std::size_t c = 0; c < p.colors(); ++c) {
    json cls = json::array();
    for (std::size_t i = 0; i < p.color.size(); ++i)
      if (p.color[i] == c) cls.push_back("c" + std::to_string(i));
    out.push_back(cls);
  }
  return out;
}

std::vector<std::string> locations_of(const RegionPath& p, const TimedAutomaton& a) {
  std::vector<std::string> out;
  for (const auto& s : p) out.push_back(a.location_name(s.source.location));
  return out;
}

}  // namespace

json to_json(const LassoWitness& w, const TimedAutomaton& a) {
  return json{{"anchor", to_json(w.anchor, a)},
              {"prefix", to_json(w.prefix, a)},
              {"cycle", to_json(w.cycle, a)},
              {"cycle_locations", locations_of(w.cycle, a)},
              {"fog", fog_rows(w.fog)},
              {"k", w.k},
              {"partition", {{"colors", w.partition.color}, {"classes", classes_of(w.partition)}}},
              {"slice", rationals(w.slice)},
              {"eta", to_string(w.eta)},
              {"delta0", to_string(w.delta0)}};
}

LassoWitness witness_from_json(const json& j, const TimedAutomaton& a) {
  if (j.contains("witness")) {
    if (j.at("witness").is_null()) throw ModelError("verdict carries no witness");
    return witness_from_json(j.at("witness"), a);
  }
  LassoWitness w;
  w.anchor = state_from_json(j.at("anchor"), a);
  w.prefix = path_from_json(j.at("prefix"), a);
  w.cycle = path_from_json(j.at("cycle"), a);
  w.fog = fog_from_rows(j.at("fog"));
  w.k = j.at("k").get<std::size_t>();
  w.partition = CornerPartition{w.anchor.region, j.at("partition").at("colors").get<std::vector<std::size_t>>()};
  if (w.partition.color.size() != w.anchor.region.dimension() + 1)
    throw ModelError("partition does not color every corner of the anchor region");
  w.slice = rationals_from(j.at("slice"));
  w.eta = parse_rational(j.at("eta").get<std::string>());
  w.delta0 = parse_rational(j.at("delta0").get<std::string>());
  return w;
}

json to_json(const Verdict& v, const TimedAutomaton& a, bool timing) {
  json out{{"controllable", v.controllable()}, {"outcome", to_string(v.outcome)}};
  if (!v.note.empty()) out["note"] = v.note;
  out["initial"] = v.initial_constraint ? "some valuation of some initial region" : "zero valuation";
  out["witness"] = v.witness ? to_json(*v.witness, a) : json(nullptr);
  json anchors = json::array();
  for (const auto& r : v.anchors) {
    json fogs = json::array();
    for (const auto& f : r.fogs)
      fogs.push_back(json{{"fog", fog_rows(f.fog)},
                          {"classification", f.iteration.to_string()},
                          {"cycle_length", f.cycle_length}});
    anchors.push_back(json{{"anchor", to_json(r.anchor, a)},
                           {"search_nodes", r.search_nodes},
                           {"budget_exceeded", r.budget_exceeded},
                           {"fogs", fogs}});
  }
  out["anchors"] = anchors;
  json stats{{"regions", v.stats.regions},
             {"anchors", v.stats.anchors},
             {"fogs", v.stats.fogs},
             {"search_nodes", v.stats.search_nodes}};
  if (timing) stats["time"] = v.stats.seconds;
  out["stats"] = stats;
  return out;
}

}  // namespace robta
