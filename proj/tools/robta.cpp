// Command-line front end.
//
// Exit codes: 0 controllable / valid / ok, 1 not controllable / invalid,
// 2 resource cap, 3 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "robta/dot.hpp"
#include "robta/game.hpp"
#include "robta/io.hpp"
#include "robta/parser.hpp"

using namespace robta;

namespace {

constexpr int kInputError = 3;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TimedAutomaton load(const std::string& path) {
  try {
    return parse_automaton(slurp(path));
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

SearchBudget parse_budget(const std::string& s) {
  SearchBudget b;
  if (s.empty()) return b;
  auto comma = s.find(',');
  try {
    b.max_states = std::stoul(s.substr(0, comma));
    if (comma != std::string::npos) b.max_fogs = std::stoul(s.substr(comma + 1));
  } catch (const std::exception&) {
    throw InputError("--budget expects <states>[,<fogs>]");
  }
  return b;
}

Rational parse_delta(const std::string& s) {
  try {
    Rational d = parse_rational(s);
    if (d <= 0) throw InputError("--delta must be positive");
    return d;
  } catch (const std::invalid_argument&) {
    throw InputError("--delta expects a rational such as 1/10");
  }
}

// "l1: y=0 && 0<x<1"
RegionState parse_anchor(const TimedAutomaton& a, const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("--anchor expects \"<location>: <region guard>\"");
  std::string name = text.substr(0, colon);
  name.erase(0, name.find_first_not_of(" \t"));
  name.erase(name.find_last_not_of(" \t") + 1);
  auto l = a.find_location(name);
  if (!l) throw InputError("unknown location '" + name + "'");
  Guard g;
  try {
    g = parse_guard(text.substr(colon + 1), a.clocks());
  } catch (const ParseError& e) {
    throw InputError(std::string("--anchor: ") + e.what());
  }
  auto r = region_from_guard(g, a.clock_count(), a.bound());
  if (!r) throw InputError("--anchor guard does not describe a single region");
  return RegionState{*l, *r};
}

std::vector<LocationId> parse_locations(const TimedAutomaton& a, const std::string& text) {
  std::vector<LocationId> out;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto l = a.find_location(name);
    if (!l) throw InputError("unknown location '" + name + "' in --cycle");
    out.push_back(*l);
  }
  if (out.empty()) throw InputError("--cycle is empty");
  return out;
}

RegionPath resolve_cycle(const TimedAutomaton& a, const RegionState& anchor, const std::string& cycle) {
  auto locs = parse_locations(a, cycle);
  if (locs[0] != anchor.location) throw InputError("--cycle must start at the anchor's location");
  auto path = cycle_through(a, anchor, locs);
  if (!path) throw InputError("no region cycle through " + cycle + " returns to the anchor");
  return *path;
}

int exit_for(Verdict::Outcome o) {
  switch (o) {
    case Verdict::Outcome::Controllable: return 0;
    case Verdict::Outcome::NotControllable: return 1;
    case Verdict::Outcome::ResourceCap: return 2;
  }
  return kInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust controller synthesis for timed automata under bounded perturbations"};
  app.require_subcommand(1);

  std::string model, budget, format, anchor_text, cycle_text, witness_path, delta_text;
  std::string controller = "slice", mode = "midpoint", perturbator = "sigma";
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000;
  bool timing = false;

  auto* check = app.add_subcommand("check", "decide controllability and print the verdict as JSON");
  check->add_option("model", model, "automaton file")->required();
  check->add_option("--budget", budget, "<states>,<fogs> search limits");
  check->add_option("--threads", threads, "anchor-parallel workers")->check(CLI::PositiveNumber);
  check->add_flag("--timing", timing, "include wall-clock time in the stats");

  auto* regions = app.add_subcommand("regions", "print the reachable region automaton");
  regions->add_option("model", model, "automaton file")->required();
  regions->add_option("--format", format, "dot (default) or json")->check(CLI::IsMember({"dot", "json"}));

  auto* fog = app.add_subcommand("fog", "fold a region cycle and classify its iterates");
  fog->add_option("model", model, "automaton file")->required();
  fog->add_option("--anchor", anchor_text, "\"<location>: <region guard>\"")->required();
  fog->add_option("--cycle", cycle_text, "comma-separated locations, starting at the anchor's")->required();
  fog->add_option("--format", format, "dot (default) or json")->check(CLI::IsMember({"dot", "json"}));

  auto* sim = app.add_subcommand("simulate", "play the robustness game and print the trace");
  sim->add_option("model", model, "automaton file")->required();
  sim->add_option("--controller", controller, "slice, scripted or greedy")
      ->check(CLI::IsMember({"slice", "scripted", "greedy"}));
  sim->add_option("--mode", mode, "scripted delay choice")
      ->check(CLI::IsMember({"earliest", "latest", "midpoint", "random"}));
  sim->add_option("--perturbator", perturbator, "sigma, random or none")
      ->check(CLI::IsMember({"sigma", "random", "none"}));
  sim->add_option("--delta", delta_text, "perturbation bound (default: half the certified bound, or 1/10)");
  sim->add_option("--seed", seed, "seed for randomized strategies");
  sim->add_option("--max-steps", max_steps, "Controller moves before stopping");
  sim->add_option("--anchor", anchor_text, "scripted controller: \"<location>: <region guard>\"");
  sim->add_option("--cycle", cycle_text, "scripted controller: comma-separated locations");
  sim->add_option("--witness", witness_path, "slice controller: witness file (default: run check)");
  sim->add_option("--budget", budget, "<states>,<fogs> search limits for the implicit check");
  sim->add_option("--format", format, "json (JSON lines, default) or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* val = app.add_subcommand("validate", "re-check a witness against its automaton");
  val->add_option("model", model, "automaton file")->required();
  val->add_option("witness", witness_path, "witness or verdict JSON")->required();
  val->add_option("--delta", delta_text, "check this perturbation bound instead of the recorded one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    TimedAutomaton a = load(model);

    if (*check) {
      SynthesisOptions opt{parse_budget(budget), threads, std::nullopt};
      Verdict v = decide(a, opt);
      std::cout << to_json(v, a, timing).dump(2) << "\n";
      return exit_for(v.outcome);
    }

    if (*regions) {
      RegionGraph g = build_region_automaton(a);
      if (format == "json") {
        json states = json::array();
        for (const auto& s : g.states) states.push_back(to_json(s, a));
        json edges = json::array();
        for (const auto& t : g.transitions)
          edges.push_back(json{{"from", t.from},
                               {"to", t.to},
                               {"kind", t.kind == RegionGraph::Kind::Delay ? "delay" : "edge"},
                               {"edge", t.edge}});
        std::cout << json{{"states", states}, {"transitions", edges}, {"initial", g.initial}}.dump(2) << "\n";
      } else {
        std::cout << region_graph_dot(g, a);
      }
      return 0;
    }

    if (*fog) {
      RegionState anchor = parse_anchor(a, anchor_text);
      RegionPath cycle = resolve_cycle(a, anchor, cycle_text);
      FoldedOrbitGraph f = fog_of_cycle(a, cycle);
      IterationClass cls = iterate_classify(f);
      if (format == "json") {
        json j{{"anchor", to_json(anchor, a)},
               {"cycle", to_json(cycle, a)},
               {"fog", f.relation.to_string()},
               {"cluster", is_cluster(f)},
               {"classification", cls.to_string()},
               {"robust", is_robust(a, cycle)}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "// classification: " << cls.to_string() << "\n" << fog_dot(f, a.clocks(), cls);
      }
      return 0;
    }

    if (*sim) {
      std::unique_ptr<Controller> cont;
      GameConfig cfg;
      cfg.max_steps = max_steps;
      cfg.start_location = a.initial();
      cfg.start = Valuation::zero(a.clock_count());
      if (controller == "slice") {
        LassoWitness w;
        if (!witness_path.empty()) {
          w = witness_from_json(json::parse(slurp(witness_path)), a);
        } else {
          Verdict v = decide(a, SynthesisOptions{parse_budget(budget), 1, std::nullopt});
          if (!v.witness) {
            std::cerr << "no winning lasso; the slice controller needs a witness\n";
            return exit_for(v.outcome);
          }
          w = *v.witness;
        }
        cfg.delta = delta_text.empty() ? Rational(w.delta0 / 2) : parse_delta(delta_text);
        cont = slice_controller(a, w, cfg.delta);
        cfg.start = slice_start(a, w, cfg.delta);
        cfg.anchor = w.anchor;
        cfg.partition = w.partition;
      } else {
        cfg.delta = delta_text.empty() ? Rational(1, 10) : parse_delta(delta_text);
        if (!anchor_text.empty()) {
          cfg.anchor = parse_anchor(a, anchor_text);
        }
        if (controller == "scripted") {
          if (!cfg.anchor || cycle_text.empty()) throw InputError("the scripted controller needs --anchor and --cycle");
          RegionPath cycle = resolve_cycle(a, *cfg.anchor, cycle_text);
          ScriptMode m = mode == "earliest" ? ScriptMode::Earliest
                         : mode == "latest" ? ScriptMode::Latest
                         : mode == "random" ? ScriptMode::Random
                                            : ScriptMode::Midpoint;
          cont = scripted_controller(a, cycle, cfg.delta, m, seed);
          cfg.start_location = cfg.anchor->location;
          cfg.start = cfg.anchor->region.representative();
          if (auto in = initial_escaping_scc(fog_of_cycle(a, cycle).relation)) cfg.lyapunov = LyapunovTracker{*in};
        } else {
          cont = greedy_controller(a, cfg.delta);
          if (a.initial_constraint()) {
            Dbm z = Dbm::from_guard(*a.initial_constraint(), a.clock_count(), a.bound());
            if (z.empty()) throw InputError("initial constraint is empty");
            cfg.start = z.sample_point();
          }
        }
      }
      std::unique_ptr<Perturbator> pert = perturbator == "sigma"    ? sigma_p(a, cfg.delta)
                                          : perturbator == "random" ? random_perturbator(cfg.delta, seed)
                                                                    : no_perturbator();
      PlayTrace t = simulate(a, cfg, *cont, *pert);
      std::cout << (format == "csv" ? trace_csv(t) : trace_jsonl(t, a));
      return 0;
    }

    if (*val) {
      LassoWitness w = witness_from_json(json::parse(slurp(witness_path)), a);
      if (!delta_text.empty()) w.delta0 = parse_delta(delta_text);
      auto failures = validate(w, a);
      for (const auto& f : failures) std::cout << "invalid: " << f << "\n";
      if (failures.empty()) std::cout << "valid\n";
      return failures.empty() ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const IllegalMove& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
