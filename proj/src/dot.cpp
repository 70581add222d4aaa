#include "robta/dot.hpp"

#include <sstream>

namespace robta {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

// Qualitative palette; SCC colors wrap around past its end.
const char* const kPalette[] = {"#8dd3c7", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#bebada", "#ffffb3"};

std::string corner_label(const Valuation& c) {
  std::string s = "(";
  for (std::size_t x = 0; x < c.size(); ++x) {
    if (x) s += ",";
    s += to_string(c[x]);
  }
  return s + ")";
}

}  // namespace

std::string automaton_dot(const TimedAutomaton& a) {
  std::ostringstream out;
  out << "digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n";
  for (LocationId l = 0; l < a.locations().size(); ++l)
    out << "  l" << l << " [label=" << quote(a.location_name(l)) << ", shape="
        << (a.is_buchi(l) ? "doublecircle" : "circle") << "];\n";
  std::string init = a.initial_constraint() ? to_string(*a.initial_constraint(), a.clocks()) : "";
  out << "  init -> l" << a.initial() << (init.empty() ? "" : " [label=" + quote(init) + "]") << ";\n";
  for (const auto& e : a.edges()) {
    std::string label = to_string(e.guard, a.clocks());
    if (!e.resets.empty()) {
      label += ", ";
      for (std::size_t i = 0; i < e.resets.size(); ++i) label += (i ? "," : "") + a.clocks().name(e.resets[i]);
      label += ":=0";
    }
    out << "  l" << e.source << " -> l" << e.target << " [label=" << quote(label)
        << (e.punctual() ? ", style=bold" : "") << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string region_graph_dot(const RegionGraph& g, const TimedAutomaton& a) {
  std::ostringstream out;
  out << "digraph regions {\n  node [shape=box, fontsize=10];\n";
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const auto& s = g.states[i];
    out << "  s" << i << " [label=" << quote(a.location_name(s.location) + "\n" + s.region.to_string(a.clocks()));
    if (a.is_buchi(s.location)) out << ", peripheries=2";
    out << "];\n";
  }
  for (std::size_t i : g.initial) out << "  i" << i << " [shape=point];\n  i" << i << " -> s" << i << ";\n";
  for (const auto& t : g.transitions) {
    if (t.kind == RegionGraph::Kind::Delay) {
      if (t.from != t.to) out << "  s" << t.from << " -> s" << t.to << " [style=dashed];\n";
    } else {
      out << "  s" << t.from << " -> s" << t.to << " [label=\"e" << t.edge << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string orbit_graph_dot(const OrbitGraph& g, const ClockSet& clocks) {
  std::ostringstream out;
  out << "digraph orbit {\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n";
  for (std::size_t k = 0; k < g.layers.size(); ++k) {
    out << "  subgraph cluster_" << k << " {\n    label=" << quote(g.layers[k].to_string(clocks)) << ";\n";
    auto cs = g.layers[k].corners();
    for (std::size_t i = 0; i < cs.size(); ++i)
      out << "    n" << k << "_" << i << " [label=" << quote("c" + std::to_string(i))
          << ", tooltip=" << quote(corner_label(cs[i])) << "];\n";
    out << "  }\n";
  }
  for (std::size_t k = 0; k < g.steps.size(); ++k)
    for (std::size_t i = 0; i < g.steps[k].rows(); ++i)
      for (std::size_t j = 0; j < g.steps[k].cols(); ++j)
        if (g.steps[k](i, j)) out << "  n" << k << "_" << i << " -> n" << k + 1 << "_" << j << ";\n";
  out << "}\n";
  return out.str();
}

std::string fog_dot(const FoldedOrbitGraph& f, const ClockSet& clocks, const std::optional<IterationClass>& cls) {
  std::ostringstream out;
  std::string label = f.region.to_string(clocks);
  if (cls) label += "\n" + cls->to_string();
  out << "digraph fog {\n  label=" << quote(label) << ";\n  node [shape=circle, style=filled];\n";
  auto color = scc_colors(f.relation);
  auto cs = f.region.corners();
  for (std::size_t i = 0; i < cs.size(); ++i)
    out << "  c" << i << " [fillcolor=\"" << kPalette[color[i] % std::size(kPalette)]
        << "\", tooltip=" << quote(corner_label(cs[i])) << "];\n";
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if (f.relation(i, j)) out << "  c" << i << " -> c" << j << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace robta
