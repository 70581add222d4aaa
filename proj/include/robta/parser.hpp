#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "robta/model.hpp"

namespace robta {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

/// Line-oriented automaton format; '#' starts a comment.
///
///   clocks x y
///   bound 3
///   locations l0 l1 l2          (optional; otherwise implicit by first use)
///   init l0 "0<x<y<1"           (constraint optional, default is the zero valuation)
///   buchi l2
///   edge l0 l1 "x<1" reset y
TimedAutomaton parse_automaton(std::string_view text);

/// Guard grammar: atom ("&&" atom)*, where an atom is `x<k`, `k<=x`,
/// `x-y<k`, `x==k`, or a chain `k<x<l`. "true" and "" are the empty guard.
Guard parse_guard(std::string_view text, const ClockSet& clocks);

/// Pretty-printer whose output parses back to an identical automaton.
std::string print_automaton(const TimedAutomaton& a);

}  // namespace robta
