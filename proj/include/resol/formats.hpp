#pragma once

#include <string>

#include "resol/machines.hpp"
#include "resol/queries.hpp"

namespace resol {

// All parsers report problems as ParseError with file, line and column.
// Lines may carry '#' comments; blank lines are ignored.

// .w: one "HEAD <- BODY" flow per line.
Wiring parse_wiring_text(std::string_view text, const std::string& file = "");
Wiring load_wiring(const std::string& path);

// .aut: "states:", "init:", "input:", "stack:", "heads:" headers followed by
// "trans:" and one transition per line, e.g.
//   (scan; o; bot) -> (scan; +1; push s)
// A "stay" action is sugar: the parser splits it into a marker push and a
// matching pop through a synthesized state.
Automaton parse_automaton_text(std::string_view text,
                               const std::string& file = "");
Automaton load_automaton(const std::string& path);

// .ckt: "gate ID = and(A,B) | or(A,B) | not(A) | zero | one" lines and one
// "output ID" line.
Circuit parse_circuit_text(std::string_view text, const std::string& file = "");
Circuit load_circuit(const std::string& path);

// .q: "data:", "program:" and "goal:" sections; data and goal hold terms,
// the program holds flows.
UnaryQuery parse_query_text(std::string_view text,
                            const std::string& file = "");
UnaryQuery load_query(const std::string& path);
std::string format_query(const UnaryQuery& q);

std::string read_file(const std::string& path);  // throws on I/O failure
void write_file(const std::string& path, std::string_view content);

}  // namespace resol
