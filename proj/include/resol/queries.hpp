#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resol/stack.hpp"

namespace resol {

// A unary logic programming query: does some element of the data rewrite to
// the goal under the program?
struct UnaryQuery {
  std::vector<TermId> data;  // closed unary terms
  StackWiring program;
  TermId goal;
};

// Data terms become START-guarded pushes and the goal an ACCEPT-guarded
// pop; the base constant of each term is replaced by its unary twin so that
// constants survive as stack symbols.
SymbolId twin_symbol(SymbolId constant);
StackOp encode_data_term(TermId d);
StackWiring encode_data(const std::vector<TermId>& data);
StackOp encode_goal(TermId g);

struct QueryOptions {
  // Queries whose combined wiring is at most this high are answered by
  // saturation; taller ones fall back to the search below.
  std::uint32_t saturation_height_limit = 8;
  unsigned search_depth = 64;
};

bool query_succeeds(const UnaryQuery& q, const QueryOptions& opts = {});

// Breadth-first rewriting search with an explicit witness. Finds a
// data-to-goal rewriting of at most max_depth steps if one exists.
struct Derivation {
  TermId start;
  std::vector<std::pair<StackOp, TermId>> steps;  // rule applied, result
};
std::optional<Derivation> derive(const UnaryQuery& q, unsigned max_depth);

// ---- circuit value problem ------------------------------------------------

struct Circuit {
  enum Kind { kAnd, kOr, kNot, kZero, kOne };
  struct Gate {
    Kind kind;
    std::string target;
    std::vector<std::string> inputs;
  };
  std::vector<Gate> gates;
  std::string output;
};

// Evaluates the (acyclic, single-driver) circuit; throws on malformed input.
int eval_circuit(const Circuit& c);

// Gate-local rewriting rules over signal claims: _v1_<g> asserts gate g
// carries 1, _v0_<g> asserts it carries 0. The query asks whether the claim
// on the output dissolves completely.
UnaryQuery encode_cvp(const Circuit& c);

}  // namespace resol
