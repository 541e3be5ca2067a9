#pragma once

// Seeded random inputs shared by the unit and acceptance tests. Every
// generator draws from a caller-owned engine, so a failing case reproduces
// from the seed printed by the test.

#include <random>
#include <string>
#include <vector>

#include "resol/machines.hpp"
#include "resol/queries.hpp"
#include "resol/stack.hpp"

namespace resol::gen {

inline int pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool coin(std::mt19937& rng) { return pick(rng, 0, 1) != 0; }

template <class T>
inline const T& one_of(std::mt19937& rng, const std::vector<T>& pool) {
  return pool[static_cast<std::size_t>(pick(rng, 0, int(pool.size()) - 1))];
}

// Unary symbols f, g, h, ... used for stack operations and query chains.
inline std::vector<SymbolId> chain_symbols(int n) {
  static const char* names[] = {"f", "g", "h", "i", "j", "k"};
  std::vector<SymbolId> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(intern_symbol(names[i], 1));
  return out;
}

inline std::vector<SymbolId> symbol_seq(std::mt19937& rng,
                                        const std::vector<SymbolId>& syms,
                                        int max_len) {
  std::vector<SymbolId> s(static_cast<std::size_t>(pick(rng, 0, max_len)));
  for (SymbolId& x : s) x = one_of(rng, syms);
  return s;
}

inline StackOp random_op(std::mt19937& rng, const std::vector<SymbolId>& syms,
                         int max_height) {
  return StackOp{symbol_seq(rng, syms, max_height),
                 symbol_seq(rng, syms, max_height)};
}

inline StackWiring random_stack_wiring(std::mt19937& rng, int max_ops = 6,
                                       int max_height = 3, int n_syms = 3) {
  std::vector<SymbolId> syms = chain_symbols(n_syms);
  std::vector<StackOp> ops(static_cast<std::size_t>(pick(rng, 1, max_ops)));
  for (StackOp& o : ops) o = random_op(rng, syms, max_height);
  return StackWiring(std::move(ops));
}

inline std::vector<std::string> random_word(
    std::mt19937& rng, const std::vector<std::string>& alphabet, int max_len) {
  std::vector<std::string> w(static_cast<std::size_t>(pick(rng, 0, max_len)));
  for (std::string& c : w) c = one_of(rng, alphabet);
  return w;
}

// A random but always well-formed observation over letters {a, b}: each flow
// keeps the six-slot shape, shares one stack variable between both sides and
// draws the remaining slots from small pools so that products with embedded
// words have a fair chance to compose.
inline Observation random_observation(std::mt19937& rng, int max_flows = 4) {
  std::vector<TermId> letters = {make_const(intern_symbol("a", 0)),
                                 make_const(intern_symbol("b", 0)),
                                 star_term()};
  std::vector<TermId> dirs = {make_const(intern_symbol("l", 0)),
                              make_const(intern_symbol("r", 0))};
  std::vector<TermId> states = {make_const(intern_symbol("q0", 0)),
                                make_const(intern_symbol("q1", 0)),
                                make_const(intern_symbol("q2", 0))};
  std::vector<SymbolId> chain = {intern_symbol("sa", 1),
                                 intern_symbol("sb", 1)};
  std::vector<TermId> consts = {make_const(intern_symbol("k0", 0)),
                                make_const(intern_symbol("k1", 0))};
  std::vector<TermId> atom_vars = {make_var(intern_var("V1")),
                                   make_var(intern_var("V2"))};
  TermId x = make_var(intern_var("X"));
  std::uint32_t aux_arity = static_cast<std::uint32_t>(pick(rng, 0, 2));
  SymbolId aux = aux_slot_symbol(aux_arity);

  auto stack_slot = [&] {
    TermId t = x;
    int len = pick(rng, 0, 2);
    for (int i = 0; i < len; ++i) t = make_app(one_of(rng, chain), {t});
    return t;
  };
  // Body atoms may introduce variables; head atoms must reuse them.
  auto atom = [&](bool body_side, const std::vector<TermId>& seen) {
    int roll = pick(rng, 0, 3);
    if (roll == 0) return one_of(rng, consts);
    if (body_side) return one_of(rng, atom_vars);
    return seen.empty() ? one_of(rng, consts) : one_of(rng, seen);
  };
  auto spine = [&](const std::vector<TermId>& slots) {
    TermId t = slots.back();
    for (std::size_t i = slots.size() - 1; i-- > 0;) t = make_pair(slots[i], t);
    return t;
  };

  std::vector<Flow> flows(static_cast<std::size_t>(pick(rng, 1, max_flows)));
  for (Flow& f : flows) {
    std::vector<TermId> body_atoms;
    auto side = [&](bool body_side) {
      std::vector<TermId> aux_args;
      for (std::uint32_t i = 0; i < aux_arity; ++i) {
        TermId a = atom(body_side, body_atoms);
        if (body_side && term_is_var(a)) body_atoms.push_back(a);
        aux_args.push_back(a);
      }
      TermId main_arg = atom(body_side, body_atoms);
      if (body_side && term_is_var(main_arg)) body_atoms.push_back(main_arg);
      return spine({one_of(rng, letters), one_of(rng, dirs), stack_slot(),
                    one_of(rng, states),
                    aux_args.empty() ? make_const(aux)
                                     : make_app(aux, aux_args),
                    make_app(main_slot_symbol(), {main_arg})});
    };
    TermId body = side(true);
    TermId head = side(false);
    f = make_flow(head, body);
  }
  return validate_observation(Wiring(std::move(flows)));
}

// Gates are numbered so inputs always point at earlier gates; the result is
// acyclic, single-driver and fully driven by construction.
inline Circuit random_circuit(std::mt19937& rng, int max_gates = 12) {
  Circuit c;
  int n = pick(rng, 1, max_gates);
  for (int i = 0; i < n; ++i) {
    Circuit::Gate g;
    g.target = "g" + std::to_string(i);
    g.kind = i == 0 ? static_cast<Circuit::Kind>(pick(rng, 3, 4))
                    : static_cast<Circuit::Kind>(pick(rng, 0, 4));
    auto input = [&] { return "g" + std::to_string(pick(rng, 0, i - 1)); };
    if (g.kind == Circuit::kAnd || g.kind == Circuit::kOr)
      g.inputs = {input(), input()};
    else if (g.kind == Circuit::kNot)
      g.inputs = {input()};
    c.gates.push_back(std::move(g));
  }
  c.output = "g" + std::to_string(n - 1);
  return c;
}

inline TermId random_chain_term(std::mt19937& rng,
                                const std::vector<SymbolId>& syms,
                                int max_height,
                                const std::vector<SymbolId>& bases) {
  TermId t = make_const(one_of(rng, bases));
  int h = pick(rng, 0, max_height);
  for (int i = 0; i < h; ++i) t = make_app(one_of(rng, syms), {t});
  return t;
}

inline UnaryQuery random_query(std::mt19937& rng, int max_program_ops = 8,
                               int max_height = 3) {
  std::vector<SymbolId> syms = chain_symbols(3);
  std::vector<SymbolId> bases = {intern_symbol("c", 0),
                                 intern_symbol("d", 0)};
  UnaryQuery q;
  int nd = pick(rng, 1, 3);
  for (int i = 0; i < nd; ++i)
    q.data.push_back(random_chain_term(rng, syms, max_height, bases));
  q.program = random_stack_wiring(rng, max_program_ops, max_height, 3);
  q.goal = random_chain_term(rng, syms, max_height, bases);
  return q;
}

}  // namespace resol::gen
