#pragma once

#include <optional>
#include <string>
#include <vector>

#include "resol/stack.hpp"

namespace resol {

// ---- word representations ----------------------------------------------

// A word together with its alphabet and the chosen position constants
// (|positions| = |word| + 1; the extra cell carries 'star' and doubles as
// both endmarkers).
struct WordContext {
  std::vector<SymbolId> alphabet;
  std::vector<SymbolId> word;
  std::vector<SymbolId> positions;
};

// Position constants live in a reserved namespace so observations can be
// checked against all of them at once.
bool is_position_name(std::string_view name);
bool uses_position_symbol(TermId t);

WordContext make_word_context(const std::vector<std::string>& alphabet,
                              const std::vector<std::string>& word,
                              std::string_view position_prefix = "_pos");

// The circular movement wiring: both orientations of
// c_i . r . p_i <-> c_{i+1} . l . p_{i+1}, with c_0 = c_{n+1} = star.
Wiring word_rep(const WordContext& ctx);

// ---- observations -------------------------------------------------------

// Observations interact with inputs through a six-slot spine
//   letter . direction . stack(x) . state . aux(...) . hd(position)
// where hd is the reserved main-position wrapper below.
SymbolId main_slot_symbol();   // hd, arity 1
SymbolId aux_slot_symbol(std::uint32_t k);  // aux<k>, arity k

struct Observation {
  Wiring wiring;
  std::vector<SymbolId> letters;  // alphabet constants seen (star excluded)
};

struct ObservationCheck {
  bool ok = true;
  std::string reason;
  Flow offending{0, 0};
};

// Structural check: every flow must fit the six-slot spine, with constant
// letter/direction/state slots, a unary stack chain sharing one variable,
// atoms inside the aux and hd slots, and no position constants anywhere.
ObservationCheck check_observation(const Wiring& F);
Observation validate_observation(const Wiring& F);  // throws on rejection

// Lifts the three-slot word representation to the six-slot spine by passing
// the stack, state and aux slots through untouched (the identity completion
// of the word wiring).
Wiring embed_word_rep(const Wiring& rep);

// The product O . embed(word_rep(W)) over the alphabet of both, the wiring
// whose nilpotency defines acceptance.
Wiring interaction(const Observation& O, const std::vector<std::string>& word,
                   std::string_view position_prefix = "_pos");

// Turns the interaction product into a plain stack wiring: the non-stack
// slots of every flow are grounded (their variables range over the closed
// atoms present) and each distinct closed slot tuple is interned as a fresh
// unary wrapper symbol.
StackWiring reduce(const Observation& O, const std::vector<std::string>& word,
                   std::string_view position_prefix = "_pos");

// Acceptance: the interaction with one (hence, any) choice of positions is
// nilpotent.
bool accepts(const Observation& O, const std::vector<std::string>& word,
             std::string_view position_prefix = "_pos");

// ---- automata -----------------------------------------------------------

// Two-way multi-head finite automaton with a pushdown stack. Heads read the
// input between the endmarkers 'lend' and 'rend'; the stack starts as the
// bottom symbol 'bot', which may be read but never popped or pushed. The
// machine accepts by halting and rejects by looping; a state named 'reject'
// is a built-in sink that loops forever.
struct Automaton {
  struct Transition {
    std::size_t from = 0;
    std::size_t to = 0;
    std::vector<std::string> reads;  // one letter (or lend/rend) per head
    std::string stack_read;          // stack symbol or bot
    std::vector<int> moves;          // -1/0/+1 per head, at most one nonzero
    enum Action { kPop, kPush } action = kPop;
    std::string push_sym;
  };

  std::vector<std::string> states;
  std::size_t init = 0;
  std::vector<std::string> input_alphabet;
  std::vector<std::string> stack_alphabet;
  unsigned heads = 1;
  std::vector<Transition> transitions;

  std::size_t state_index(std::string_view name) const;
};

extern const char* const kLeftEnd;    // "lend"
extern const char* const kRightEnd;   // "rend"
extern const char* const kStackBottom;  // "bot"
extern const char* const kRejectState; // "reject"

void validate_automaton(const Automaton& m);  // throws on ill-formed input

enum class RunResult { kAccept, kReject };

// Memoized simulation over surface configurations (state, head positions,
// stack top): computes which configurations can pop the current top and
// which are reachable, then rejects iff the reachable step graph has a
// cycle or reaches the reject sink.
RunResult simulate(const Automaton& m, const std::vector<std::string>& word);

// One observation flow (or micro-flow chain) per transition: the word
// wiring moves the main head, swaps route auxiliary heads through the main
// slot, remembered letters ride in product states, and transitions into
// 'reject' re-initialize the run instead of halting it.
Observation encode_automaton(const Automaton& m);

}  // namespace resol
