#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resol {

// Interned identifiers. Symbols carry an arity that is fixed at first use;
// terms are hash-consed, so structural equality is id equality.
using SymbolId = std::uint32_t;
using VarId = std::uint32_t;
using TermId = std::uint32_t;

struct ParseError : std::runtime_error {
  std::string file;
  int line = 0;
  int col = 0;
  ParseError(std::string file_, int line_, int col_, const std::string& msg);
};

// ---- symbols ----------------------------------------------------------

// Interns `name` with the given arity. Throws std::invalid_argument if the
// name is already interned with a different arity.
SymbolId intern_symbol(std::string_view name, std::uint32_t arity);
std::optional<SymbolId> find_symbol(std::string_view name);
const std::string& symbol_name(SymbolId s);
std::uint32_t symbol_arity(SymbolId s);

// Distinguished symbols, registered before anything else:
// the binary pairing symbol (printed infix as '.'), the constant 'star',
// and the reserved unary query symbols START and ACCEPT.
SymbolId pair_symbol();
SymbolId star_symbol();
SymbolId start_symbol();
SymbolId accept_symbol();

// ---- variables --------------------------------------------------------

VarId intern_var(std::string_view name);
const std::string& var_name(VarId v);
// Engine-generated variable whose name cannot be produced by the parser.
VarId fresh_var();

// ---- terms ------------------------------------------------------------

TermId make_var(VarId v);
TermId make_app(SymbolId s, const std::vector<TermId>& children);
TermId make_const(SymbolId s);
TermId make_pair(TermId left, TermId right);
TermId star_term();

bool term_is_var(TermId t);
VarId term_var(TermId t);
SymbolId term_symbol(TermId t);
const std::vector<TermId>& term_children(TermId t);

// Height of a constant or a bare variable is 0.
std::uint32_t term_height(TermId t);
bool term_closed(TermId t);
// Total number of function-symbol occurrences (constants included).
std::uint32_t term_size(TermId t);

// Variables in left-to-right first-occurrence order, without duplicates.
void collect_vars(TermId t, std::vector<VarId>& out);
std::vector<VarId> term_vars(TermId t);
bool occurs(VarId v, TermId t);

// Structural total order, stable across processes (compares names, not ids).
int term_compare(TermId a, TermId b);

std::string print_term(TermId t);
// Parses the term grammar: uppercase-initial identifiers are variables
// (except the reserved symbols START and ACCEPT), '.' is the infix pairing
// symbol (right-associative, lowest precedence), 'star' the constant.
TermId parse_term(std::string_view text);

// ---- substitutions ----------------------------------------------------

// Finite idempotent map from variables to terms. Application replaces all
// bound variables simultaneously (bindings are not chained).
class Subst {
 public:
  Subst() = default;

  bool empty() const { return bind_.empty(); }
  std::size_t size() const { return bind_.size(); }
  std::optional<TermId> lookup(VarId v) const;
  void bind(VarId v, TermId t);
  TermId apply(TermId t) const;
  const std::map<VarId, TermId>& bindings() const { return bind_; }

 private:
  std::map<VarId, TermId> bind_;
};

// Most general unifier in solved form, or nullopt on clash/occurs failure.
// Shared variables are honored (this is unification, not matching).
std::optional<Subst> unify(TermId t, TermId u);

// True iff renamed-apart copies of t and u unify.
bool matchable(TermId t, TermId u);

// Replaces every variable of t by a fresh one (consistently).
TermId rename_apart(TermId t);

// Renames variables to X0, X1, ... in first-occurrence order; pair version
// numbers across both terms, first one first.
TermId canon_term(TermId t);
std::pair<TermId, TermId> canon_pair(TermId a, TermId b);

}  // namespace resol
