#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resol/term.hpp"

namespace resol {

// A flow head <- body is a rewriting rule: instances of the body are
// rewritten to instances of the head. Flows are stored in canonical renaming
// form (variables X0, X1, ... numbered across head then body), so value
// equality is id equality.
struct Flow {
  TermId head;
  TermId body;

  friend bool operator==(const Flow& a, const Flow& b) {
    return a.head == b.head && a.body == b.body;
  }
};

// Canonicalizes and checks the flow invariant varset(head) <= varset(body);
// throws std::invalid_argument when violated.
Flow make_flow(TermId head, TermId body);
Flow parse_flow(std::string_view text);  // "HEAD <- BODY"

int flow_compare(const Flow& a, const Flow& b);
std::uint32_t flow_height(const Flow& f);
std::uint32_t flow_size(const Flow& f);
std::string print_flow(const Flow& f);

// A wiring is a finite set of flows, kept sorted and deduplicated.
class Wiring {
 public:
  Wiring() = default;
  explicit Wiring(std::vector<Flow> flows);

  static Wiring zero() { return Wiring(); }

  bool empty() const { return flows_.empty(); }
  std::size_t size() const { return flows_.size(); }
  bool contains(const Flow& f) const;
  const std::vector<Flow>& flows() const { return flows_; }
  auto begin() const { return flows_.begin(); }
  auto end() const { return flows_.end(); }

  friend bool operator==(const Wiring& a, const Wiring& b) { return a.flows_ == b.flows_; }

 private:
  std::vector<Flow> flows_;
};

// The product (t <- u)(v <- w) unifies u with v (after renaming apart) and
// yields theta(t) <- theta(w); nullopt is the zero result.
std::optional<Flow> flow_product(const Flow& f, const Flow& g);
Wiring wiring_product(const Wiring& F, const Wiring& G);
Wiring wiring_sum(const Wiring& F, const Wiring& G);
Wiring wiring_power(const Wiring& F, unsigned n);

// Componentwise pairing: (u <- v) tensor (t <- w) = u.t <- v.w.
Flow flow_tensor(const Flow& f, const Flow& g);
Wiring tensor(const Wiring& F, const Wiring& G);

std::uint32_t wiring_height(const Wiring& F);  // h(0) = 0
std::uint32_t wiring_size(const Wiring& F);
Wiring unit_wiring();  // { X0 <- X0 }
std::string print_wiring(const Wiring& F);

// Engine-internal parallelism knob (1 = sequential). Results are identical
// regardless of the setting; only the pairwise-product scheduling changes.
void set_jobs(unsigned jobs);
unsigned jobs();

// Iteration-based nilpotency oracle. Computes F, F^2, ... with dedup each
// step. The early cycle exit (f with f.f != 0 inside some power) is sound
// only for unary stack wirings, where a cycle rules out nilpotency; for
// general wirings we keep iterating and may end inconclusive.
struct NilpotencyVerdict {
  enum Kind { kNilpotent, kCycleFound, kInconclusive } kind;
  // kNilpotent: least n with F^n = 0. kCycleFound: least k whose power
  // contains a cycle. kInconclusive: max_iter.
  unsigned index;

  bool nilpotent() const { return kind == kNilpotent; }
};
NilpotencyVerdict naive_nilpotency(const Wiring& F, unsigned max_iter);

// True iff every flow is a unary stack operation tau(x) <- sigma(x).
bool is_stack_wiring(const Wiring& F);

// A wiring is balanced when, within each flow, all occurrences of each
// variable (across head and body) sit at the same depth.
struct BalanceReport {
  bool balanced = true;
  Flow offending{0, 0};
  VarId variable = 0;
  std::uint32_t depth_a = 0;
  std::uint32_t depth_b = 0;
};
BalanceReport is_balanced(const Wiring& F);
BalanceReport is_balanced(const Flow& f);

}  // namespace resol
