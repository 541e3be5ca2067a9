#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resol/semiring.hpp"

namespace resol {

// A stack operation push(x) <- pop(x): reading right to left, it pops the
// `pop` sequence off a unary-term stack and pushes the `push` sequence.
// Sequences are outermost-first: {f, g} denotes f(g(x)).
struct StackOp {
  std::vector<SymbolId> push;  // tau, the head side
  std::vector<SymbolId> pop;   // sigma, the body side

  friend bool operator==(const StackOp& a, const StackOp& b) {
    return a.push == b.push && a.pop == b.pop;
  }
};

int op_compare(const StackOp& a, const StackOp& b);
std::uint32_t op_height(const StackOp& o);
std::uint32_t op_size(const StackOp& o);
bool op_increasing(const StackOp& o);  // |push| >= |pop|
bool op_decreasing(const StackOp& o);  // |push| <= |pop|

// A cycle is an operation that composes with itself (one side is a prefix of
// the other); cycles are never nilpotent.
bool is_cycle(const StackOp& o);

// Sequence-level product, the algebraic fast path for unary flows.
std::optional<StackOp> op_product(const StackOp& f, const StackOp& g);

class StackWiring {
 public:
  StackWiring() = default;
  explicit StackWiring(std::vector<StackOp> ops);

  bool empty() const { return ops_.empty(); }
  std::size_t size() const { return ops_.size(); }
  bool contains(const StackOp& o) const;
  const std::vector<StackOp>& ops() const { return ops_; }
  auto begin() const { return ops_.begin(); }
  auto end() const { return ops_.end(); }

  friend bool operator==(const StackWiring& a, const StackWiring& b) { return a.ops_ == b.ops_; }

 private:
  std::vector<StackOp> ops_;
};

Flow op_to_flow(const StackOp& o);
std::optional<StackOp> flow_to_op(const Flow& f);
Wiring to_wiring(const StackWiring& F);
// nullopt when some flow is not a unary stack operation.
std::optional<StackWiring> from_wiring(const Wiring& F);
StackWiring parse_stack_wiring(const Wiring& F);  // throwing variant

std::uint32_t stack_height(const StackWiring& F);
std::uint32_t stack_size(const StackWiring& F);
std::vector<SymbolId> stack_symbols(const StackWiring& F);  // sorted by name
std::string print_stack_wiring(const StackWiring& F);

// Height-neutral operations (|push| = |pop|) belong to both parts.
struct SplitWiring {
  StackWiring increasing;
  StackWiring decreasing;
};
SplitWiring split(const StackWiring& F);

// One memoization step: F + F_down . F_up. Height never changes.
StackWiring shortcut(const StackWiring& F);

// (S^h + S^(h-1) + ... + 1)^2 for S = distinct symbols, h = height;
// saturates at uint64 max instead of overflowing.
std::uint64_t saturation_bound(const StackWiring& F);

struct SaturationStats {
  unsigned iterations = 0;  // shortcut applications until a fixpoint
  std::uint64_t bound = 0;
  bool within_bound = true;
  std::vector<std::uint32_t> heights;  // height after each iteration
};

// Least fixpoint of shortcut, detected by set equality of iterates.
StackWiring saturate(const StackWiring& F, SaturationStats* stats = nullptr);

// The truncation wiring: one closed-headed flow tau(star) <- tau(x) per
// length-h sequence tau over S. Guarded because it has |S|^h flows.
Wiring truncation(std::uint32_t h, const std::vector<SymbolId>& symbols,
                  std::size_t budget = 1u << 20);

// Nilpotency for a wholly increasing (or wholly decreasing) wiring, decided
// by cycle search on the truncated closed-term transition graph. Explores
// the graph lazily: a node is the known top of the stack, unconstrained
// cells below are filled on demand, so the |S|^h truncation is never
// materialized. Throws std::invalid_argument on mixed input.
bool incr_nilpotent(const StackWiring& F);

// Reference implementation that materializes T and the product T.F and runs
// the cycle search on the resulting flows; used to cross-check the lazy one.
bool incr_nilpotent_literal(const StackWiring& F, std::size_t budget = 1u << 20);

struct NilpotencyOptions {
  // Wirings taller than this are flattened first to keep truncation small.
  std::uint32_t flatten_threshold = 8;
};

// The full decision procedure: saturate, split, and require both parts
// nilpotent.
bool stack_nilpotent(const StackWiring& F, const NilpotencyOptions& opts = {});

// Height-2 equi-nilpotent form: every operation becomes a chain of at most
// height-2 operations over fresh per-flow marker symbols; the result has
// size exactly 3 * size(F).
StackWiring flatten(const StackWiring& F);

}  // namespace resol
