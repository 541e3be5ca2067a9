#include "resol/stack.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace resol {

namespace {

int seq_compare(const std::vector<SymbolId>& a, const std::vector<SymbolId>& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) {
      int c = symbol_name(a[i]).compare(symbol_name(b[i]));
      if (c != 0) return c < 0 ? -1 : 1;
    }
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

bool is_prefix(const std::vector<SymbolId>& p, const std::vector<SymbolId>& s) {
  return p.size() <= s.size() && std::equal(p.begin(), p.end(), s.begin());
}

std::vector<SymbolId> concat(const std::vector<SymbolId>& a, const std::vector<SymbolId>& b,
                             std::size_t b_from = 0) {
  std::vector<SymbolId> out = a;
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(b_from), b.end());
  return out;
}

}  // namespace

int op_compare(const StackOp& a, const StackOp& b) {
  int c = seq_compare(a.push, b.push);
  return c != 0 ? c : seq_compare(a.pop, b.pop);
}

std::uint32_t op_height(const StackOp& o) {
  return static_cast<std::uint32_t>(std::max(o.push.size(), o.pop.size()));
}

std::uint32_t op_size(const StackOp& o) {
  return static_cast<std::uint32_t>(o.push.size() + o.pop.size());
}

bool op_increasing(const StackOp& o) { return o.push.size() >= o.pop.size(); }
bool op_decreasing(const StackOp& o) { return o.push.size() <= o.pop.size(); }

bool is_cycle(const StackOp& o) { return is_prefix(o.push, o.pop) || is_prefix(o.pop, o.push); }

std::optional<StackOp> op_product(const StackOp& f, const StackOp& g) {
  // Unifying sigma_f(x) with tau_g(y): one sequence must be a prefix of the
  // other, and the remainder migrates to the shorter side.
  if (is_prefix(f.pop, g.push)) {
    // g.push = f.pop ++ mu: the result pushes tau_f ++ mu and pops sigma_g.
    return StackOp{concat(f.push, g.push, f.pop.size()), g.pop};
  }
  if (is_prefix(g.push, f.pop)) {
    // f.pop = g.push ++ mu: the result pops sigma_g ++ mu.
    return StackOp{f.push, concat(g.pop, f.pop, g.push.size())};
  }
  return std::nullopt;
}

StackWiring::StackWiring(std::vector<StackOp> ops) : ops_(std::move(ops)) {
  std::sort(ops_.begin(), ops_.end(),
            [](const StackOp& a, const StackOp& b) { return op_compare(a, b) < 0; });
  ops_.erase(std::unique(ops_.begin(), ops_.end()), ops_.end());
}

bool StackWiring::contains(const StackOp& o) const {
  return std::binary_search(ops_.begin(), ops_.end(), o, [](const StackOp& a, const StackOp& b) {
    return op_compare(a, b) < 0;
  });
}

Flow op_to_flow(const StackOp& o) {
  TermId x = make_var(intern_var("X0"));
  TermId head = x;
  for (auto it = o.push.rbegin(); it != o.push.rend(); ++it) head = make_app(*it, {head});
  TermId body = x;
  for (auto it = o.pop.rbegin(); it != o.pop.rend(); ++it) body = make_app(*it, {body});
  return make_flow(head, body);
}

std::optional<StackOp> flow_to_op(const Flow& f) {
  StackOp op;
  TermId t = f.head;
  while (!term_is_var(t)) {
    if (term_children(t).size() != 1) return std::nullopt;
    op.push.push_back(term_symbol(t));
    t = term_children(t)[0];
  }
  TermId u = f.body;
  while (!term_is_var(u)) {
    if (term_children(u).size() != 1) return std::nullopt;
    op.pop.push_back(term_symbol(u));
    u = term_children(u)[0];
  }
  if (term_var(t) != term_var(u)) return std::nullopt;
  return op;
}

Wiring to_wiring(const StackWiring& F) {
  std::vector<Flow> flows;
  flows.reserve(F.size());
  for (const StackOp& o : F) flows.push_back(op_to_flow(o));
  return Wiring(std::move(flows));
}

std::optional<StackWiring> from_wiring(const Wiring& F) {
  std::vector<StackOp> ops;
  ops.reserve(F.size());
  for (const Flow& f : F) {
    auto o = flow_to_op(f);
    if (!o) return std::nullopt;
    ops.push_back(*o);
  }
  return StackWiring(std::move(ops));
}

StackWiring parse_stack_wiring(const Wiring& F) {
  auto s = from_wiring(F);
  if (!s) throw std::invalid_argument("wiring is not a unary stack wiring");
  return *s;
}

std::uint32_t stack_height(const StackWiring& F) {
  std::uint32_t h = 0;
  for (const StackOp& o : F) h = std::max(h, op_height(o));
  return h;
}

std::uint32_t stack_size(const StackWiring& F) {
  std::uint32_t s = 0;
  for (const StackOp& o : F) s += op_size(o);
  return s;
}

std::vector<SymbolId> stack_symbols(const StackWiring& F) {
  std::set<SymbolId> seen;
  for (const StackOp& o : F) {
    seen.insert(o.push.begin(), o.push.end());
    seen.insert(o.pop.begin(), o.pop.end());
  }
  std::vector<SymbolId> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(),
            [](SymbolId a, SymbolId b) { return symbol_name(a) < symbol_name(b); });
  return out;
}

std::string print_stack_wiring(const StackWiring& F) { return print_wiring(to_wiring(F)); }

SplitWiring split(const StackWiring& F) {
  std::vector<StackOp> up, down;
  for (const StackOp& o : F) {
    if (op_increasing(o)) up.push_back(o);
    if (op_decreasing(o)) down.push_back(o);
  }
  return {StackWiring(std::move(up)), StackWiring(std::move(down))};
}

StackWiring shortcut(const StackWiring& F) {
  SplitWiring parts = split(F);
  std::vector<StackOp> out = F.ops();
  for (const StackOp& d : parts.decreasing)
    for (const StackOp& u : parts.increasing)
      if (auto p = op_product(d, u)) out.push_back(*p);
  return StackWiring(std::move(out));
}

std::uint64_t saturation_bound(const StackWiring& F) {
  std::uint64_t s = stack_symbols(F).size();
  std::uint32_t h = stack_height(F);
  std::uint64_t sum = 1;  // S^0
  std::uint64_t pow = 1;
  for (std::uint32_t i = 1; i <= h; ++i) {
    if (s != 0 && pow > UINT64_MAX / s) return UINT64_MAX;
    pow *= s;
    if (sum > UINT64_MAX - pow) return UINT64_MAX;
    sum += pow;
  }
  if (sum != 0 && sum > UINT64_MAX / sum) return UINT64_MAX;
  return sum * sum;
}

StackWiring saturate(const StackWiring& F, SaturationStats* stats) {
  std::uint64_t bound = saturation_bound(F);
  if (stats) {
    *stats = SaturationStats{};
    stats->bound = bound;
  }
  StackWiring cur = F;
  unsigned iter = 0;
  for (;;) {
    StackWiring next = shortcut(cur);
    ++iter;
    if (stats) stats->heights.push_back(stack_height(next));
    if (next == cur) break;
    cur = std::move(next);
  }
  if (stats) {
    // The fixpoint is reached one step before the equality was observed.
    stats->iterations = iter - 1;
    stats->within_bound = stats->iterations <= bound;
  }
  return cur;
}

Wiring truncation(std::uint32_t h, const std::vector<SymbolId>& symbols, std::size_t budget) {
  for (SymbolId s : symbols)
    if (symbol_arity(s) != 1)
      throw std::invalid_argument("truncation symbol '" + symbol_name(s) + "' is not unary");
  double count = 1;
  for (std::uint32_t i = 0; i < h; ++i) count *= static_cast<double>(symbols.size());
  if (count > static_cast<double>(budget))
    throw std::length_error("truncation would need " + std::to_string(count) +
                            " flows, budget is " + std::to_string(budget));
  std::vector<Flow> flows;
  std::vector<SymbolId> tau;
  TermId x = make_var(intern_var("X0"));
  auto emit = [&]() {
    TermId head = star_term();
    TermId body = x;
    for (auto it = tau.rbegin(); it != tau.rend(); ++it) {
      head = make_app(*it, {head});
      body = make_app(*it, {body});
    }
    flows.push_back(make_flow(head, body));
  };
  // Depth-first enumeration of all length-h sequences.
  std::vector<std::size_t> idx(h, 0);
  if (h == 0) {
    emit();
    return Wiring(std::move(flows));
  }
  if (symbols.empty()) return Wiring();
  for (;;) {
    tau.clear();
    for (std::uint32_t i = 0; i < h; ++i) tau.push_back(symbols[idx[i]]);
    emit();
    std::uint32_t i = h;
    while (i > 0 && ++idx[i - 1] == symbols.size()) {
      idx[i - 1] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return Wiring(std::move(flows));
}

namespace {

StackWiring dagger(const StackWiring& F) {
  std::vector<StackOp> out;
  out.reserve(F.size());
  for (const StackOp& o : F) out.push_back(StackOp{o.pop, o.push});
  return StackWiring(std::move(out));
}

struct SeqHash {
  std::size_t operator()(const std::vector<SymbolId>& s) const {
    std::size_t h = 0x811c9dc5;
    for (SymbolId x : s) h = (h ^ x) * 0x01000193;
    return h;
  }
};

// Iterative three-color DFS over the abstract stack graph. A node is the
// concretely known top of a depth-h stack; cells below it are unconstrained
// until an operation pops into them. Every chain of the truncated wiring
// projects to a walk here and every walk lifts back (each unconstrained cell
// is fixed at most once, when it is first popped), so a reachable cycle is
// equivalent to non-nilpotency.
class LazyCycleSearch {
 public:
  LazyCycleSearch(const StackWiring& F, std::uint32_t h) : ops_(F.ops()), h_(h) {}

  bool has_cycle() {
    std::vector<SymbolId> root;  // fully unconstrained stack
    return visit(root);
  }

 private:
  enum Color : char { kGrey = 1, kBlack = 2 };

  bool applicable(const std::vector<SymbolId>& state, const StackOp& op) const {
    std::size_t n = std::min(state.size(), op.push.size());
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] != op.push[i]) return false;
    return true;
  }

  std::vector<SymbolId> successor(const std::vector<SymbolId>& state, const StackOp& op) const {
    std::vector<SymbolId> next = op.pop;
    if (state.size() > op.push.size())
      next.insert(next.end(), state.begin() + static_cast<std::ptrdiff_t>(op.push.size()),
                  state.end());
    return next;
  }

  bool visit(const std::vector<SymbolId>& start) {
    struct Frame {
      std::vector<SymbolId> state;
      std::size_t next_op = 0;
    };
    std::vector<Frame> stack;
    stack.push_back({start, 0});
    color_[start] = kGrey;
    while (!stack.empty()) {
      Frame& fr = stack.back();
      if (fr.next_op == ops_.size()) {
        color_[fr.state] = kBlack;
        stack.pop_back();
        continue;
      }
      const StackOp& op = ops_[fr.next_op++];
      if (!applicable(fr.state, op)) continue;
      std::vector<SymbolId> nxt = successor(fr.state, op);
      auto it = color_.find(nxt);
      if (it == color_.end()) {
        if (color_.size() > kNodeBudget)
          throw std::length_error("nilpotency search exceeded its node budget");
        color_[nxt] = kGrey;
        stack.push_back({std::move(nxt), 0});
      } else if (it->second == kGrey) {
        return true;
      }
    }
    return false;
  }

  static constexpr std::size_t kNodeBudget = 4u << 20;
  const std::vector<StackOp>& ops_;
  std::uint32_t h_;
  std::unordered_map<std::vector<SymbolId>, char, SeqHash> color_;
};

}  // namespace

bool incr_nilpotent(const StackWiring& F) {
  if (F.empty()) return true;
  bool all_up = true, all_down = true;
  for (const StackOp& o : F) {
    all_up = all_up && op_increasing(o);
    all_down = all_down && op_decreasing(o);
  }
  if (!all_up && !all_down)
    throw std::invalid_argument("wiring is neither wholly increasing nor wholly decreasing");
  StackWiring G = all_up ? F : dagger(F);
  return !LazyCycleSearch(G, stack_height(G)).has_cycle();
}

bool incr_nilpotent_literal(const StackWiring& F, std::size_t budget) {
  if (F.empty()) return true;
  bool all_up = true, all_down = true;
  for (const StackOp& o : F) {
    all_up = all_up && op_increasing(o);
    all_down = all_down && op_decreasing(o);
  }
  if (!all_up && !all_down)
    throw std::invalid_argument("wiring is neither wholly increasing nor wholly decreasing");
  StackWiring G = all_up ? F : dagger(F);
  Wiring T = truncation(stack_height(G), stack_symbols(G), budget);
  Wiring TF = wiring_product(T, to_wiring(G));
  // All flows of T.F have closed heads, so composability is pairwise and a
  // cycle in the composition graph is exactly non-nilpotency.
  std::size_t n = TF.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (flow_product(TF.flows()[i], TF.flows()[j])) succ[i].push_back(j);
  std::vector<char> color(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    if (color[r]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{r, 0}};
    color[r] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next == succ[node].size()) {
        color[node] = 2;
        stack.pop_back();
        continue;
      }
      std::size_t m = succ[node][next++];
      if (color[m] == 1) return false;
      if (color[m] == 0) {
        color[m] = 1;
        stack.emplace_back(m, 0);
      }
    }
  }
  return true;
}

bool stack_nilpotent(const StackWiring& F, const NilpotencyOptions& opts) {
  StackWiring base = stack_height(F) > opts.flatten_threshold ? flatten(F) : F;
  StackWiring sat = saturate(base);
  SplitWiring parts = split(sat);
  return incr_nilpotent(parts.increasing) && incr_nilpotent(parts.decreasing);
}

namespace {

// Marker names carry the flow index; a suffix keeps them clear of any
// matching symbol already present in the input (relevant when flattening an
// already-flattened wiring).
std::string marker_name(const std::set<std::string>& used, std::size_t flow, char kind,
                        std::size_t j) {
  std::string base = "_fl" + std::to_string(flow) + "_" + kind + std::to_string(j);
  while (used.count(base)) base += "x";
  return base;
}

}  // namespace

StackWiring flatten(const StackWiring& F) {
  std::set<std::string> used;
  for (SymbolId s : stack_symbols(F)) used.insert(symbol_name(s));
  std::vector<StackOp> out;
  std::size_t index = 0;
  for (const StackOp& l : F) {
    const std::vector<SymbolId>& tau = l.push;
    const std::vector<SymbolId>& sigma = l.pop;
    std::size_t m = tau.size(), n = sigma.size();
    if (m == 0 && n == 0) {
      out.push_back(l);
      ++index;
      continue;
    }
    std::vector<SymbolId> q(m + 1, 0), k(n + 1, 0);
    for (std::size_t j = 1; j <= m; ++j) q[j] = intern_symbol(marker_name(used, index, 'q', j), 1);
    for (std::size_t j = 1; j <= n; ++j) k[j] = intern_symbol(marker_name(used, index, 'k', j), 1);
    // Pop sigma left to right, parking progress in k-markers...
    if (n >= 1) {
      out.push_back(StackOp{{k[1]}, {sigma[0]}});
      for (std::size_t j = 2; j <= n; ++j) out.push_back(StackOp{{k[j]}, {k[j - 1], sigma[j - 1]}});
    }
    // ...switch from the pop phase to the push phase...
    if (m >= 1 && n >= 1)
      out.push_back(StackOp{{q[m]}, {k[n]}});
    else if (m == 0)
      out.push_back(StackOp{{}, {k[n]}});
    else
      out.push_back(StackOp{{q[m]}, {}});
    // ...then push tau right to left through q-markers.
    if (m >= 1) {
      for (std::size_t j = m; j >= 2; --j) out.push_back(StackOp{{q[j - 1], tau[j - 1]}, {q[j]}});
      out.push_back(StackOp{{tau[0]}, {q[1]}});
    }
    ++index;
  }
  return StackWiring(std::move(out));
}

}  // namespace resol
