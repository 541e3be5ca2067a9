#include "resol/queries.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

namespace resol {

namespace {

// Closed unary term as its symbol chain, outermost first, base constant last.
std::vector<SymbolId> chain_of(TermId t, const char* what) {
  std::vector<SymbolId> out;
  for (;;) {
    if (term_is_var(t))
      throw std::invalid_argument(std::string(what) + " must be closed: " +
                                  print_term(t));
    const auto& kids = term_children(t);
    if (kids.empty()) {
      out.push_back(term_symbol(t));
      return out;
    }
    if (kids.size() != 1)
      throw std::invalid_argument(std::string(what) +
                                  " must be unary: " + print_term(t));
    out.push_back(term_symbol(t));
    t = kids[0];
  }
}

void reject_reserved(const std::vector<SymbolId>& syms, const char* where) {
  for (SymbolId s : syms)
    if (s == start_symbol() || s == accept_symbol())
      throw std::invalid_argument(std::string("START and ACCEPT are reserved "
                                              "and may not appear in the ") +
                                  where);
}

void validate_query(const UnaryQuery& q) {
  for (TermId d : q.data) reject_reserved(chain_of(d, "data term"), "data");
  reject_reserved(chain_of(q.goal, "goal term"), "goal");
  reject_reserved(stack_symbols(q.program), "program");
}

}  // namespace

SymbolId twin_symbol(SymbolId constant) {
  return intern_symbol("_tw_" + std::string(symbol_name(constant)), 1);
}

StackOp encode_data_term(TermId d) {
  std::vector<SymbolId> chain = chain_of(d, "data term");
  chain.back() = twin_symbol(chain.back());
  return StackOp{std::move(chain), {start_symbol()}};
}

StackWiring encode_data(const std::vector<TermId>& data) {
  std::vector<StackOp> ops;
  for (TermId d : data) ops.push_back(encode_data_term(d));
  return StackWiring(ops);
}

StackOp encode_goal(TermId g) {
  std::vector<SymbolId> chain = chain_of(g, "goal term");
  chain.back() = twin_symbol(chain.back());
  return StackOp{{accept_symbol()}, std::move(chain)};
}

bool query_succeeds(const UnaryQuery& q, const QueryOptions& opts) {
  validate_query(q);
  std::vector<StackOp> all;
  for (TermId d : q.data) all.push_back(encode_data_term(d));
  all.insert(all.end(), q.program.begin(), q.program.end());
  all.push_back(encode_goal(q.goal));
  StackWiring w(all);
  if (stack_height(w) <= opts.saturation_height_limit) {
    StackWiring sat = saturate(w);
    StackOp answer{{accept_symbol()}, {start_symbol()}};
    return sat.contains(answer);
  }
  return derive(q, opts.search_depth).has_value();
}

std::optional<Derivation> derive(const UnaryQuery& q, unsigned max_depth) {
  validate_query(q);
  using Chain = std::vector<SymbolId>;
  Chain goal = chain_of(q.goal, "goal term");
  // A step shrinks the chain by at most max_shrink symbols, so anything
  // further above the goal length than the remaining steps can recover
  // is a dead end.
  std::size_t max_shrink = 0;
  for (const StackOp& op : q.program)
    if (op.pop.size() > op.push.size())
      max_shrink = std::max(max_shrink, op.pop.size() - op.push.size());

  std::map<Chain, std::pair<Chain, std::size_t>> parent;  // child -> (parent, rule)
  std::vector<Chain> frontier;
  std::map<Chain, TermId> roots;
  for (TermId d : q.data) {
    Chain c = chain_of(d, "data term");
    if (parent.emplace(c, std::make_pair(Chain{}, q.program.size())).second) {
      frontier.push_back(c);
      roots.emplace(c, d);
    }
  }

  auto rebuild = [&](const Chain& c) {
    TermId t = make_const(c.back());
    for (std::size_t i = c.size() - 1; i-- > 0;)
      t = make_app(c[i], {t});
    return t;
  };
  auto witness = [&](Chain c) {
    std::vector<std::pair<StackOp, TermId>> steps;
    for (;;) {
      auto& [par, rule] = parent.at(c);
      if (rule == q.program.size()) break;
      steps.emplace_back(q.program.ops()[rule], rebuild(c));
      c = par;
    }
    std::reverse(steps.begin(), steps.end());
    return Derivation{roots.at(c), std::move(steps)};
  };

  std::size_t nodes = 0;
  for (unsigned depth = 0; depth <= max_depth; ++depth) {
    for (const Chain& c : frontier)
      if (c == goal) return witness(c);
    if (depth == max_depth) break;
    std::vector<Chain> next;
    unsigned remaining = max_depth - depth;
    for (const Chain& c : frontier) {
      for (std::size_t r = 0; r < q.program.size(); ++r) {
        const StackOp& op = q.program.ops()[r];
        // Applicable when the pop sequence is a proper prefix of the chain
        // (the base twin constant itself is never consumed).
        if (op.pop.size() >= c.size()) continue;
        if (!std::equal(op.pop.begin(), op.pop.end(), c.begin())) continue;
        Chain out(op.push);
        out.insert(out.end(), c.begin() + op.pop.size(), c.end());
        // The goal is still reachable only if the height can shrink enough.
        if (out.size() > goal.size() + max_shrink * (remaining - 1)) continue;
        if (!parent.emplace(out, std::make_pair(c, r)).second) continue;
        if (++nodes > 200000)
          throw std::length_error("rewriting search exceeded its node budget");
        next.push_back(out);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return std::nullopt;
}

// ---- circuit value problem ------------------------------------------------

namespace {

const Circuit::Gate& driver_of(const Circuit& c, const std::string& v) {
  const Circuit::Gate* found = nullptr;
  for (const auto& g : c.gates) {
    if (g.target != v) continue;
    if (found)
      throw std::invalid_argument("vertex \"" + v +
                                  "\" is driven by more than one gate");
    found = &g;
  }
  if (!found)
    throw std::invalid_argument("vertex \"" + v + "\" is not driven");
  return *found;
}

}  // namespace

int eval_circuit(const Circuit& c) {
  for (const auto& g : c.gates) driver_of(c, g.target);  // single-driver check
  std::map<std::string, int> value;
  std::set<std::string> grey;  // expansion started, value not yet settled

  // Post-order evaluation: stage 0 expands a vertex, stage 1 settles it once
  // every input has been settled in between.
  std::vector<std::pair<std::string, int>> stack{{c.output, 0}};
  while (!stack.empty()) {
    auto [v, stage] = stack.back();
    stack.pop_back();
    if (stage == 0) {
      if (value.count(v)) continue;
      if (!grey.insert(v).second)
        throw std::invalid_argument("circuit has a cycle through \"" + v +
                                    "\"");
      stack.emplace_back(v, 1);
      for (const std::string& in : driver_of(c, v).inputs)
        stack.emplace_back(in, 0);
      continue;
    }
    const Circuit::Gate& g = driver_of(c, v);
    int out = 0;
    switch (g.kind) {
      case Circuit::kZero: out = 0; break;
      case Circuit::kOne: out = 1; break;
      case Circuit::kNot: out = 1 - value.at(g.inputs[0]); break;
      case Circuit::kAnd:
        out = value.at(g.inputs[0]) & value.at(g.inputs[1]);
        break;
      case Circuit::kOr:
        out = value.at(g.inputs[0]) | value.at(g.inputs[1]);
        break;
    }
    value[v] = out;
    grey.erase(v);
  }
  return value.at(c.output);
}

UnaryQuery encode_cvp(const Circuit& c) {
  for (const auto& g : c.gates) driver_of(c, g.target);
  driver_of(c, c.output);
  auto hi = [](const std::string& v) { return intern_symbol("_v1_" + v, 1); };
  auto lo = [](const std::string& v) { return intern_symbol("_v0_" + v, 1); };
  std::vector<StackOp> ops;
  for (const auto& g : c.gates) {
    const std::string& t = g.target;
    switch (g.kind) {
      case Circuit::kAnd: {
        const std::string &a = g.inputs[0], &b = g.inputs[1];
        ops.push_back({{hi(a), hi(b)}, {hi(t)}});
        ops.push_back({{lo(a)}, {lo(t)}});
        ops.push_back({{lo(b)}, {lo(t)}});
        break;
      }
      case Circuit::kOr: {
        const std::string &a = g.inputs[0], &b = g.inputs[1];
        ops.push_back({{hi(a)}, {hi(t)}});
        ops.push_back({{hi(b)}, {hi(t)}});
        ops.push_back({{lo(a), lo(b)}, {lo(t)}});
        break;
      }
      case Circuit::kNot: {
        const std::string& a = g.inputs[0];
        ops.push_back({{lo(a)}, {hi(t)}});
        ops.push_back({{hi(a)}, {lo(t)}});
        break;
      }
      case Circuit::kZero:
        ops.push_back({{}, {lo(t)}});
        break;
      case Circuit::kOne:
        ops.push_back({{}, {hi(t)}});
        break;
    }
  }
  UnaryQuery q;
  q.data = {make_app(intern_symbol("_v1_" + c.output, 1), {star_term()})};
  q.program = StackWiring(ops);
  q.goal = star_term();
  return q;
}

}  // namespace resol
