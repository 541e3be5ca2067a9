#pragma once

// Ground-truth reachability for unary queries, independent of the library's
// saturation machinery: the textbook pre* construction for pushdown systems.
// Program rules are normalized to pop or push one symbol at a time through
// auxiliary control states, the goal chain becomes a one-word automaton, and
// saturation adds a transition whenever a rule's right-hand side already has
// a path. Exact and always terminating, unlike the depth-bounded search, so
// random corpora need no node budget.

#include <map>
#include <set>
#include <vector>

#include "resol/queries.hpp"
#include "resol/term.hpp"

namespace resol::gen {

namespace detail {

inline std::vector<SymbolId> oracle_chain(TermId t) {
  std::vector<SymbolId> out;
  while (!term_children(t).empty()) {
    out.push_back(term_symbol(t));
    t = term_children(t)[0];
  }
  out.push_back(term_symbol(t));
  return out;
}

}  // namespace detail

inline bool prestar_succeeds(const UnaryQuery& q) {
  std::vector<SymbolId> goal = detail::oracle_chain(q.goal);
  std::set<SymbolId> alphabet(goal.begin(), goal.end());
  std::vector<std::vector<SymbolId>> data;
  for (TermId d : q.data) {
    data.push_back(detail::oracle_chain(d));
    alphabet.insert(data.back().begin(), data.back().end());
  }
  for (const StackOp& op : q.program) {
    alphabet.insert(op.push.begin(), op.push.end());
    alphabet.insert(op.pop.begin(), op.pop.end());
  }

  // Normalized rules <from, pop one symbol> -> <to, repush w>, |w| 0 or 2:
  // plain pops descend a per-rule state chain; pushes read whatever top they
  // land on and repush it under the new symbol.
  struct Rule {
    int from;
    SymbolId pop;
    int to;
    std::vector<SymbolId> push;
  };
  const int home = 0;
  int states = 1;
  std::vector<Rule> rules;
  for (const StackOp& op : q.program) {
    std::size_t m = op.pop.size(), n = op.push.size();
    if (m == 0 && n == 0) continue;  // the unit rewrites nothing
    // States owing the pushes of op.push[k-1..0]; entered after the pops.
    std::vector<int> owe(n + 1);
    owe[0] = home;
    for (std::size_t k = 1; k <= n; ++k) owe[k] = states++;
    int after_pops = owe[n];
    int cur = home;
    for (std::size_t i = 0; i < m; ++i) {
      int nxt = i + 1 == m ? after_pops : states++;
      rules.push_back({cur, op.pop[i], nxt, {}});
      cur = nxt;
    }
    // With nothing to pop the first push fires straight from home.
    for (std::size_t k = n; k >= 1; --k) {
      int from = (k == n && m == 0) ? home : owe[k];
      for (SymbolId g : alphabet)
        rules.push_back({from, g, owe[k - 1], {op.push[k - 1], g}});
    }
  }

  // The goal word automaton, then saturation until stable.
  std::map<std::pair<int, SymbolId>, std::set<int>> delta;
  int final_state = -1;
  {
    int cur = home;
    for (SymbolId s : goal) {
      int nxt = states++;
      delta[{cur, s}].insert(nxt);
      cur = nxt;
    }
    final_state = cur;
  }
  bool changed = true;
  auto add = [&](int p, SymbolId a, int t) {
    if (delta[{p, a}].insert(t).second) changed = true;
  };
  while (changed) {
    changed = false;
    for (const Rule& r : rules) {
      if (r.push.empty()) {
        add(r.from, r.pop, r.to);
        continue;
      }
      auto it = delta.find({r.to, r.push[0]});
      if (it == delta.end()) continue;
      for (int mid : std::set<int>(it->second)) {
        auto jt = delta.find({mid, r.push[1]});
        if (jt == delta.end()) continue;
        for (int dst : std::set<int>(jt->second)) add(r.from, r.pop, dst);
      }
    }
  }

  for (const std::vector<SymbolId>& d : data) {
    std::set<int> cur = {home};
    for (SymbolId s : d) {
      std::set<int> nxt;
      for (int p : cur) {
        auto it = delta.find({p, s});
        if (it != delta.end()) nxt.insert(it->second.begin(), it->second.end());
      }
      cur = std::move(nxt);
      if (cur.empty()) break;
    }
    if (cur.count(final_state)) return true;
  }
  return false;
}

}  // namespace resol::gen
