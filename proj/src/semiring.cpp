#include "resol/semiring.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>

namespace resol {

Flow make_flow(TermId head, TermId body) {
  auto [h, b] = canon_pair(head, body);
  for (VarId v : term_vars(h))
    if (!occurs(v, b))
      throw std::invalid_argument("flow variable '" + var_name(v) +
                                  "' occurs in the head but not in the body: " + print_term(h) +
                                  " <- " + print_term(b));
  return Flow{h, b};
}

Flow parse_flow(std::string_view text) {
  std::size_t arrow = text.find("<-");
  if (arrow == std::string_view::npos)
    throw ParseError("", 1, 1, "expected 'HEAD <- BODY'");
  TermId head = parse_term(text.substr(0, arrow));
  TermId body = parse_term(text.substr(arrow + 2));
  return make_flow(head, body);
}

int flow_compare(const Flow& a, const Flow& b) {
  int c = term_compare(a.head, b.head);
  return c != 0 ? c : term_compare(a.body, b.body);
}

std::uint32_t flow_height(const Flow& f) { return std::max(term_height(f.head), term_height(f.body)); }
std::uint32_t flow_size(const Flow& f) { return term_size(f.head) + term_size(f.body); }

std::string print_flow(const Flow& f) { return print_term(f.head) + " <- " + print_term(f.body); }

Wiring::Wiring(std::vector<Flow> flows) : flows_(std::move(flows)) {
  std::sort(flows_.begin(), flows_.end(),
            [](const Flow& a, const Flow& b) { return flow_compare(a, b) < 0; });
  flows_.erase(std::unique(flows_.begin(), flows_.end()), flows_.end());
}

bool Wiring::contains(const Flow& f) const {
  return std::binary_search(flows_.begin(), flows_.end(), f, [](const Flow& a, const Flow& b) {
    return flow_compare(a, b) < 0;
  });
}

std::optional<Flow> flow_product(const Flow& f, const Flow& g) {
  // Both sides are canonical and would share variable names: rename g apart.
  Subst ren;
  std::vector<VarId> gv;
  collect_vars(g.head, gv);
  collect_vars(g.body, gv);
  for (VarId v : gv) ren.bind(v, make_var(fresh_var()));
  TermId ghead = ren.apply(g.head);
  TermId gbody = ren.apply(g.body);
  std::optional<Subst> theta = unify(f.body, ghead);
  if (!theta) return std::nullopt;
  return make_flow(theta->apply(f.head), theta->apply(gbody));
}

namespace {

std::atomic<unsigned> g_jobs{1};

// Root-symbol buckets: a body headed by symbol s can only unify with heads
// headed by s or by a variable.
struct Buckets {
  std::map<SymbolId, std::vector<const Flow*>> by_symbol;
  std::vector<const Flow*> var_headed;
  const std::vector<const Flow*>& candidates(SymbolId s) const {
    static const std::vector<const Flow*> kEmpty;
    auto it = by_symbol.find(s);
    return it == by_symbol.end() ? kEmpty : it->second;
  }
};

Buckets bucket_by_head(const Wiring& G) {
  Buckets b;
  for (const Flow& g : G.flows()) {
    if (term_is_var(g.head))
      b.var_headed.push_back(&g);
    else
      b.by_symbol[term_symbol(g.head)].push_back(&g);
  }
  return b;
}

void product_chunk(const std::vector<Flow>& fs, std::size_t begin, std::size_t end,
                   const Wiring& G, const Buckets& buckets, std::vector<Flow>& out) {
  for (std::size_t i = begin; i < end; ++i) {
    const Flow& f = fs[i];
    if (term_is_var(f.body)) {
      for (const Flow& g : G.flows())
        if (auto p = flow_product(f, g)) out.push_back(*p);
      continue;
    }
    for (const Flow* g : buckets.candidates(term_symbol(f.body)))
      if (auto p = flow_product(f, *g)) out.push_back(*p);
    for (const Flow* g : buckets.var_headed)
      if (auto p = flow_product(f, *g)) out.push_back(*p);
  }
}

}  // namespace

void set_jobs(unsigned j) { g_jobs.store(j == 0 ? 1 : j); }
unsigned jobs() { return g_jobs.load(); }

Wiring wiring_product(const Wiring& F, const Wiring& G) {
  if (F.empty() || G.empty()) return Wiring();
  Buckets buckets = bucket_by_head(G);
  const std::vector<Flow>& fs = F.flows();
  unsigned j = jobs();
  if (j <= 1 || fs.size() < 2 * j) {
    std::vector<Flow> out;
    product_chunk(fs, 0, fs.size(), G, buckets, out);
    return Wiring(std::move(out));
  }
  std::vector<std::vector<Flow>> parts(j);
  std::vector<std::thread> threads;
  std::size_t chunk = (fs.size() + j - 1) / j;
  for (unsigned t = 0; t < j; ++t) {
    std::size_t begin = std::min(fs.size(), t * chunk);
    std::size_t end = std::min(fs.size(), begin + chunk);
    threads.emplace_back(product_chunk, std::cref(fs), begin, end, std::cref(G),
                         std::cref(buckets), std::ref(parts[t]));
  }
  std::vector<Flow> out;
  for (unsigned t = 0; t < j; ++t) {
    threads[t].join();
    out.insert(out.end(), parts[t].begin(), parts[t].end());
  }
  return Wiring(std::move(out));
}

Wiring wiring_sum(const Wiring& F, const Wiring& G) {
  std::vector<Flow> out = F.flows();
  out.insert(out.end(), G.begin(), G.end());
  return Wiring(std::move(out));
}

Wiring wiring_power(const Wiring& F, unsigned n) {
  if (n == 0) return unit_wiring();
  Wiring acc = F;
  for (unsigned i = 1; i < n; ++i) acc = wiring_product(acc, F);
  return acc;
}

Flow flow_tensor(const Flow& f, const Flow& g) {
  Subst ren;
  std::vector<VarId> gv;
  collect_vars(g.head, gv);
  collect_vars(g.body, gv);
  for (VarId v : gv) ren.bind(v, make_var(fresh_var()));
  return make_flow(make_pair(f.head, ren.apply(g.head)), make_pair(f.body, ren.apply(g.body)));
}

Wiring tensor(const Wiring& F, const Wiring& G) {
  std::vector<Flow> out;
  out.reserve(F.size() * G.size());
  for (const Flow& f : F)
    for (const Flow& g : G) out.push_back(flow_tensor(f, g));
  return Wiring(std::move(out));
}

std::uint32_t wiring_height(const Wiring& F) {
  std::uint32_t h = 0;
  for (const Flow& f : F) h = std::max(h, flow_height(f));
  return h;
}

std::uint32_t wiring_size(const Wiring& F) {
  std::uint32_t s = 0;
  for (const Flow& f : F) s += flow_size(f);
  return s;
}

Wiring unit_wiring() {
  TermId x = make_var(intern_var("X0"));
  return Wiring({Flow{x, x}});
}

std::string print_wiring(const Wiring& F) {
  std::vector<std::string> lines;
  lines.reserve(F.size());
  for (const Flow& f : F) lines.push_back(print_flow(f));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

namespace {

bool is_stack_flow(const Flow& f) {
  TermId t = f.head;
  while (!term_is_var(t)) {
    if (term_children(t).size() != 1) return false;
    t = term_children(t)[0];
  }
  TermId u = f.body;
  while (!term_is_var(u)) {
    if (term_children(u).size() != 1) return false;
    u = term_children(u)[0];
  }
  return term_var(t) == term_var(u);
}

}  // namespace

bool is_stack_wiring(const Wiring& F) {
  for (const Flow& f : F)
    if (!is_stack_flow(f)) return false;
  return true;
}

NilpotencyVerdict naive_nilpotency(const Wiring& F, unsigned max_iter) {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  bool cycle_exit = is_stack_wiring(F);
  Wiring power = F;
  for (unsigned k = 1; k <= max_iter; ++k) {
    if (power.empty()) return {NilpotencyVerdict::kNilpotent, k};
    if (cycle_exit)
      for (const Flow& f : power)
        if (flow_product(f, f)) return {NilpotencyVerdict::kCycleFound, k};
    power = wiring_product(power, F);
  }
  return {NilpotencyVerdict::kInconclusive, max_iter};
}

namespace {

void check_depths(TermId t, std::uint32_t depth, std::map<VarId, std::uint32_t>& seen,
                  const Flow& flow, BalanceReport& report) {
  if (!report.balanced || term_closed(t)) return;
  if (term_is_var(t)) {
    auto [it, fresh] = seen.emplace(term_var(t), depth);
    if (!fresh && it->second != depth) {
      report.balanced = false;
      report.offending = flow;
      report.variable = term_var(t);
      report.depth_a = it->second;
      report.depth_b = depth;
    }
    return;
  }
  for (TermId c : term_children(t)) check_depths(c, depth + 1, seen, flow, report);
}

}  // namespace

BalanceReport is_balanced(const Flow& f) {
  BalanceReport report;
  std::map<VarId, std::uint32_t> seen;
  check_depths(f.head, 0, seen, f, report);
  check_depths(f.body, 0, seen, f, report);
  return report;
}

BalanceReport is_balanced(const Wiring& F) {
  for (const Flow& f : F) {
    BalanceReport r = is_balanced(f);
    if (!r.balanced) return r;
  }
  return BalanceReport{};
}

}  // namespace resol
