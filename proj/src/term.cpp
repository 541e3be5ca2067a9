#include "resol/term.hpp"

#include <atomic>
#include <cctype>
#include <mutex>
#include <unordered_map>

namespace resol {

ParseError::ParseError(std::string file_, int line_, int col_, const std::string& msg)
    : std::runtime_error((file_.empty() ? "" : file_ + ":") + std::to_string(line_) + ":" +
                         std::to_string(col_) + ": " + msg),
      file(std::move(file_)),
      line(line_),
      col(col_) {}

namespace {

// Append-only store with stable addresses and lock-free reads. Writers must
// hold the owning table's mutex; readers may index any already-published id.
template <typename T>
class StableStore {
 public:
  static constexpr std::size_t kBlockBits = 12;
  static constexpr std::size_t kBlockSize = std::size_t{1} << kBlockBits;
  static constexpr std::size_t kMaxBlocks = 1 << 16;

  StableStore() {
    for (auto& b : blocks_) b.store(nullptr, std::memory_order_relaxed);
  }

  const T& operator[](std::uint32_t id) const {
    return blocks_[id >> kBlockBits].load(std::memory_order_acquire)[id & (kBlockSize - 1)];
  }

  std::uint32_t push(T value) {
    std::size_t id = size_.load(std::memory_order_relaxed);
    std::size_t block = id >> kBlockBits;
    if (block >= kMaxBlocks) throw std::length_error("term store exhausted");
    if (blocks_[block].load(std::memory_order_relaxed) == nullptr)
      blocks_[block].store(new T[kBlockSize], std::memory_order_release);
    blocks_[block].load(std::memory_order_relaxed)[id & (kBlockSize - 1)] = std::move(value);
    size_.store(id + 1, std::memory_order_release);
    return static_cast<std::uint32_t>(id);
  }

  std::size_t size() const { return size_.load(std::memory_order_acquire); }

 private:
  std::atomic<T*> blocks_[kMaxBlocks];
  std::atomic<std::size_t> size_{0};
};

struct SymbolInfo {
  std::string name;
  std::uint32_t arity = 0;
  std::uint64_t hash = 0;
};

struct VarInfo {
  std::string name;
  std::uint64_t hash = 0;
};

struct TermNode {
  bool is_var = false;
  std::uint32_t id = 0;  // VarId or SymbolId
  std::vector<TermId> kids;
  std::uint32_t height = 0;
  std::uint32_t size = 0;
  bool closed = true;
  std::uint64_t hash = 0;
};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

struct TermKey {
  bool is_var;
  std::uint32_t id;
  std::vector<TermId> kids;
  bool operator==(const TermKey& o) const {
    return is_var == o.is_var && id == o.id && kids == o.kids;
  }
};

struct TermKeyHash {
  std::size_t operator()(const TermKey& k) const {
    std::uint64_t h = k.is_var ? 0x517cc1b727220a95ULL : 0x2545f4914f6cdd1dULL;
    h = mix(h, k.id);
    for (TermId c : k.kids) h = mix(h, c);
    return static_cast<std::size_t>(h);
  }
};

struct Tables {
  std::mutex sym_mu;
  StableStore<SymbolInfo> symbols;
  std::unordered_map<std::string, SymbolId> sym_index;

  std::mutex var_mu;
  StableStore<VarInfo> vars;
  std::unordered_map<std::string, VarId> var_index;
  std::atomic<std::uint64_t> fresh_counter{0};

  std::mutex term_mu;
  StableStore<TermNode> terms;
  std::unordered_map<TermKey, TermId, TermKeyHash> term_index;

  SymbolId pair, star, start, accept;

  Tables() {
    pair = intern(".", 2);
    star = intern("star", 0);
    start = intern("START", 1);
    accept = intern("ACCEPT", 1);
  }

  SymbolId intern(std::string_view name, std::uint32_t arity) {
    std::lock_guard<std::mutex> lk(sym_mu);
    auto it = sym_index.find(std::string(name));
    if (it != sym_index.end()) {
      if (symbols[it->second].arity != arity)
        throw std::invalid_argument("symbol '" + std::string(name) + "' already has arity " +
                                    std::to_string(symbols[it->second].arity) + ", not " +
                                    std::to_string(arity));
      return it->second;
    }
    SymbolInfo info;
    info.name = std::string(name);
    info.arity = arity;
    info.hash = std::hash<std::string>{}(info.name);
    SymbolId id = symbols.push(std::move(info));
    sym_index.emplace(std::string(name), id);
    return id;
  }
};

Tables& tables() {
  static Tables t;
  return t;
}

}  // namespace

SymbolId intern_symbol(std::string_view name, std::uint32_t arity) {
  return tables().intern(name, arity);
}

std::optional<SymbolId> find_symbol(std::string_view name) {
  Tables& t = tables();
  std::lock_guard<std::mutex> lk(t.sym_mu);
  auto it = t.sym_index.find(std::string(name));
  if (it == t.sym_index.end()) return std::nullopt;
  return it->second;
}

const std::string& symbol_name(SymbolId s) { return tables().symbols[s].name; }
std::uint32_t symbol_arity(SymbolId s) { return tables().symbols[s].arity; }

SymbolId pair_symbol() { return tables().pair; }
SymbolId star_symbol() { return tables().star; }
SymbolId start_symbol() { return tables().start; }
SymbolId accept_symbol() { return tables().accept; }

VarId intern_var(std::string_view name) {
  Tables& t = tables();
  std::lock_guard<std::mutex> lk(t.var_mu);
  auto it = t.var_index.find(std::string(name));
  if (it != t.var_index.end()) return it->second;
  VarInfo info;
  info.name = std::string(name);
  info.hash = std::hash<std::string>{}(info.name);
  VarId id = t.vars.push(std::move(info));
  t.var_index.emplace(std::string(name), id);
  return id;
}

const std::string& var_name(VarId v) { return tables().vars[v].name; }

VarId fresh_var() {
  // '#' is not an identifier character, so these never collide with input.
  std::uint64_t n = tables().fresh_counter.fetch_add(1, std::memory_order_relaxed);
  return intern_var("#" + std::to_string(n));
}

TermId make_var(VarId v) {
  Tables& t = tables();
  TermKey key{true, v, {}};
  std::lock_guard<std::mutex> lk(t.term_mu);
  auto it = t.term_index.find(key);
  if (it != t.term_index.end()) return it->second;
  TermNode node;
  node.is_var = true;
  node.id = v;
  node.closed = false;
  node.hash = mix(0x9e3779b97f4a7c15ULL, t.vars[v].hash);
  TermId id = t.terms.push(std::move(node));
  t.term_index.emplace(std::move(key), id);
  return id;
}

TermId make_app(SymbolId s, const std::vector<TermId>& children) {
  Tables& t = tables();
  if (t.symbols[s].arity != children.size())
    throw std::invalid_argument("symbol '" + t.symbols[s].name + "' has arity " +
                                std::to_string(t.symbols[s].arity) + ", got " +
                                std::to_string(children.size()) + " arguments");
  TermKey key{false, s, children};
  std::lock_guard<std::mutex> lk(t.term_mu);
  auto it = t.term_index.find(key);
  if (it != t.term_index.end()) return it->second;
  TermNode node;
  node.is_var = false;
  node.id = s;
  node.kids = children;
  node.size = 1;
  node.hash = mix(0x2545f4914f6cdd1dULL, t.symbols[s].hash);
  for (TermId c : children) {
    const TermNode& k = t.terms[c];
    node.height = std::max(node.height, k.height + 1);
    node.size += k.size;
    node.closed = node.closed && k.closed;
    node.hash = mix(node.hash, k.hash);
  }
  TermId id = t.terms.push(std::move(node));
  t.term_index.emplace(std::move(key), id);
  return id;
}

TermId make_const(SymbolId s) { return make_app(s, {}); }

TermId make_pair(TermId left, TermId right) { return make_app(pair_symbol(), {left, right}); }

TermId star_term() { return make_const(star_symbol()); }

bool term_is_var(TermId t) { return tables().terms[t].is_var; }

VarId term_var(TermId t) {
  const TermNode& n = tables().terms[t];
  if (!n.is_var) throw std::logic_error("term_var on application");
  return n.id;
}

SymbolId term_symbol(TermId t) {
  const TermNode& n = tables().terms[t];
  if (n.is_var) throw std::logic_error("term_symbol on variable");
  return n.id;
}

const std::vector<TermId>& term_children(TermId t) { return tables().terms[t].kids; }

std::uint32_t term_height(TermId t) { return tables().terms[t].height; }
bool term_closed(TermId t) { return tables().terms[t].closed; }
std::uint32_t term_size(TermId t) { return tables().terms[t].size; }

void collect_vars(TermId t, std::vector<VarId>& out) {
  const TermNode& n = tables().terms[t];
  if (n.closed) return;
  if (n.is_var) {
    for (VarId v : out)
      if (v == n.id) return;
    out.push_back(n.id);
    return;
  }
  for (TermId c : n.kids) collect_vars(c, out);
}

std::vector<VarId> term_vars(TermId t) {
  std::vector<VarId> out;
  collect_vars(t, out);
  return out;
}

bool occurs(VarId v, TermId t) {
  const TermNode& n = tables().terms[t];
  if (n.closed) return false;
  if (n.is_var) return n.id == v;
  for (TermId c : n.kids)
    if (occurs(v, c)) return true;
  return false;
}

int term_compare(TermId a, TermId b) {
  if (a == b) return 0;
  const Tables& t = tables();
  const TermNode& na = t.terms[a];
  const TermNode& nb = t.terms[b];
  if (na.is_var != nb.is_var) return na.is_var ? -1 : 1;
  if (na.is_var) return t.vars[na.id].name.compare(t.vars[nb.id].name) < 0 ? -1 : 1;
  if (na.id != nb.id) {
    int c = t.symbols[na.id].name.compare(t.symbols[nb.id].name);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  for (std::size_t i = 0; i < na.kids.size(); ++i) {
    int c = term_compare(na.kids[i], nb.kids[i]);
    if (c != 0) return c;
  }
  return 0;
}

namespace {

void print_rec(TermId t, std::string& out) {
  const TermNode& n = tables().terms[t];
  if (n.is_var) {
    out += tables().vars[n.id].name;
    return;
  }
  if (n.id == tables().pair) {
    bool paren = !term_is_var(n.kids[0]) && term_symbol(n.kids[0]) == tables().pair;
    if (paren) out += '(';
    print_rec(n.kids[0], out);
    if (paren) out += ')';
    out += " . ";
    print_rec(n.kids[1], out);
    return;
  }
  out += tables().symbols[n.id].name;
  if (!n.kids.empty()) {
    out += '(';
    for (std::size_t i = 0; i < n.kids.size(); ++i) {
      if (i) out += ", ";
      print_rec(n.kids[i], out);
    }
    out += ')';
  }
}

}  // namespace

std::string print_term(TermId t) {
  std::string out;
  print_rec(t, out);
  return out;
}

// ---- parsing ----------------------------------------------------------

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;
  std::string file;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(file, line, col, msg); }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) advance();
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      fail(std::string("expected '") + c + "', got " +
           (pos >= text.size() ? "end of input" : "'" + std::string(1, text[pos]) + "'"));
    advance();
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !ident_start(text[pos]))
      fail("expected identifier" +
           (pos < text.size() ? std::string(", got '") + text[pos] + "'" : std::string()));
    std::string out;
    while (pos < text.size() && ident_char(text[pos])) {
      out += text[pos];
      advance();
    }
    return out;
  }
};

bool is_variable_name(const std::string& name) {
  return std::isupper(static_cast<unsigned char>(name[0])) && name != "START" && name != "ACCEPT";
}

TermId parse_expr(Lexer& lx);

TermId parse_atom(Lexer& lx) {
  if (lx.peek() == '(') {
    lx.expect('(');
    TermId t = parse_expr(lx);
    lx.expect(')');
    return t;
  }
  int line = lx.line, col = lx.col;
  lx.skip_ws();
  line = lx.line;
  col = lx.col;
  std::string name = lx.ident();
  if (lx.peek() == '(') {
    lx.expect('(');
    std::vector<TermId> args;
    args.push_back(parse_expr(lx));
    while (lx.peek() == ',') {
      lx.expect(',');
      args.push_back(parse_expr(lx));
    }
    lx.expect(')');
    if (is_variable_name(name)) throw ParseError(lx.file, line, col, "variable '" + name + "' applied to arguments");
    try {
      return make_app(intern_symbol(name, static_cast<std::uint32_t>(args.size())), args);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lx.file, line, col, e.what());
    }
  }
  if (is_variable_name(name)) return make_var(intern_var(name));
  try {
    return make_const(intern_symbol(name, 0));
  } catch (const std::invalid_argument& e) {
    throw ParseError(lx.file, line, col, e.what());
  }
}

TermId parse_expr(Lexer& lx) {
  TermId left = parse_atom(lx);
  if (lx.peek() == '.') {
    lx.expect('.');
    return make_pair(left, parse_expr(lx));
  }
  return left;
}

}  // namespace

TermId parse_term(std::string_view text) {
  Lexer lx{text};
  TermId t = parse_expr(lx);
  if (!lx.at_end()) lx.fail("unexpected trailing input");
  return t;
}

// ---- substitutions ----------------------------------------------------

std::optional<TermId> Subst::lookup(VarId v) const {
  auto it = bind_.find(v);
  if (it == bind_.end()) return std::nullopt;
  return it->second;
}

void Subst::bind(VarId v, TermId t) {
  if (term_is_var(t) && term_var(t) == v) return;
  bind_[v] = t;
}

TermId Subst::apply(TermId t) const {
  if (bind_.empty() || term_closed(t)) return t;
  if (term_is_var(t)) {
    auto it = bind_.find(term_var(t));
    return it == bind_.end() ? t : it->second;
  }
  const std::vector<TermId>& kids = term_children(t);
  std::vector<TermId> out;
  out.reserve(kids.size());
  bool changed = false;
  for (TermId c : kids) {
    TermId r = apply(c);
    changed = changed || r != c;
    out.push_back(r);
  }
  return changed ? make_app(term_symbol(t), out) : t;
}

namespace {

TermId subst_var(TermId t, VarId v, TermId repl) {
  if (term_closed(t)) return t;
  if (term_is_var(t)) return term_var(t) == v ? repl : t;
  const std::vector<TermId>& kids = term_children(t);
  std::vector<TermId> out;
  out.reserve(kids.size());
  bool changed = false;
  for (TermId c : kids) {
    TermId r = subst_var(c, v, repl);
    changed = changed || r != c;
    out.push_back(r);
  }
  return changed ? make_app(term_symbol(t), out) : t;
}

}  // namespace

std::optional<Subst> unify(TermId t, TermId u) {
  // Martelli-Montanari solved-form transformation: the work list holds the
  // remaining equations, `sol` the solved ones (no solved variable occurs in
  // any right-hand side, so the result is idempotent by construction).
  std::vector<std::pair<TermId, TermId>> work{{t, u}};
  std::map<VarId, TermId> sol;
  while (!work.empty()) {
    auto [a, b] = work.back();
    work.pop_back();
    if (a == b) continue;
    if (!term_is_var(a) && term_is_var(b)) std::swap(a, b);
    if (term_is_var(a)) {
      VarId v = term_var(a);
      if (occurs(v, b)) return std::nullopt;
      for (auto& [x, y] : work) {
        x = subst_var(x, v, b);
        y = subst_var(y, v, b);
      }
      for (auto& [w, r] : sol) r = subst_var(r, v, b);
      sol[v] = b;
      continue;
    }
    if (term_symbol(a) != term_symbol(b)) return std::nullopt;
    const std::vector<TermId>& ka = term_children(a);
    const std::vector<TermId>& kb = term_children(b);
    for (std::size_t i = 0; i < ka.size(); ++i) work.emplace_back(ka[i], kb[i]);
  }
  Subst s;
  for (auto& [v, r] : sol) s.bind(v, r);
  return s;
}

bool matchable(TermId t, TermId u) { return unify(rename_apart(t), rename_apart(u)).has_value(); }

TermId rename_apart(TermId t) {
  Subst s;
  for (VarId v : term_vars(t)) s.bind(v, make_var(fresh_var()));
  return s.apply(t);
}

namespace {

Subst canon_subst(const std::vector<VarId>& vars) {
  Subst s;
  for (std::size_t i = 0; i < vars.size(); ++i)
    s.bind(vars[i], make_var(intern_var("X" + std::to_string(i))));
  return s;
}

}  // namespace

TermId canon_term(TermId t) { return canon_subst(term_vars(t)).apply(t); }

std::pair<TermId, TermId> canon_pair(TermId a, TermId b) {
  std::vector<VarId> vars;
  collect_vars(a, vars);
  collect_vars(b, vars);
  Subst s = canon_subst(vars);
  return {s.apply(a), s.apply(b)};
}

}  // namespace resol
