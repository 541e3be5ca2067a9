#include "resol/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <ostream>

#include "resol/formats.hpp"

namespace resol {

namespace {

using nlohmann::json;

// Words on the command line: either comma-separated letters or, without
// commas, one letter per character.
std::vector<std::string> split_word(const std::string& s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  if (s.find(',') != std::string::npos) {
    std::size_t pos = 0;
    while (pos <= s.size()) {
      std::size_t end = s.find(',', pos);
      if (end == std::string::npos) end = s.size();
      out.push_back(s.substr(pos, end - pos));
      pos = end + 1;
      if (end == s.size()) break;
    }
    return out;
  }
  for (char c : s) out.emplace_back(1, c);
  return out;
}

struct Report {
  std::ostream& out;
  bool as_json;
  json j = json::object();
  int code = 0;

  void verdict(const std::string& v, int exit_code) {
    j["verdict"] = v;
    code = exit_code;
    if (!as_json) out << "VERDICT: " << v << "\n";
  }
  void text(const std::string& key, const std::string& body) {
    j[key] = body;
    if (!as_json) out << body;
  }
  void line(const std::string& s) {
    if (!as_json) out << s << "\n";
  }
  int finish() {
    if (as_json) out << j.dump(2) << "\n";
    return code;
  }
};

std::string wiring_text(const Wiring& w) {
  std::string s;
  for (const Flow& f : w) s += print_flow(f) + "\n";
  return s;
}

std::string stack_wiring_text(const StackWiring& w) {
  std::string s;
  for (const StackOp& o : w) s += print_flow(op_to_flow(o)) + "\n";
  return s;
}

StackWiring require_stack(const Wiring& w) {
  auto s = from_wiring(w);
  if (!s)
    throw std::invalid_argument(
        "the wiring is not a stack wiring (unary flows over one variable); "
        "use --naive for general wirings");
  return *s;
}

std::string default_out_path(std::string in) {
  std::size_t dot = in.find_last_of('.');
  std::size_t slash = in.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    in.erase(dot);
  return in + ".q";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"resolution semiring toolkit"};
  app.require_subcommand(1);
  bool as_json = false;
  unsigned jobs = 1;
  app.add_flag("--json", as_json, "machine-readable output");
  app.add_option("--jobs", jobs, "worker threads for wiring products");

  std::string term_a, term_b, file_a, file_b, word, out_path;
  unsigned max_iter = 64, depth = 64;
  bool naive = false, oracle = false;

  auto* c_unify = app.add_subcommand("unify", "unify two terms");
  c_unify->add_option("T", term_a)->required();
  c_unify->add_option("U", term_b)->required();

  auto* c_product = app.add_subcommand("product", "multiply two wirings");
  c_product->add_option("F", file_a)->required();
  c_product->add_option("G", file_b)->required();

  auto* c_nilp = app.add_subcommand("nilpotent", "decide nilpotency");
  c_nilp->add_option("F", file_a)->required();
  c_nilp->add_flag("--naive", naive, "iterate powers instead");
  c_nilp->add_option("--max-iter", max_iter, "power iteration limit");

  auto* c_sat = app.add_subcommand("saturate", "memoize a stack wiring");
  c_sat->add_option("F", file_a)->required();

  auto* c_flat = app.add_subcommand("flatten", "reduce height to at most 2");
  c_flat->add_option("F", file_a)->required();

  auto* c_word = app.add_subcommand("word-rep", "wiring of a word");
  c_word->add_option("ALPHABET", term_a)->required();
  c_word->add_option("WORD", word);

  auto* c_chk = app.add_subcommand("check-obs", "validate an observation");
  c_chk->add_option("O", file_a)->required();

  auto* c_acc = app.add_subcommand("accept", "run an observation on a word");
  c_acc->add_option("O", file_a)->required();
  c_acc->add_option("WORD", word);

  auto* c_red = app.add_subcommand("reduce", "stack wiring of an interaction");
  c_red->add_option("O", file_a)->required();
  c_red->add_option("WORD", word);

  auto* c_enc = app.add_subcommand("encode-automaton",
                                   "observation of an automaton");
  c_enc->add_option("M", file_a)->required();

  auto* c_sim = app.add_subcommand("simulate", "run an automaton on a word");
  c_sim->add_option("M", file_a)->required();
  c_sim->add_option("WORD", word);

  auto* c_query = app.add_subcommand("query", "answer a unary query");
  c_query->add_option("Q", file_a)->required();
  c_query->add_flag("--oracle", oracle, "search for a derivation instead");
  c_query->add_option("--depth", depth, "search depth for --oracle");

  auto* c_cvpe = app.add_subcommand("cvp-encode", "circuit to query file");
  c_cvpe->add_option("C", file_a)->required();
  c_cvpe->add_option("--out", out_path, "where to write the query");

  auto* c_cvpv = app.add_subcommand("cvp-eval", "evaluate a circuit");
  c_cvpv->add_option("C", file_a)->required();

  std::vector<const char*> argv{"resol"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  set_jobs(jobs);
  Report r{out, as_json};
  try {
    if (app.got_subcommand(c_unify)) {
      TermId t = parse_term(term_a), u = parse_term(term_b);
      auto s = unify(t, u);
      if (!s) {
        r.verdict("not unifiable", 1);
      } else {
        r.verdict("unifiable", 0);
        json b = json::object();
        for (const auto& [v, bound] : s->bindings()) {
          b[var_name(v)] = print_term(bound);
          r.line(var_name(v) + " -> " + print_term(bound));
        }
        r.j["bindings"] = b;
      }
    } else if (app.got_subcommand(c_product)) {
      Wiring p = wiring_product(load_wiring(file_a), load_wiring(file_b));
      r.text("wiring", wiring_text(p));
    } else if (app.got_subcommand(c_nilp)) {
      Wiring w = load_wiring(file_a);
      if (naive) {
        if (max_iter == 0) throw std::invalid_argument("--max-iter needs >= 1");
        NilpotencyVerdict v = naive_nilpotency(w, max_iter);
        r.j["iterations"] = v.index;
        switch (v.kind) {
          case NilpotencyVerdict::kNilpotent:
            r.verdict("nilpotent", 0);
            r.line("power " + std::to_string(v.index) + " is zero");
            break;
          case NilpotencyVerdict::kCycleFound:
            r.verdict("cyclic", 1);
            r.line("power " + std::to_string(v.index) +
                   " contains a self-composable flow");
            break;
          case NilpotencyVerdict::kInconclusive:
            r.verdict("inconclusive", 1);
            r.line("no verdict after " + std::to_string(v.index) +
                   " iterations");
            break;
        }
      } else {
        bool n = stack_nilpotent(require_stack(w));
        r.verdict(n ? "nilpotent" : "cyclic", n ? 0 : 1);
      }
    } else if (app.got_subcommand(c_sat)) {
      StackWiring s = saturate(require_stack(load_wiring(file_a)));
      r.text("wiring", stack_wiring_text(s));
    } else if (app.got_subcommand(c_flat)) {
      StackWiring f = flatten(require_stack(load_wiring(file_a)));
      r.text("wiring", stack_wiring_text(f));
    } else if (app.got_subcommand(c_word)) {
      WordContext ctx = make_word_context(split_word(term_a), split_word(word));
      r.text("wiring", wiring_text(word_rep(ctx)));
    } else if (app.got_subcommand(c_chk)) {
      ObservationCheck c = check_observation(load_wiring(file_a));
      if (c.ok) {
        r.verdict("valid observation", 0);
      } else {
        r.verdict("invalid observation", 1);
        r.j["reason"] = c.reason;
        r.j["flow"] = print_flow(c.offending);
        r.line(c.reason + ": " + print_flow(c.offending));
      }
    } else if (app.got_subcommand(c_acc)) {
      Observation o = validate_observation(load_wiring(file_a));
      bool yes = accepts(o, split_word(word));
      r.verdict(yes ? "accept" : "reject", yes ? 0 : 1);
    } else if (app.got_subcommand(c_red)) {
      Observation o = validate_observation(load_wiring(file_a));
      r.text("wiring", stack_wiring_text(reduce(o, split_word(word))));
    } else if (app.got_subcommand(c_enc)) {
      Observation o = encode_automaton(load_automaton(file_a));
      r.text("wiring", wiring_text(o.wiring));
    } else if (app.got_subcommand(c_sim)) {
      RunResult res = simulate(load_automaton(file_a), split_word(word));
      bool yes = res == RunResult::kAccept;
      r.verdict(yes ? "accept" : "reject", yes ? 0 : 1);
    } else if (app.got_subcommand(c_query)) {
      UnaryQuery q = load_query(file_a);
      if (oracle) {
        auto d = derive(q, depth);
        if (d) {
          r.verdict("success", 0);
          json steps = json::array();
          r.line(print_term(d->start));
          for (const auto& [rule, t] : d->steps) {
            steps.push_back({{"rule", print_flow(op_to_flow(rule))},
                             {"term", print_term(t)}});
            r.line("-> " + print_term(t) + "   (via " +
                   print_flow(op_to_flow(rule)) + ")");
          }
          r.j["start"] = print_term(d->start);
          r.j["steps"] = steps;
        } else {
          r.verdict("failure", 1);
        }
      } else {
        bool yes = query_succeeds(q);
        r.verdict(yes ? "success" : "failure", yes ? 0 : 1);
      }
    } else if (app.got_subcommand(c_cvpe)) {
      Circuit c = load_circuit(file_a);
      std::string path = out_path.empty() ? default_out_path(file_a) : out_path;
      write_file(path, format_query(encode_cvp(c)));
      r.j["path"] = path;
      if (!as_json) out << path << "\n";
    } else if (app.got_subcommand(c_cvpv)) {
      int v = eval_circuit(load_circuit(file_a));
      r.verdict(std::to_string(v), v == 1 ? 0 : 1);
    }
  } catch (const ParseError& e) {
    err << (e.file.empty() ? std::string("<arg>") : e.file) << ":" << e.line
        << ":" << e.col << ": " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return r.finish();
}

}  // namespace resol
