#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "resol/cli.hpp"
#include "resol/formats.hpp"

using namespace resol;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& s, const std::string& needle) {
  return s.find(needle) != std::string::npos;
}

std::string tmp_file(const std::string& name, const std::string& content) {
  static std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "resol_cli_tests";
    std::filesystem::create_directories(d);
    return d;
  }();
  std::filesystem::path p = dir / name;
  write_file(p.string(), content);
  return p.string();
}

}  // namespace

TEST_CASE("cli unify reports bindings and verdicts") {
  CliResult r = run({"unify", "p(X, g(Y))", "p(h(Z), g(Z))"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "VERDICT: unifiable"));
  CHECK(contains(r.out, "X -> h(Z)"));
  CHECK(contains(r.out, "Y -> Z"));

  r = run({"unify", "f(c)", "f(d)"});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "VERDICT: not unifiable"));
}

TEST_CASE("cli surfaces parse errors with positions and exit code 2") {
  CliResult r = run({"unify", "f(", "c"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "<arg>:1:"));

  std::string bad = tmp_file("bad.w", "f(X) = g(X)\n");
  r = run({"nilpotent", bad});
  CHECK(r.code == 2);
  CHECK(contains(r.err, bad + ":1:1"));

  r = run({"nilpotent", "/nonexistent.w"});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "cannot open"));

  r = run({"no-such-command"});
  CHECK(r.code == 2);
  r = run({});
  CHECK(r.code == 2);
}

TEST_CASE("cli help exits cleanly") {
  CliResult r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "resolution semiring toolkit"));
}

TEST_CASE("cli nilpotent on stack wirings") {
  std::string dead = tmp_file("dead.w", "f(X) <- g(X)\n");
  CliResult r = run({"nilpotent", dead});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "VERDICT: nilpotent"));

  std::string loop = tmp_file("loop.w", "f(X) <- g(X)\ng(X) <- f(X)\n");
  r = run({"nilpotent", loop});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "VERDICT: cyclic"));

  std::string pair = tmp_file("pair.w", "X . c <- d . X\n");
  r = run({"nilpotent", pair});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "--naive"));

  r = run({"nilpotent", "--naive", pair});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "power 3 is zero"));

  std::string stuck = tmp_file("stuck.w", "f(X) . c <- f(X) . c\n");
  r = run({"nilpotent", "--naive", "--max-iter", "5", stuck});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "no verdict after 5 iterations"));
}

TEST_CASE("cli json output is well-formed") {
  CliResult r = run({"--json", "unify", "f(X)", "f(c)"});
  CHECK(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "unifiable");
  CHECK(j["bindings"]["X"] == "c");

  std::string pair = tmp_file("pair.w", "X . c <- d . X\n");
  r = run({"--json", "nilpotent", "--naive", pair});
  j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "nilpotent");
  CHECK(j["iterations"] == 3);
}

TEST_CASE("cli word-rep prints the movement wiring") {
  CliResult r = run({"word-rep", "ab", "ab"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "a . l . _pos1 <- star . r . _pos0"));
  CHECK(contains(r.out, "b . r . _pos2 <- star . l . _pos0"));
  // Comma-separated letters allow multi-character names.
  r = run({"word-rep", "ab,cd", "cd,ab"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "cd . l . _pos1 <- star . r . _pos0"));
}

TEST_CASE("cli validates observations") {
  std::string good = tmp_file(
      "obs.w",
      "a . l . sa(X) . q0 . aux0 . hd(P) <- star . r . X . q0 . aux0 . hd(P)\n");
  CliResult r = run({"check-obs", good});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "VERDICT: valid observation"));

  std::string bad = tmp_file("notobs.w", "f(X) <- g(X)\n");
  r = run({"check-obs", bad});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "VERDICT: invalid observation"));
  CHECK(contains(r.out, "six interaction slots"));

  r = run({"accept", good, "a"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "VERDICT: accept"));

  r = run({"reduce", good, "a"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "<-"));
}

TEST_CASE("cli simulate and encode agree on a bracket machine") {
  std::string aut = tmp_file("parens.aut",
                             "states: entry scan reject\n"
                             "init: entry\n"
                             "input: o c\n"
                             "stack: s\n"
                             "heads: 1\n"
                             "trans:\n"
                             "(entry; lend; bot) -> (scan; +1; stay)\n"
                             "(scan; o; bot) -> (scan; +1; push s)\n"
                             "(scan; o; s) -> (scan; +1; push s)\n"
                             "(scan; c; s) -> (scan; +1; pop)\n"
                             "(scan; c; bot) -> (reject; 0; push s)\n"
                             "(scan; rend; s) -> (reject; 0; push s)\n");
  CHECK(run({"simulate", aut, "oc"}).code == 0);
  CHECK(run({"simulate", aut, "oco"}).code == 1);
  CHECK(run({"simulate", aut, ""}).code == 0);

  CliResult enc = run({"encode-automaton", aut});
  CHECK(enc.code == 0);
  std::string obs = tmp_file("parens_obs.w", enc.out);
  CHECK(run({"accept", obs, "oc"}).code == 0);
  CHECK(run({"accept", obs, "oco"}).code == 1);
}

TEST_CASE("cli query answers and witnesses") {
  std::string q = tmp_file("simple.q",
                           "data:\n  f(c)\nprogram:\n  g(X) <- f(X)\ngoal:\n  g(c)\n");
  CliResult r = run({"query", q});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "VERDICT: success"));

  r = run({"query", "--oracle", q});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "f(c)"));
  CHECK(contains(r.out, "-> g(c)"));

  std::string no = tmp_file("no.q",
                            "data:\n  f(c)\nprogram:\ngoal:\n  g(c)\n");
  CHECK(run({"query", no}).code == 1);
  CHECK(run({"query", "--oracle", no}).code == 1);
}

TEST_CASE("cli circuit pipeline") {
  std::string ckt = tmp_file("c1.ckt",
                             "gate x = one\n"
                             "gate y = zero\n"
                             "gate z = or(x, y)\n"
                             "gate w = not(y)\n"
                             "gate o = and(z, w)\n"
                             "output o\n");
  CliResult r = run({"cvp-eval", ckt});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "VERDICT: 1"));

  r = run({"cvp-encode", ckt});
  CHECK(r.code == 0);
  std::string qpath = ckt.substr(0, ckt.size() - 4) + ".q";
  CHECK(contains(r.out, qpath));
  CHECK(run({"query", qpath}).code == 0);

  std::string other = qpath + ".alt";
  r = run({"cvp-encode", "--out", other, ckt});
  CHECK(r.code == 0);
  CHECK(run({"query", other}).code == 0);

  std::string zero = tmp_file("c0.ckt", "gate o = zero\noutput o\n");
  r = run({"cvp-eval", zero});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "VERDICT: 0"));
  r = run({"cvp-encode", zero});
  CHECK(r.code == 0);
  CHECK(run({"query", zero.substr(0, zero.size() - 4) + ".q"}).code == 1);
}

TEST_CASE("cli accepts a jobs knob") {
  std::string w = tmp_file("prod.w", "f(X) <- g(X)\n");
  CliResult r = run({"--jobs", "2", "product", w, w});
  CHECK(r.code == 0);
  CHECK(r.out.empty());  // the product is empty
  set_jobs(1);
}
