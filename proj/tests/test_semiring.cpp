#include <doctest.h>

#include <random>
#include <stdexcept>

#include "gen.hpp"
#include "resol/semiring.hpp"

using namespace resol;

TEST_CASE("flows reject head variables missing from the body") {
  CHECK_THROWS_AS(parse_flow("f(X) <- g(Y)"), std::invalid_argument);
  CHECK_NOTHROW(parse_flow("f(X) <- p(X, Y)"));
  CHECK_NOTHROW(parse_flow("c <- g(Y)"));
}

TEST_CASE("flows are stored canonically renamed") {
  Flow f = parse_flow("p(B, A) <- g(A . B)");
  CHECK(print_flow(f) == "p(X0, X1) <- g(X1 . X0)");
  CHECK(f == parse_flow("p(R, Q) <- g(Q . R)"));
}

TEST_CASE("flow product composes through unification") {
  Flow hg = parse_flow("h(X) <- g(X)");
  Flow gf = parse_flow("g(X) <- f(X)");
  auto p = flow_product(hg, gf);
  REQUIRE(p.has_value());
  CHECK(*p == parse_flow("h(X) <- f(X)"));
  // The other order has g meeting h: no common instance.
  CHECK(!flow_product(gf, hg).has_value());
}

TEST_CASE("flow product instantiates both sides") {
  auto p = flow_product(parse_flow("f(X) <- p(X, X)"),
                        parse_flow("p(c, Y) <- h(Y)"));
  REQUIRE(p.has_value());
  CHECK(*p == parse_flow("f(c) <- h(c)"));
  // Renaming apart: the X on both sides must not be confused.
  auto q = flow_product(parse_flow("f(X) <- g(X)"),
                        parse_flow("g(h(X)) <- k(X)"));
  REQUIRE(q.has_value());
  CHECK(*q == parse_flow("f(h(X)) <- k(X)"));
}

TEST_CASE("pair-carrying flow squares then dies") {
  Wiring f(std::vector<Flow>{parse_flow("X . c <- d . X")});
  Wiring f2 = wiring_product(f, f);
  REQUIRE(f2.size() == 1);
  CHECK(print_flow(f2.flows()[0]) == "c . c <- d . d");
  CHECK(wiring_product(f2, f).empty());
  CHECK(wiring_power(f, 3).empty());
  CHECK(!wiring_power(f, 2).empty());
}

TEST_CASE("unit wiring is neutral for the product") {
  std::mt19937 rng(7001);
  for (int i = 0; i < 20; ++i) {
    Wiring F = to_wiring(gen::random_stack_wiring(rng));
    CHECK(wiring_product(F, unit_wiring()) == F);
    CHECK(wiring_product(unit_wiring(), F) == F);
  }
}

TEST_CASE("wiring product is associative") {
  std::mt19937 rng(7002);
  for (int i = 0; i < 30; ++i) {
    Wiring F = to_wiring(gen::random_stack_wiring(rng, 3, 2, 2));
    Wiring G = to_wiring(gen::random_stack_wiring(rng, 3, 2, 2));
    Wiring H = to_wiring(gen::random_stack_wiring(rng, 3, 2, 2));
    CHECK(wiring_product(wiring_product(F, G), H) ==
          wiring_product(F, wiring_product(G, H)));
  }
}

TEST_CASE("product distributes over sum") {
  std::mt19937 rng(7003);
  for (int i = 0; i < 30; ++i) {
    Wiring F = to_wiring(gen::random_stack_wiring(rng, 3, 2, 2));
    Wiring G = to_wiring(gen::random_stack_wiring(rng, 3, 2, 2));
    Wiring H = to_wiring(gen::random_stack_wiring(rng, 3, 2, 2));
    CHECK(wiring_product(F, wiring_sum(G, H)) ==
          wiring_sum(wiring_product(F, G), wiring_product(F, H)));
  }
}

TEST_CASE("tensor pairs components and respects the product") {
  Flow a = parse_flow("u(X) <- v(X)");
  Flow b = parse_flow("t(c) <- w(c)");
  CHECK(print_flow(flow_tensor(a, b)) == "u(X0) . t(c) <- v(X0) . w(c)");

  std::mt19937 rng(7004);
  for (int i = 0; i < 20; ++i) {
    Wiring F = to_wiring(gen::random_stack_wiring(rng, 2, 2, 2));
    Wiring G = to_wiring(gen::random_stack_wiring(rng, 2, 2, 2));
    Wiring F2 = to_wiring(gen::random_stack_wiring(rng, 2, 2, 2));
    Wiring G2 = to_wiring(gen::random_stack_wiring(rng, 2, 2, 2));
    // (F tensor G)(F2 tensor G2) = FF2 tensor GG2.
    CHECK(wiring_product(tensor(F, G), tensor(F2, G2)) ==
          tensor(wiring_product(F, F2), wiring_product(G, G2)));
  }
}

TEST_CASE("naive nilpotency reports the index") {
  Wiring f(std::vector<Flow>{parse_flow("X . c <- d . X")});
  NilpotencyVerdict v = naive_nilpotency(f, 10);
  CHECK(v.kind == NilpotencyVerdict::kNilpotent);
  CHECK(v.index == 3);
  CHECK(v.nilpotent());
}

TEST_CASE("naive nilpotency finds cycles in stack wirings") {
  // The swap pair squares to two self-composable flows.
  Wiring f(std::vector<Flow>{parse_flow("f(X) <- g(X)"),
                             parse_flow("g(X) <- f(X)")});
  NilpotencyVerdict v = naive_nilpotency(f, 32);
  CHECK(v.kind == NilpotencyVerdict::kCycleFound);
  CHECK(v.index == 2);
  CHECK(!v.nilpotent());
}

TEST_CASE("naive nilpotency can end inconclusive") {
  // Not a stack wiring, so no cycle exit; powers never die.
  Wiring f(std::vector<Flow>{parse_flow("f(X) . c <- f(X) . c")});
  NilpotencyVerdict v = naive_nilpotency(f, 5);
  CHECK(v.kind == NilpotencyVerdict::kInconclusive);
  CHECK(v.index == 5);
}

TEST_CASE("stack wiring recognition") {
  CHECK(is_stack_wiring(Wiring({parse_flow("f(g(X)) <- h(X)"),
                                parse_flow("X <- f(X)")})));
  CHECK(!is_stack_wiring(Wiring({parse_flow("f(X) . c <- d . X")})));
  CHECK(!is_stack_wiring(Wiring({parse_flow("f(c) <- g(c)")})));
  CHECK(!is_stack_wiring(Wiring({parse_flow("p(X, X) <- q(X, X)")})));
}

TEST_CASE("balance compares variable depths across both sides") {
  CHECK(is_balanced(parse_flow("f(X) <- g(X)")).balanced);
  CHECK(is_balanced(parse_flow("X . c <- d . X")).balanced);
  BalanceReport r = is_balanced(parse_flow("f(f(X)) <- g(X)"));
  CHECK(!r.balanced);
  CHECK(r.depth_a != r.depth_b);
  // Unbalanced within one side only.
  CHECK(!is_balanced(parse_flow("c <- f(X) . X")).balanced);
}

TEST_CASE("parallel products agree with sequential ones") {
  std::mt19937 rng(7005);
  Wiring F = to_wiring(gen::random_stack_wiring(rng, 6, 3, 3));
  Wiring G = to_wiring(gen::random_stack_wiring(rng, 6, 3, 3));
  Wiring seq = wiring_product(F, G);
  set_jobs(4);
  Wiring par = wiring_product(F, G);
  set_jobs(1);
  CHECK(seq == par);
}
