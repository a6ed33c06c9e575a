#include <algorithm>
#include <functional>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace itlkit;

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  static const char* vars[] = {"p", "q", "r"};
  if (depth == 0 || rng() % 5 == 0) {
    if (rng() % 7 == 0) return Formula::bot();
    return Formula::var(vars[rng() % 3]);
  }
  Formula a = random_formula(rng, depth - 1);
  switch (rng() % 6) {
    case 0: return Formula::conj(a, random_formula(rng, depth - 1));
    case 1: return Formula::disj(a, random_formula(rng, depth - 1));
    case 2: return Formula::imp(a, random_formula(rng, depth - 1));
    case 3: return Formula::next(a);
    case 4: return Formula::ev(a);
    default: return Formula::all(a);
  }
}

std::vector<std::string> names(const Signature& s) {
  std::vector<std::string> out;
  for (auto f : s.formulas()) out.push_back(render(f));
  return out;
}

}  // namespace

TEST_SUITE("formula") {
  TEST_CASE("parse examples") {
    Formula p = Formula::var("p");
    CHECK(parse("X p -> F p") == Formula::imp(Formula::next(p), Formula::ev(p)));
    CHECK(parse("~ X bot") == Formula::imp(Formula::next(Formula::bot()), Formula::bot()));
    Formula q = Formula::var("q");
    Formula np = Formula::next(p), nq = Formula::next(q);
    Formula ex = Formula::imp(
        Formula::conj(Formula::neg(np), Formula::next(Formula::neg(Formula::neg(p)))),
        Formula::disj(nq, Formula::neg(nq)));
    CHECK(parse("(~ X p & X ~ ~ p) -> (X q | ~ X q)") == ex);
  }

  TEST_CASE("derived connectives desugar") {
    Formula p = Formula::var("p"), q = Formula::var("q");
    CHECK(parse("p <-> q") == Formula::iff(p, q));
    CHECK(parse("E p") == Formula::exists(p));
    CHECK(parse("∘p ∧ ◊q → ∀p") == parse("X p & F q -> A p"));
    CHECK(parse("¬⊥") == Formula::top());
  }

  TEST_CASE("implication is right associative and binds loosest") {
    CHECK(parse("p -> q -> r") == parse("p -> (q -> r)"));
    CHECK(parse("p | q & r") == parse("p | (q & r)"));
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse("G p"), ParseError);
    try {
      parse("p -> G q");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("henceforth") != std::string::npos);
      CHECK(e.pos == 5);
    }
    CHECK_THROWS_AS(parse("p &"), ParseError);
    CHECK_THROWS_AS(parse("(p"), ParseError);
    CHECK_THROWS_AS(parse("p q"), ParseError);
  }

  TEST_CASE("render examples") {
    Formula p = Formula::var("p"), q = Formula::var("q");
    CHECK(render(Formula::imp(p, p)) == "p -> p");
    CHECK(render(Formula::ev(Formula::conj(p, q))) == "F (p & q)");
    CHECK(render(Formula::next(Formula::next(Formula::bot()))) == "X X bot");
  }

  TEST_CASE("render round trip on random formulas") {
    std::mt19937 rng(11);
    for (int i = 0; i < 2000; ++i) {
      Formula f = random_formula(rng, 8);
      CHECK(parse(render(f)) == f);
    }
  }

  TEST_CASE("closure examples") {
    CHECK(names(closure(parse("F p"))) == std::vector<std::string>{"p", "F p"});
    auto s = closure(parse("X p -> q"));
    CHECK(s.size() == 4);
    for (auto n : {"X p -> q", "X p", "p", "q"}) CHECK(s.contains(parse(n)));
    CHECK(names(closure(parse("A p"))) == std::vector<std::string>{"p", "A p"});
  }

  TEST_CASE("closure is subformula closed, contains f and is canonical") {
    std::mt19937 rng(5);
    for (int i = 0; i < 300; ++i) {
      Formula f = random_formula(rng, 6);
      Signature s = closure(f);
      CHECK(s.contains(f));
      CHECK(s.size() <= f.size());
      for (size_t k = 0; k < s.size(); ++k) {
        if (s[k].arity() >= 1) CHECK(s.left(k) >= 0);
        if (s[k].arity() == 2) CHECK(s.right(k) >= 0);
        if (k > 0) CHECK(compare(s[k - 1], s[k]) < 0);
      }
      // same set, different roots: same order
      std::vector<Formula> all = s.formulas();
      std::reverse(all.begin(), all.end());
      CHECK(Signature(all) == s);
    }
  }

  TEST_CASE("Goedel-Tarski translation") {
    using C = ClassicalFormula;
    C p = C::var("p"), q = C::var("q");
    CHECK(gt_translate(parse("p")) == C::box(p));
    CHECK(gt_translate(parse("p -> q")) == C::box(C::imp(C::box(p), C::box(q))));
    CHECK(gt_translate(parse("F p")) == C::ev(C::box(p)));
    CHECK(gt_translate(parse("X p")) == C::next(C::box(p)));
    CHECK(gt_translate(parse("A p")) == C::all(C::box(p)));
    CHECK(gt_translate(parse("bot")) == C::bot());
  }

  TEST_CASE("Goedel-Tarski translation is size linear") {
    std::mt19937 rng(3);
    for (int i = 0; i < 500; ++i) {
      Formula f = random_formula(rng, 6);
      size_t imps = 0, vars = 0;
      std::function<void(Formula)> count = [&](Formula g) {
        if (g.op() == Op::Imp) ++imps;
        if (g.op() == Op::Var) ++vars;
        if (g.arity() >= 1) count(g.lhs());
        if (g.arity() == 2) count(g.rhs());
      };
      count(f);
      CHECK(surface_size(gt_translate(f)) <= 2 * f.size() + imps + vars + 1);
    }
  }

  TEST_CASE("signature cap") {
    size_t old = max_signature();
    set_max_signature(3);
    CHECK(max_signature() == 3);
    set_max_signature(old);
  }
}
