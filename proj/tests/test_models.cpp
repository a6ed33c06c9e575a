#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "itlkit/models.hpp"

using namespace itlkit;

namespace {

PosetModel chain2(std::vector<size_t> step) { return PosetModel::from_pairs(2, {{0, 1}}, step); }

// Independent oracle count: labelled structures canonicalized by brute force
// over all permutations.
size_t brute_model_count(size_t n, size_t nvars) {
  std::set<std::vector<int>> seen;
  std::vector<std::pair<size_t, size_t>> offdiag;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (a != b) offdiag.emplace_back(a, b);
  size_t steps = 1;
  for (size_t i = 0; i < n; ++i) steps *= n;
  for (uint32_t rel = 0; rel < (1u << offdiag.size()); ++rel) {
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; ++i) le[i][i] = true;
    for (size_t k = 0; k < offdiag.size(); ++k)
      if (rel >> k & 1) le[offdiag[k].first][offdiag[k].second] = true;
    bool po = true;
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b) {
        if (a != b && le[a][b] && le[b][a]) po = false;
        for (size_t c = 0; c < n; ++c)
          if (le[a][b] && le[b][c] && !le[a][c]) po = false;
      }
    if (!po) continue;
    for (size_t sc = 0; sc < steps; ++sc) {
      std::vector<size_t> st(n);
      for (size_t i = 0, c = sc; i < n; ++i, c /= n) st[i] = c % n;
      bool mono = true;
      for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
          if (le[a][b] && !le[st[a]][st[b]]) mono = false;
      if (!mono) continue;
      std::vector<uint32_t> ups;
      for (uint32_t s = 0; s < (1u << n); ++s) {
        bool ok = true;
        for (size_t a = 0; a < n; ++a)
          for (size_t b = 0; b < n; ++b)
            if ((s >> a & 1) && le[a][b] && !(s >> b & 1)) ok = false;
        if (ok) ups.push_back(s);
      }
      size_t vals = 1;
      for (size_t v = 0; v < nvars; ++v) vals *= ups.size();
      for (size_t vc = 0; vc < vals; ++vc) {
        std::vector<uint32_t> val;
        for (size_t v = 0, c = vc; v < nvars; ++v, c /= ups.size()) val.push_back(ups[c % ups.size()]);
        std::vector<size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::vector<int> best;
        do {
          // relabel: new id of old world a is perm[a]
          std::vector<int> enc(n * n + n + nvars * n, 0);
          for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) enc[perm[a] * n + perm[b]] = le[a][b];
          for (size_t a = 0; a < n; ++a) enc[n * n + perm[a]] = int(perm[st[a]]);
          for (size_t v = 0; v < nvars; ++v)
            for (size_t a = 0; a < n; ++a) enc[n * n + n + v * n + perm[a]] = val[v] >> a & 1;
          if (best.empty() || enc < best) best = enc;
        } while (std::next_permutation(perm.begin(), perm.end()));
        seen.insert(best);
      }
    }
  }
  return seen.size();
}

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("validate_model examples") {
    auto one = PosetModel::from_pairs(1, {}, {0});
    one.val["p"] = one.set_of({0});
    CHECK(validate_model(one).empty());

    auto bad = chain2({1, 0});
    auto vs = validate_model(bad);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].find("monotone") != std::string::npos);

    auto m = chain2({0, 1});
    m.val["p"] = m.set_of({0});
    vs = validate_model(m);
    REQUIRE(vs.size() == 1);
    CHECK(vs[0].find("up-closed") != std::string::npos);
  }

  TEST_CASE("evaluate examples") {
    auto m = chain2({0, 1});
    m.val["p"] = m.set_of({1});
    CHECK(evaluate(m, parse("~ p")).none());
    CHECK(evaluate(m, parse("~ ~ p")).all());
    CHECK(evaluate(m, parse("p | ~ p")) == m.set_of({1}));

    auto a = PosetModel::from_pairs(2, {}, {1, 0});
    a.val["p"] = a.set_of({1});
    CHECK(evaluate(a, parse("F p")).all());
    CHECK(evaluate(a, parse("X p")) == a.set_of({0}));
    CHECK(evaluate(a, parse("A p")).none());
    CHECK(evaluate(a, parse("A (p | X p)")).all());

    for (auto& x : enumerate_models(3, {"p"})) {
      CHECK(evaluate(x, parse("bot")).none());
      CHECK(evaluate(x, parse("p -> p")).all());
    }
  }

  TEST_CASE("holds_everywhere examples") {
    auto models = enumerate_models(3, {"p", "q"});
    for (auto& m : models) {
      CHECK(holds_everywhere(m, parse("~ X bot")));
      CHECK(holds_everywhere(m, parse("p | X F p -> F p")));
    }
    Formula ex = parse("(~ X p & X ~ ~ p) -> (X q | ~ X q)");
    auto cm = find_countermodel(ex, 4);
    REQUIRE(cm.has_value());
    CHECK(validate_model(*cm).empty());
    CHECK_FALSE(holds_everywhere(*cm, ex));
  }

  TEST_CASE("evaluation results are up-closed") {
    std::mt19937 rng(1);
    auto models = enumerate_models(3, {"p", "q"});
    std::vector<std::string> fs = {"p -> q", "~ ~ p -> p", "X (p -> q)", "F (p & ~ q)",
                                   "A (p | q) -> X q", "~ A ~ p", "F X ~ p | q"};
    for (auto& m : models)
      for (auto& f : fs) CHECK(up_closed(m.up, evaluate(m, parse(f))));
  }

  TEST_CASE("eventuality fixpoint equals the naive union") {
    for (auto& m : enumerate_models(4, {"p"})) {
      Bits want(m.n);
      Bits cur = evaluate(m, parse("p"));
      for (size_t k = 0; k <= m.n; ++k) {
        want |= cur;
        cur = preimage(m.step, cur);
      }
      CHECK(evaluate(m, parse("F p")) == want);
    }
  }

  TEST_CASE("batch evaluation matches single evaluation") {
    std::vector<Formula> fs;
    for (auto t : {"p -> q", "~ ~ p -> p", "X (p -> q)", "F (p & ~ q)", "A (p | q) -> X q",
                   "~ A ~ p", "F X ~ p | q", "p", "bot", "p -> q"})
      fs.push_back(parse(t));
    FormulaBatch batch(fs);
    CHECK(batch.size() == fs.size());
    for (auto& m : enumerate_models(3, {"p", "q"})) {
      auto got = batch.eval(m);
      size_t first = fs.size();
      for (size_t i = 0; i < fs.size(); ++i) {
        CHECK(got[i] == evaluate(m, fs[i]));
        if (first == fs.size() && !got[i].all()) first = i;
      }
      CHECK(batch.first_failure(m) == first);
    }
  }

  TEST_CASE("classical evaluation examples") {
    ClassicalModel c;
    c.n = 2;
    c.up = chain2({0, 1}).up;
    c.step = {0, 1};
    c.cval["p"] = Bits(2);
    c.cval["p"].set(1);
    using C = ClassicalFormula;
    Bits v(2);
    v.set(1);
    CHECK(classical_evaluate(c, C::box(C::var("p"))) == v);
    CHECK(classical_evaluate(c, C::hence(C::var("p"))) == v);
    c.cval["p"] = Bits(2);
    c.cval["p"].set(0);
    CHECK(classical_evaluate(c, C::box(C::var("p"))).none());
    CHECK(classical_evaluate(c, C::var("p")) == c.cval["p"]);
  }

  TEST_CASE("enumerate_models counts") {
    size_t one = 0;
    for (auto& m : enumerate_models(1, {"p"})) one += m.n == 1;
    CHECK(one == 2);
    // up to isomorphism: the antichain's four step maps fall into three classes
    size_t two = 0;
    for (auto& m : enumerate_models(2, {})) two += m.n == 2;
    CHECK(two == 6);
    for (size_t n = 1; n <= 3; ++n)
      for (size_t nv = 0; nv <= 1; ++nv) {
        std::vector<std::string> vars;
        if (nv) vars.push_back("p");
        size_t got = 0;
        for (auto& m : enumerate_models(n, vars)) {
          CHECK(validate_model(m).empty());
          got += m.n == n;
        }
        CHECK(got == brute_model_count(n, nv));
      }
    CHECK_THROWS(enumerate_models(kMaxOracleWorlds + 1, {}));
  }

  TEST_CASE("persistent filter keeps exactly the open-step models") {
    auto all = enumerate_models(3, {});
    auto pers = enumerate_models(3, {}, true);
    size_t open = 0;
    for (auto& m : all) open += is_persistent(m);
    CHECK(open == pers.size());
    for (auto& m : pers) CHECK(is_persistent(m));
    // collapsing a 2-chain onto its bottom is not open
    CHECK_FALSE(is_persistent(chain2({0, 0})));
    CHECK(is_persistent(chain2({1, 1})));
    CHECK(is_persistent(chain2({0, 1})));
  }

  TEST_CASE("variables") {
    CHECK(variables(parse("X p -> F (q | p)")) == std::vector<std::string>{"p", "q"});
  }
}
