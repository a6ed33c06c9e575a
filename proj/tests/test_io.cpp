#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "helpers.hpp"
#include "itlkit/decide.hpp"
#include "itlkit/io.hpp"
#include "json.hpp"

using namespace itlkit;
using th::space_of;
using th::ty;

TEST_SUITE("io") {
  TEST_CASE("model JSON round trip") {
    for (auto& m : enumerate_models(3, {"p", "q"})) {
      auto back = model_from_json(model_to_json(m));
      CHECK(back.n == m.n);
      CHECK(back.up == m.up);
      CHECK(back.step == m.step);
      CHECK(back.val == m.val);
    }
  }

  TEST_CASE("model JSON with string ids and implied closure") {
    auto m = model_from_json(R"({"worlds":["a","b","c"],"leq":[["a","b"],["b","c"]],
      "step":{"a":"a","b":"b","c":"c"},"val":{"p":["c"]}})");
    CHECK(m.n == 3);
    CHECK(m.leq(0, 2));
    CHECK(validate_model(m).empty());
    CHECK_THROWS_AS(model_from_json("{"), FormatError);
    CHECK_THROWS_AS(model_from_json(R"({"worlds":[0],"step":{}})"), FormatError);
    CHECK_THROWS_AS(model_from_json(R"({"worlds":[0],"step":{"0":1}})"), FormatError);
  }

  TEST_CASE("classical model JSON keeps arbitrary valuations") {
    auto c = classical_model_from_json(
        R"({"worlds":[0,1],"leq":[[0,1]],"step":{"0":0,"1":1},"val":{"p":[0]}})");
    CHECK(c.cval.at("p").test(0));
    CHECK_FALSE(c.cval.at("p").test(1));
  }

  TEST_CASE("quasimodel JSON round trip") {
    auto v = decide(parse("(~ X p & X ~ ~ p) -> (X q | ~ X q)"), Mode::Validity);
    REQUIRE(v.certificate);
    const auto& q = *v.certificate;
    auto text = quasimodel_to_json(q, render(v.formula));
    auto back = quasimodel_from_json(text);
    CHECK(back.n == q.n);
    CHECK(back.up == q.up);
    CHECK(back.label == q.label);
    CHECK(back.designated == q.designated);
    for (size_t w = 0; w < q.n; ++w) {
      auto a = q.succ[w], b = back.succ[w];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
    }
    CHECK(back.flags.full == q.flags.full);
    CHECK(back.flags.honest == q.flags.honest);
    CHECK(back.space->sig() == q.space->sig());
  }

  TEST_CASE("quasimodel JSON keeps a non-transitive order visible") {
    auto q = quasimodel_from_json(R"({"signature":["p"],
      "worlds":[{"id":0,"pos":[],"neg":["p"]},{"id":1,"pos":[],"neg":["p"]},{"id":2,"pos":["p"],"neg":[]}],
      "leq":[[0,1],[1,2]],"succ":[[0,0],[1,1],[2,2]]})");
    CHECK_FALSE(validate_order(q.n, q.up).empty());
    CHECK_THROWS_AS(quasimodel_from_json(R"({"signature":["p"],"worlds":[{"id":0,"pos":["q"],"neg":[]}]})"),
                    FormatError);
  }

  TEST_CASE("type JSON") {
    auto sp = space_of({"F p"});
    auto j = nlohmann::json::parse(type_to_json(ty(sp, {"p", "F p"}, {}), *sp));
    CHECK(j["pos"].size() == 2);
    CHECK(j["neg"].empty());
  }

  TEST_CASE("file helpers") {
    auto path = std::filesystem::temp_directory_path() / "itlkit_io_test.txt";
    write_file(path.string(), "hello\n");
    CHECK(read_file(path.string()) == "hello\n");
    std::filesystem::remove(path);
    CHECK_THROWS(read_file(path.string()));
  }
}
