#include <doctest.h>

#include "ssg/analysis.hpp"
#include "ssg/errors.hpp"
#include "ssg/model_io.hpp"
#include "ssg/models.hpp"
#include "support.hpp"

using namespace ssg;
using nlohmann::json;

namespace {

json odometer_doc(std::vector<int> n) { return emit_model(build_odometer(n)); }

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("emit and parse are inverse") {
  for (const auto& m : builtin_models()) {
    INFO(m.name);
    const auto sys = m.build();
    const std::string first = dump_canonical(emit_model(sys, {{"name", m.name}}));
    const auto parsed = parse_model(first);
    CHECK(dump_canonical(emit_model(parsed, {{"name", m.name}})) == first);
    CHECK(parsed.graph().num_edges() == sys.graph().num_edges());
    CHECK(parsed.graph().squares().size() == sys.graph().squares().size());
  }
}

TEST_CASE("round-tripped odometer acts identically") {
  auto sys = build_odometer({2, 3});
  auto back = parse_model(dump_canonical(emit_model(sys)));
  for (int w = -5; w <= 5; ++w) {
    std::vector<int> word(static_cast<std::size_t>(std::abs(w)), w < 0 ? -1 : 1);
    const auto a = sys.element_from_word(word);
    const auto b = back.element_from_word(word);
    for (const Path& mu : sys.graph().paths_of_degree({1, 2})) CHECK(sys.act_path(a, mu) == back.act_path(b, mu));
  }
}

TEST_CASE("parse errors carry locations") {
  SUBCASE("duplicate edge id") {
    json doc = odometer_doc({2, 3});
    doc["edges"][1]["id"] = 0;
    const auto msg = error_of([&] { parse_document(doc); });
    CHECK(msg.find("ParseError") == 0);
    CHECK(msg.find("duplicate edge id 0") != std::string::npos);
    CHECK(msg.find("/edges/1") != std::string::npos);
  }
  SUBCASE("malformed text") { CHECK_THROWS_AS(parse_document(std::string("{\"schema\":")), ParseError); }
  SUBCASE("wrong schema") {
    json doc = odometer_doc({2});
    doc["schema"] = "other/2";
    CHECK_THROWS_AS(parse_document(doc), ParseError);
  }
  SUBCASE("missing field") {
    json doc = odometer_doc({2});
    doc["edges"][0].erase("source");
    const auto msg = error_of([&] { parse_document(doc); });
    CHECK(msg.find("/edges/0") != std::string::npos);
    CHECK(msg.find("source") != std::string::npos);
  }
  SUBCASE("unknown edge in a square") {
    json doc = odometer_doc({2, 3});
    doc["squares"][0]["g"] = 7;
    CHECK(error_of([&] { parse_document(doc); }).find("/squares/0/g") != std::string::npos);
  }
  SUBCASE("generator misses an edge") {
    json doc = odometer_doc({2});
    doc["generators"][0]["edgeAction"].erase(0);
    CHECK_THROWS_AS(parse_document(doc), ParseError);
  }
}

TEST_CASE("validation errors") {
  SUBCASE("missing square") {
    json doc = odometer_doc({2, 3});
    doc["squares"].erase(2);
    const auto msg = error_of([&] { parse_model(doc.dump()); });
    CHECK(msg.find("ValidationError") == 0);
    CHECK(msg.find("bijection") != std::string::npos);
  }
  SUBCASE("color change") {
    json doc = odometer_doc({2, 3});
    doc["generators"][0]["edgeAction"][0]["imageColor"] = 2;
    const auto rep = validate_document(parse_document(doc));
    CHECK(rep.mentions("color preservation violated"));
    CHECK_THROWS_AS(parse_model(doc.dump()), ValidationError);
  }
  SUBCASE("vertex swap is not an automorphism") {
    const auto rep = validate_document(parse_document(emit_model(fixture_vertex_swap())));
    CHECK(rep.mentions("automorphism violated"));
  }
}

TEST_CASE("paths and elements serialize") {
  auto sys = build_odometer({2, 2});
  const KGraph& g = sys.graph();
  for (const Path& mu : g.paths_of_degree({1, 2})) CHECK(path_from_json(g, path_to_json(g, mu)) == mu);
  CHECK(path_from_json(g, path_to_json(g, g.vertex_path(0))) == g.vertex_path(0));

  ComplexElement a;
  a.add({ssg::test::path(g, {{1, 0}}), sys.generator(0), ssg::test::path(g, {{2, 1}})}, {0.5, -1.0});
  a.add({g.vertex_path(0), sys.identity(), g.vertex_path(0)}, {2.0, 0.0});
  const json j = element_to_json(sys, a);
  const ComplexElement b = element_from_json(sys, j);
  CHECK(b.terms() == a.terms());
  CHECK_THROWS_AS(element_from_json(sys, json::parse(R"([{"mu":{"range":0,"edges":[[1,5]]},"g":[],"nu":{"range":0,"edges":[]},"re":1}])")),
                  ParseError);
}

TEST_CASE("analysis reports") {
  AnalysisParams params;
  SUBCASE("aperiodic odometer") {
    auto sys = build_odometer({2, 3});
    const json r = run_analysis(sys, params);
    CHECK(r["schema"] == kReportSchema);
    CHECK(r["status"] == "ok");
    CHECK(r["hypotheses"]["pseudo_free"]["holds"] == true);
    CHECK(r["hypotheses"]["locally_faithful"]["holds"] == true);
    CHECK(r["hypotheses"]["finite_state"]["closure_size"] == 2);
    CHECK(r["hypotheses"]["degenerate_property"] == "true");
    CHECK(r["periodicity"]["rank"] == 0);
    CHECK(r["kms"]["verdict"] == "unique KMS state");
    CHECK(dump_canonical(run_analysis(sys, params)) == dump_canonical(r));
  }
  SUBCASE("periodic odometer") {
    auto sys = build_odometer({2, 2});
    const json r = run_analysis(sys, params);
    CHECK(r["periodicity"]["rank"] == 1);
    CHECK(r["periodicity"]["basis"] == json::parse("[[1,-1]]"));
    CHECK(r["kms"]["rank"] == 1);
  }
  SUBCASE("Katsura") {
    auto sys = build_katsura({{2}}, {{1}});
    CHECK(run_analysis(sys, params)["kms"]["verdict"] == "unique KMS state");
  }
  SUBCASE("witnesses are reported") {
    auto sys = fixture_not_pseudo_free();
    const json r = run_analysis(sys, params);
    CHECK(r["hypotheses"]["pseudo_free"]["holds"] == false);
    CHECK(r["hypotheses"]["pseudo_free"].contains("witness"));
  }
  SUBCASE("errors are embedded") {
    auto sys = ActionSystem::trivial(std::make_shared<const KGraph>(
        1, 2, std::vector<Edge>{{0, 0, 0, 0}, {0, 1, 1, 1}}, std::vector<Square>{}));
    const json r = run_analysis(sys, params);
    CHECK(r["hypotheses"]["strongly_connected"] == false);
    CHECK(r["perron"].contains("error"));
    CHECK(r["status"] == "error");
  }
}

TEST_CASE("KMS evaluation requests") {
  CHECK(parse_trace("haar").kind == TraceSpec::Kind::haar);
  CHECK(parse_trace("character:0.25,0.5").theta == std::vector<double>{0.25, 0.5});
  CHECK_THROWS_AS(parse_trace("character:x"), ParseError);
  CHECK_THROWS_AS(parse_trace("uniform"), ParseError);

  auto sys = build_odometer({2, 2});
  const json r = kms_evaluation(sys, {}, parse_trace("character:0.25"), std::nullopt);
  REQUIRE(r["evaluations"].size() == 2);
  CHECK(std::abs(r["evaluations"][0]["value"]["re"].get<double>() - 1) < 1e-12);
  CHECK(std::abs(r["evaluations"][1]["value"]["im"].get<double>() - 1) < 1e-12);
  CHECK_THROWS_AS(kms_evaluation(sys, {}, parse_trace("character:0.1,0.2"), std::nullopt), ParseError);
}
