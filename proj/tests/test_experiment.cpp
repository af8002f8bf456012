#include <doctest.h>

#include <json.hpp>

#include "core/common.hpp"
#include "core/experiment.hpp"

using namespace fr;

TEST_CASE("remez run carries the bound fields and is deterministic") {
  const std::string cfg =
      R"({"experiment":"remez","set":"cantor:1/3","depth":7,"polynomial":{"degree":4,"count":3},"q":"inf","r":"inf","budget":512})";
  const auto a = run_experiment(cfg), b = run_experiment(cfg);
  CHECK(a.report_json == b.report_json);
  CHECK(a.summary_csv == b.summary_csv);
  CHECK(a.exit_code == 0);
  const auto j = nlohmann::json::parse(a.report_json);
  REQUIRE(j["reports"].size() == 3);
  for (const auto& r : j["reports"]) {
    CHECK(r.contains("bound_bg"));
    CHECK(r.contains("bound_simple"));
    CHECK(r.contains("empirical_ratio"));
  }
  CHECK(a.summary_csv.rfind("experiment,n,k,s,lambda,q,r,bound_bg,bound_simple,empirical_ratio\n", 0) == 0);
  const auto c = run_experiment(cfg, 99);
  CHECK(c.report_json != a.report_json);
}

TEST_CASE("configuration errors") {
  auto code_of = [](const std::string& cfg) {
    try {
      run_experiment(cfg);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  CHECK(code_of("{") == ErrorCode::Config);
  CHECK(code_of(R"({"experiment":"nope"})") == ErrorCode::Config);
  CHECK(code_of(R"({"experiment":"remez","set":"cantr:1/3","polynomial":{"degree":2}})") == ErrorCode::Config);
  CHECK(code_of(R"({"experiment":"remez","set":"cantor:1/3","polynomial":{"degree":2},"extra":1})") == ErrorCode::Config);
  CHECK(code_of(R"({"experiment":"remez","set":"cantor:1/3","polynomial":{"degree":2},"q":3})") == ErrorCode::Config);
  CHECK(code_of(R"({"experiment":"campanato","set":"cantor:1/3","function":"sin","omega":"wat:1"})") == ErrorCode::Config);
  CHECK(code_of(R"({"experiment":"extension","set":"cube:1","function":"sin","omega":"const:1"})") == ErrorCode::Config);
}

TEST_CASE("each experiment kind emits its files") {
  const auto cov = run_experiment(R"({"experiment":"covering","mode":"cartan","degree":4,"grid":100})");
  CHECK(cov.exit_code == 0);
  CHECK(cov.files.size() == 1);
  const auto cam = run_experiment(R"({"experiment":"campanato","set":"cantor:1/3","depth":6,"function":"sin","k":2})");
  CHECK(cam.exit_code == 0);
  const auto ext = run_experiment(
      R"({"experiment":"extension","set":"cube:1","depth":6,"function":"square","k":2,"nodes":17,"budget":256})");
  CHECK(ext.exit_code == 0);
  bool has_field = false;
  for (const auto& [name, content] : ext.files) has_field |= name == "field.csv";
  CHECK(has_field);
  CHECK(ext.report_json.find("\"projection_norm\"") != std::string::npos);
  CHECK(ext.report_json.find("\"oscillation_split\"") != std::string::npos);
  // plot files start with a header comment naming both axes
  for (const auto& [name, content] : cam.files) CHECK(content.rfind("# ", 0) == 0);
}
