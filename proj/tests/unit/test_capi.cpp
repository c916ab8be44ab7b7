#include <string>

#include "doctest.h"
#include "json.hpp"
#include "slopekit/slopekit.h"

namespace {

struct Run {
  sk_status status = SK_OK;
  std::string json;
  bool passed = false;
  std::string error;
};

Run run_json(const std::string& config) {
  Run r;
  sk_config* c = nullptr;
  r.status = sk_config_from_json(config.c_str(), &c);
  if (r.status == SK_OK) {
    sk_result* res = nullptr;
    r.status = sk_run(c, &res);
    if (r.status == SK_OK) {
      r.json = sk_result_json(res);
      r.passed = sk_result_passed(res) != 0;
    }
    sk_result_free(res);
  }
  if (r.status != SK_OK) r.error = sk_last_error();
  sk_config_free(c);
  return r;
}

// Every leaf must be a string, a bool or null.
bool no_raw_numbers(const nlohmann::json& j) {
  if (j.is_number()) return false;
  if (j.is_structured())
    for (const auto& v : j)
      if (!no_raw_numbers(v)) return false;
  return true;
}

}  // namespace

TEST_CASE("commands are listed in a fixed order") {
  REQUIRE(sk_command_count() == 12);
  CHECK(std::string(sk_command_name(0)) == "basis");
  CHECK(std::string(sk_command_name(11)) == "acceptance");
  CHECK(sk_command_name(12) == nullptr);
}

TEST_CASE("slopes at (4,5) from the setter interface") {
  sk_config* c = nullptr;
  REQUIRE(sk_config_new("slopes", &c) == SK_OK);
  CHECK(sk_config_set_int(c, "p", 5) == SK_OK);
  CHECK(sk_config_set_int(c, "k", 4) == SK_OK);
  CHECK(sk_config_set_int(c, "I", 4) == SK_OK);
  CHECK(sk_config_set_int(c, "m", 8) == SK_OK);
  CHECK(sk_config_set_int(c, "colour", 1) == SK_INVALID_ARGUMENT);
  sk_result* r = nullptr;
  REQUIRE(sk_run(c, &r) == SK_OK);
  const auto j = nlohmann::json::parse(sk_result_json(r));
  CHECK(sk_result_passed(r) == 1);
  REQUIRE(j["slopes"].size() >= 2);
  CHECK(j["slopes"][0]["slope"] == "0");
  CHECK(j["slopes"][0]["mult"] == "1");
  CHECK(j["slopes"][1]["slope"] == "1");
  sk_result_free(r);
  sk_config_free(c);
}

TEST_CASE("identical configs give byte-identical output") {
  for (const char* cfg : {R"({"command":"slopes","p":5,"k":12,"m":10})",
                          R"({"command":"family-fit","p":5,"weights":[4,8,12,16],"m":3})",
                          R"({"command":"disc","p":5,"weights":[4,8,12],"m":6})",
                          R"({"command":"duality","p":5,"k":2,"m":10,"seed":7})"}) {
    const auto a = run_json(cfg), b = run_json(cfg);
    REQUIRE(a.status == SK_OK);
    CHECK(a.json == b.json);
    CHECK(no_raw_numbers(nlohmann::json::parse(a.json)));
  }
}

TEST_CASE("ordinary rank of weight 12 at p = 5") {
  const auto r = run_json(R"({"command":"ordinary-rank","p":5,"k":12})");
  REQUIRE(r.status == SK_OK);
  CHECK(nlohmann::json::parse(r.json)["rank"] == "1");
}

TEST_CASE("configuration errors name the precondition") {
  auto r = run_json(R"({"command":"slopes","p":5,"k":4,"I":4,"Q":5})");
  CHECK(r.status == SK_INVALID_ARGUMENT);
  CHECK(r.error.find("p * D = 10") != std::string::npos);

  r = run_json(R"({"command":"slopes","p":5,"k":4,"depth":4})");
  CHECK(r.status == SK_INVALID_ARGUMENT);
  CHECK(r.error.find("unknown config field 'depth'") != std::string::npos);

  r = run_json(R"({"command":"slopes","p":9,"k":4})");
  CHECK(r.status == SK_INVALID_ARGUMENT);

  r = run_json(R"({"command":"classicality","p":5,"k":4,"m":2})");
  CHECK(r.status == SK_INVALID_ARGUMENT);
  CHECK(r.error.find("m >= 3") != std::string::npos);

  r = run_json(R"({"command":"family-fit","p":5,"weights":[4,6]})");
  CHECK(r.status == SK_INVALID_ARGUMENT);
  CHECK(r.error.find("component") != std::string::npos);

  r = run_json(R"({"command":"frobnicate"})");
  CHECK(r.status == SK_INVALID_ARGUMENT);

  r = run_json("[1,2]");
  CHECK(r.status == SK_INVALID_ARGUMENT);
}

TEST_CASE("validation fills defaults without running") {
  sk_config* c = nullptr;
  REQUIRE(sk_config_new("charseries", &c) == SK_OK);
  sk_config_set_int(c, "p", 7);
  sk_config_set_int(c, "k", 6);
  CHECK(sk_config_validate(c) == SK_OK);
  sk_config_free(c);
  CHECK(sk_config_validate(nullptr) == SK_INVALID_ARGUMENT);
}

TEST_CASE("a weight-0 charseries has a single nonconstant coefficient at I = 2") {
  const auto r = run_json(R"({"command":"charseries","p":5,"k":0,"I":2,"m":6})");
  REQUIRE(r.status == SK_OK);
  const auto j = nlohmann::json::parse(r.json);
  CHECK(j["D"] == "1");
  CHECK(j["charseries"][0]["value"] == "1");
}
