#include <doctest.h>

#include <fstream>
#include <set>

#include "wer/config.hpp"

using namespace wer;
using nlohmann::json;

namespace {

json load_schema(const char* name) {
  std::ifstream in(std::string(WER_SCHEMA_DIR) + "/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

// Every key of `value` is declared in the schema, every declared key is
// emitted, and leaf values carry the declared type.
void check_against_schema(const json& schema, const json& value, const std::string& path) {
  INFO("at " << path);
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == value;
    CHECK(found);
    return;
  }
  const std::string type = schema.at("type");
  if (type == "object") {
    REQUIRE(value.is_object());
    std::set<std::string> declared;
    for (const auto& [k, v] : schema["properties"].items()) declared.insert(k);
    std::set<std::string> emitted;
    for (const auto& [k, v] : value.items()) emitted.insert(k);
    CHECK(declared == emitted);
    for (const auto& [k, v] : value.items())
      if (declared.count(k)) check_against_schema(schema["properties"][k], v, path + "." + k);
  } else if (type == "array") {
    REQUIRE(value.is_array());
    for (const auto& v : value) check_against_schema(schema["items"], v, path + "[]");
  } else if (type == "number") {
    CHECK(value.is_number());
  } else if (type == "integer") {
    CHECK(value.is_number_integer());
  } else if (type == "string") {
    CHECK(value.is_string());
  } else {
    FAIL("unexpected schema type " << type);
  }
  if (schema.contains("minimum") && value.is_number()) CHECK(value.get<double>() >= schema["minimum"].get<double>());
  if (schema.contains("exclusiveMinimum") && value.is_number())
    CHECK(value.get<double>() > schema["exclusiveMinimum"].get<double>());
}

}  // namespace

TEST_CASE("defaults serialize exactly to the schema") {
  const json schema = load_schema("run_config.schema.json");
  CHECK(schema["additionalProperties"] == false);
  check_against_schema(schema, to_json(RunConfig{}), "$");

  RunConfig c;
  c.pipeline.mode = SourceMode::synthetic_shots;
  c.concurrence.e_pi_radii_over_kappa = {0.1, 0.2};
  check_against_schema(schema, to_json(c), "$");
}

TEST_CASE("round trip through JSON") {
  RunConfig c;
  c.kappa = 4.0;
  c.seed = 12345678901234ULL;
  c.pipeline.mode = SourceMode::synthetic_noiseless;
  c.pipeline.shots = 2000;
  c.pipeline.mapping.t1 = 0.02;
  c.berry.radii_over_kappa = {0.2, 0.3};
  c.chern.grid.n_theta = 40;
  c.drive.nu_mhz = {500.0, 660.0};
  const RunConfig back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(config_hash(back) == config_hash(c));
}

TEST_CASE("strict parsing") {
  CHECK_THROWS_AS((void)parse_config(json{{"kapa", 5.0}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json{{"pipeline", {{"shot", 10}}}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json{{"kappa", "five"}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json{{"seed", -1}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json{{"berry", {{"steps", 1.5}}}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json{{"pipeline", {{"mode", "exact"}}}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json{{"kappa", -5.0}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json{{"workers", 0}}), ConfigError);
  CHECK_THROWS_AS((void)parse_config(json::array()), ConfigError);

  const RunConfig partial = parse_config(json{{"kappa", 4.0}, {"chern", {{"n_theta", 32}}}});
  CHECK(partial.kappa == 4.0);
  CHECK(partial.chern.grid.n_theta == 32);
  CHECK(partial.chern.grid.n_phi == ChernGrid{}.n_phi);
  CHECK(partial.berry.steps == BerryConfig{}.steps);
}

TEST_CASE("hash ignores where and how a run executes") {
  RunConfig a;
  RunConfig b = a;
  b.output_dir = "/tmp/elsewhere";
  b.workers = 8;
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  RunConfig c = a;
  c.chern.grid.meridian_points = 20;
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("mode names") {
  for (SourceMode m : {SourceMode::analytic, SourceMode::synthetic_noiseless, SourceMode::synthetic_shots})
    CHECK(parse_mode(to_string(m)) == m);
  CHECK_THROWS_AS((void)parse_mode("shots"), ConfigError);
}

TEST_CASE("derived settings") {
  RunConfig c;
  const auto radii = c.e_pi_radii();
  REQUIRE(radii.size() == 49);
  CHECK(radii.front() == doctest::Approx(0.01 * c.kappa));
  CHECK(radii.back() == doctest::Approx(0.49 * c.kappa));
  c.pipeline.mode = SourceMode::synthetic_shots;
  c.pipeline.shots = 500;
  c.workers = 3;
  const PipelineOptions o = c.pipeline_options();
  CHECK(o.mode == SourceMode::synthetic_shots);
  CHECK(o.shots == 500);
  CHECK(o.workers == 3);
  CHECK(o.kappa == c.kappa);
  CHECK(o.mapping.kappa == c.kappa);
}

TEST_CASE("loading from disk") {
  const auto path = std::filesystem::temp_directory_path() / "wer_test_config.json";
  {
    std::ofstream out(path);
    out << R"({"seed": 9, "pipeline": {"mode": "synthetic-shots", "seeds": 3}})";
  }
  const RunConfig c = load_config(path);
  CHECK(c.seed == 9);
  CHECK(c.pipeline.seeds == 3);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS((void)load_config(path), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS((void)load_config(path), ConfigError);
}
