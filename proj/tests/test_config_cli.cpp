#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cascade/config.hpp"
#include "cascade/report.hpp"
#include "support/json_schema.hpp"

using namespace cascade;
namespace fs = std::filesystem;
using Json = nlohmann::json;

#ifndef CASCADE_CLI_PATH
#define CASCADE_CLI_PATH ""
#endif
#ifndef CASCADE_SOURCE_DIR
#define CASCADE_SOURCE_DIR "."
#endif

namespace {

const std::string kMinimal = R"({
  "model": {"family": "badic", "base": 2,
            "weight": {"type": "finite_atomic",
                       "atoms": [{"value": 0.5, "prob": 0.5},
                                 {"value": 1.5, "prob": 0.5}]}}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path source_dir() { return fs::path(CASCADE_SOURCE_DIR); }

fs::path fresh_tmp(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("cascade_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CASCADE_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("minimal config picks up the documented defaults") {
  const RunConfig c = parse_run_config(kMinimal);
  CHECK(c.seed == 1);
  CHECK(c.n_min == 1);
  CHECK(c.n_max == 8);
  CHECK(c.replicas == 400);
  CHECK(c.generations == std::vector<int>{8});
  CHECK(c.p == 2.0);
  CHECK(c.p_grid.size() == 32);
  CHECK(c.p_grid.front() == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(c.p_grid.back() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c.out_dir == "out");
  CHECK(c.measure.is_lebesgue());
  CHECK(c.config_hash.size() == 16);
}

TEST_CASE("unknown keys are rejected with a path") {
  const std::string bad = R"({
    "model": {"family": "badic", "base": 2, "weight": {"type": "deterministic", "value": 1.0},
              "frobnicate": 3}
  })";
  try {
    parse_run_config(bad);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("frobnicate") != std::string::npos);
    CHECK(msg.find("/model") != std::string::npos);
  }
}

TEST_CASE("range violations are rejected") {
  const auto patch = [](const std::string& key, const std::string& value) {
    std::string text = kMinimal;
    text.insert(text.rfind('}'), ", \"" + key + "\": " + value);
    return text;
  };
  CHECK_THROWS_AS(parse_run_config(patch("n_max", "31")), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(patch("n_max", "0")), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(patch("m_sub", "0")), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(patch("t_list", "[1.0]")), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(patch("replicas", "0")), std::invalid_argument);
  CHECK_THROWS_AS(parse_run_config(patch("seed", "-3")), std::invalid_argument);
  CHECK_NOTHROW(parse_run_config(patch("n_max", "12")));
}

TEST_CASE("effective config text round-trips, hash included") {
  for (const auto& entry : fs::directory_iterator(source_dir() / "configs")) {
    const RunConfig a = load_run_config(entry.path());
    const RunConfig b = parse_run_config(effective_config_text(a));
    CHECK(a.canonical_text == b.canonical_text);
    CHECK(a.config_hash == b.config_hash);
  }
}

TEST_CASE("the hash ignores execution details but tracks semantics") {
  const RunConfig base = parse_run_config(kMinimal);

  std::string with_out = kMinimal;
  with_out.insert(with_out.rfind('}'), ", \"out_dir\": \"elsewhere\", \"threads\": 7");
  const RunConfig moved = parse_run_config(with_out);
  CHECK(moved.out_dir == "elsewhere");
  CHECK(moved.config_hash == base.config_hash);

  std::string with_seed = kMinimal;
  with_seed.insert(with_seed.rfind('}'), ", \"seed\": 2");
  CHECK(parse_run_config(with_seed).config_hash != base.config_hash);
}

TEST_CASE("fnv1a64 matches its published test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(hash_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");
}

TEST_CASE("shipped configs validate against the shipped schema") {
  const Json schema = Json::parse(slurp(source_dir() / "schemas" / "run_config.schema.json"));
  int checked = 0;
  for (const auto& entry : fs::directory_iterator(source_dir() / "configs")) {
    const Json doc = Json::parse(slurp(entry.path()));
    const auto err = cascade::testing::validate_document(doc, schema);
    INFO(entry.path().string(), ": ", err.value_or(""));
    CHECK_FALSE(err.has_value());
    ++checked;
  }
  CHECK(checked >= 8);

  // the validator itself rejects shape violations
  Json broken = Json::parse(kMinimal);
  broken["model"]["family"] = "unknown_family";
  CHECK(cascade::testing::validate_document(broken, schema).has_value());
  broken = Json::parse(kMinimal);
  broken["extra"] = 1;
  CHECK(cascade::testing::validate_document(broken, schema).has_value());
}

TEST_CASE("csv names and float formatting are stable") {
  CHECK(path_csv_name(7) == "path_gen07.csv");
  CHECK(path_csv_name(14) == "path_gen14.csv");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  // shortest round-trip representation
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(0.6780719051126377)) == 0.6780719051126377);
}

TEST_CASE("cli: phi on a shipped config emits schema-valid reports") {
  const fs::path out = fresh_tmp("phi");
  const fs::path config = source_dir() / "configs" / "canonical_real.json";
  REQUIRE(run_cli("phi --config \"" + config.string() + "\" --out \"" + out.string() + "\"") == 0);

  const Json report = Json::parse(slurp(out / "phi_report.json"));
  const Json schema = Json::parse(slurp(source_dir() / "schemas" / "phi_report.schema.json"));
  const auto err = cascade::testing::validate_document(report, schema);
  INFO(err.value_or(""));
  CHECK_FALSE(err.has_value());
  CHECK(report.at("verdict") == "converges_uniformly");

  const Json manifest = Json::parse(slurp(out / "run_manifest.json"));
  const Json mschema = Json::parse(slurp(source_dir() / "schemas" / "run_manifest.schema.json"));
  const auto merr = cascade::testing::validate_document(manifest, mschema);
  INFO(merr.value_or(""));
  CHECK_FALSE(merr.has_value());
  CHECK(manifest.at("config_hash") == report.at("config_hash"));
  fs::remove_all(out);
}

TEST_CASE("cli: simulate reruns are byte-identical and seed overrides rehash") {
  const fs::path out_a = fresh_tmp("sim_a");
  const fs::path out_b = fresh_tmp("sim_b");
  const fs::path config = source_dir() / "configs" / "identity.json";
  const std::string base_args = "simulate --config \"" + config.string() + "\"";
  REQUIRE(run_cli(base_args + " --out \"" + out_a.string() + "\"") == 0);
  REQUIRE(run_cli(base_args + " --out \"" + out_b.string() + "\"") == 0);

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(out_a)) {
    const std::string name = entry.path().filename().string();
    CHECK(slurp(out_a / name) == slurp(out_b / name));
    ++compared;
  }
  CHECK(compared >= 4);  // three generations plus the manifest

  // path CSV shape: comment, header, then t,re,im,n rows starting at t=0
  std::istringstream csv(slurp(out_a / "path_gen04.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line.rfind("# config_hash=", 0) == 0);
  std::getline(csv, line);
  CHECK(line == "t,re_F,im_F,n");
  std::getline(csv, line);
  CHECK(line.rfind("0,", 0) == 0);

  // overriding the seed must change the recorded hash
  const fs::path out_c = fresh_tmp("sim_c");
  REQUIRE(run_cli(base_args + " --seed 99 --out \"" + out_c.string() + "\"") == 0);
  const Json m_a = Json::parse(slurp(out_a / "run_manifest.json"));
  const Json m_c = Json::parse(slurp(out_c / "run_manifest.json"));
  CHECK(m_a.at("seed") == 7);
  CHECK(m_c.at("seed") == 99);
  CHECK(m_a.at("config_hash") != m_c.at("config_hash"));
  fs::remove_all(out_a);
  fs::remove_all(out_b);
  fs::remove_all(out_c);
}

TEST_CASE("cli: spectrum emits histograms that match the declared files") {
  const fs::path out = fresh_tmp("spec");
  const fs::path config = source_dir() / "configs" / "identity.json";
  REQUIRE(run_cli("spectrum --config \"" + config.string() + "\" --out \"" + out.string() +
                  "\"") == 0);
  const Json report = Json::parse(slurp(out / "spectrum_report.json"));
  const Json schema =
      Json::parse(slurp(source_dir() / "schemas" / "spectrum_report.schema.json"));
  const auto err = cascade::testing::validate_document(report, schema);
  INFO(err.value_or(""));
  CHECK_FALSE(err.has_value());
  for (const auto& h : report.at("histograms")) {
    if (h.at("file").is_null()) continue;
    const fs::path f = out / h.at("file").get<std::string>();
    REQUIRE(fs::exists(f));
    std::istringstream csv(slurp(f));
    std::string line;
    std::getline(csv, line);  // comment
    std::getline(csv, line);
    CHECK(line == "n,h_bin,count");
  }
  fs::remove_all(out);
}

TEST_CASE("cli: verify exits zero on a sound config and rejects bad input") {
  const fs::path out = fresh_tmp("verify");
  const fs::path config = source_dir() / "configs" / "identity.json";
  CHECK(run_cli("verify --config \"" + config.string() + "\" --out \"" + out.string() +
                "\"") == 0);
  const Json report = Json::parse(slurp(out / "verify_report.json"));
  const Json schema =
      Json::parse(slurp(source_dir() / "schemas" / "verify_report.schema.json"));
  const auto err = cascade::testing::validate_document(report, schema);
  INFO(err.value_or(""));
  CHECK_FALSE(err.has_value());
  CHECK(report.at("all_pass") == true);

  // malformed config: parse failure is exit code 2
  const fs::path bad = out / "bad.json";
  std::ofstream(bad) << "{\"model\": {\"family\": \"badic\"}}";
  CHECK(run_cli("verify --config \"" + bad.string() + "\" --out \"" + out.string() + "\"") ==
        2);
  // missing file is a CLI11 usage error
  CHECK(run_cli("verify --config /nonexistent.json") != 0);
  fs::remove_all(out);
}

TEST_CASE("cli: thread count does not perturb any reported number") {
  const fs::path out_1 = fresh_tmp("thr1");
  const fs::path out_2 = fresh_tmp("thr2");
  const fs::path config = source_dir() / "configs" / "canonical_real.json";
  REQUIRE(run_cli("phi --config \"" + config.string() + "\" --threads 1 --out \"" +
                  out_1.string() + "\"") == 0);
  REQUIRE(run_cli("phi --config \"" + config.string() + "\" --threads 3 --out \"" +
                  out_2.string() + "\"") == 0);
  Json a = Json::parse(slurp(out_1 / "phi_report.json"));
  Json b = Json::parse(slurp(out_2 / "phi_report.json"));
  CHECK(a == b);
  fs::remove_all(out_1);
  fs::remove_all(out_2);
}
