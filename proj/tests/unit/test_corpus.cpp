#include <gtest/gtest.h>

#include "json.hpp"

#include "spillscope/corpus.hpp"
#include "spillscope/error.hpp"

using namespace spillscope;

namespace {

const std::filesystem::path kData = SPILLSCOPE_DATA_DIR;

std::string fixture_with(const std::string& rows) {
  return std::string(kFixtureHeader) + "\n" + rows;
}

}  // namespace

TEST(Fixture, ShippedRows) {
  const auto recs = load_fixture(kData / "mibench_fixture.csv");
  ASSERT_EQ(recs.size(), 17u);
  const auto qsort = std::find_if(recs.begin(), recs.end(), [](auto& r) { return r.name == "qsort"; });
  ASSERT_NE(qsort, recs.end());
  EXPECT_EQ(qsort->domain, "automotive");
  EXPECT_DOUBLE_EQ(qsort->spilling_rate, 0.205);
  EXPECT_EQ(qsort->additional_registers, 4);
  int excluded = 0;
  for (const auto& r : recs) {
    if (r.exclude_addreg) {
      ++excluded;
      EXPECT_EQ(r.name, "prg2lout");
      EXPECT_EQ(r.additional_registers, 40);
    }
  }
  EXPECT_EQ(excluded, 1);
}

TEST(Fixture, SchemaErrors) {
  EXPECT_THROW(parse_fixture(fixture_with("a,d,-0.1,3,false\n")), SchemaError);
  EXPECT_THROW(parse_fixture(fixture_with("a,d,0.1,-3,false\n")), SchemaError);
  EXPECT_THROW(parse_fixture(fixture_with("a,d,abc,3,false\n")), SchemaError);
  EXPECT_THROW(parse_fixture(fixture_with("a,d,0.1,3,maybe\n")), SchemaError);
  EXPECT_THROW(parse_fixture(fixture_with("a,d,0.1,3\n")), SchemaError);
  EXPECT_THROW(parse_fixture("name,domain\n"), SchemaError);
  EXPECT_THROW(parse_fixture(fixture_with("a,d,0.1,3,false\na,d,0.2,3,false\n")),
               DuplicateApplication);
  EXPECT_THROW(load_fixture(kData / "nope.csv"), IoError);
}

TEST(Manifest, ParsesAllFields) {
  const auto m = parse_manifest(R"({
    "applications": [{"name": "qsort", "domain": "automotive", "files": ["a.s", "b.s"],
                      "exclude_addreg": true}],
    "parser": {"special_regs": "r9-r10", "aliases": {"s1": "sl"}, "loose_functions": true},
    "metric": "end"})",
                                "/base");
  ASSERT_EQ(m.applications.size(), 1u);
  EXPECT_EQ(m.applications[0].files[1], std::filesystem::path("/base/b.s"));
  EXPECT_TRUE(m.applications[0].exclude_addreg);
  EXPECT_EQ(m.parser.special_regs.size(), 2u);
  EXPECT_TRUE(m.parser.loose_functions);
  EXPECT_EQ(m.parser.names.resolve("s1").index(), 10);
  EXPECT_EQ(m.metric, AddRegMetric::End);
}

TEST(Manifest, Errors) {
  EXPECT_THROW(parse_manifest(R"({"applications": []})"), SchemaError);
  EXPECT_THROW(parse_manifest(R"({"apps": []})"), SchemaError);
  EXPECT_THROW(parse_manifest("not json"), SchemaError);
  EXPECT_THROW(parse_manifest(R"({"applications": [{"name": "x", "domain": "d"}]})"), SchemaError);
  EXPECT_THROW(parse_manifest(R"({"applications": [{"name": "sha", "domain": "security", "files": ["a.s"]},
                                                   {"name": "sha", "domain": "security", "files": ["b.s"]}]})"),
               DuplicateApplication);
  try {
    parse_manifest(R"({"applications": [{"name": "x", "domain": "d", "files": ["a.s"], "bogus": 1}]})");
    FAIL() << "unknown key accepted";
  } catch (const SchemaError& e) {
    EXPECT_NE(e.field().find("bogus"), std::string::npos);
  }
  EXPECT_THROW(load_manifest(kData / "nope.json"), IoError);
}

TEST(Batch, SampleManifest) {
  const auto m = load_manifest(kData / "sample_manifest.json");
  const auto result = run_batch(m);
  ASSERT_EQ(result.records.size(), 3u);
  EXPECT_TRUE(result.failures.empty());
  EXPECT_EQ(result.records[0].name, "spill_example");
  EXPECT_DOUBLE_EQ(result.records[0].spilling_rate, 1.0);
  EXPECT_EQ(result.records[0].additional_registers, 4);
  EXPECT_EQ(result.per_application[0].spill_count, 4);
  EXPECT_EQ(result.records[2].additional_registers, 0);
}

TEST(Batch, JobCountDoesNotChangeOutput) {
  const auto m = load_manifest(kData / "sample_manifest.json");
  const Provenance p{"t", "0000000000000000", "pinned"};
  const auto serial = serialize_batch_result(run_batch(m, {1}), p);
  EXPECT_EQ(serialize_batch_result(run_batch(m, {4}), p), serial);
}

TEST(Batch, FailingApplicationIsIsolated) {
  const auto m = parse_manifest(R"({"applications": [
      {"name": "ok", "domain": "d", "files": ["spill_example.s"]},
      {"name": "gone", "domain": "d", "files": ["missing.s"]}]})",
                                kData);
  const auto result = run_batch(m);
  ASSERT_EQ(result.records.size(), 1u);
  ASSERT_EQ(result.failures.size(), 1u);
  EXPECT_EQ(result.failures[0].application, "gone");
}

TEST(Batch, AllFailed) {
  const auto m = parse_manifest(R"({"applications": [{"name": "gone", "domain": "d", "files": ["missing.s"]}]})",
                                kData);
  EXPECT_THROW(run_batch(m), AllFailed);
}

TEST(Batch, RoundTripThroughJson) {
  const auto result = run_batch(load_manifest(kData / "sample_manifest.json"));
  const auto text = serialize_batch_result(result, {"t", "0000000000000000", "pinned"});
  EXPECT_EQ(records_from_batch_document(text), result.records);
  const auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc.at("provenance").at("timestamp"), "pinned");
  EXPECT_THROW(records_from_batch_document("{}"), SchemaError);
}

TEST(Provenance, DigestAndPin) {
  EXPECT_EQ(config_digest("abc").size(), 16u);
  EXPECT_NE(config_digest("abc"), config_digest("abd"));
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  setenv(kPinTimeEnv, "2000-01-01T00:00:00Z", 1);
  const auto p = make_provenance("cfg");
  unsetenv(kPinTimeEnv);
  EXPECT_EQ(p.timestamp, "2000-01-01T00:00:00Z");
  EXPECT_EQ(p.config_digest, config_digest("cfg"));
  EXPECT_EQ(p.tool_version, tool_version());
}
