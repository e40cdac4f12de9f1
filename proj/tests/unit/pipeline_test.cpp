#include <gtest/gtest.h>

#include "semsearch/common/files.h"
#include "semsearch/pipeline/pipeline.h"
#include "test_support.h"

using namespace semsearch::pipeline;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = fs::path(SEMSEARCH_SOURCE_DIR) / "fixtures";

PipelineConfig fixture_config(const fs::path& artifacts, long long workers = 4) {
  auto table = parse_config_text(semsearch::read_file(kFixtures / "pipeline.toml"));
  table["artifacts_dir"] = artifacts.string();
  table["crawl.worker_count"] = workers;
  return config_from_table(table, kFixtures);
}

std::map<std::string, std::string> hashes(const ArtifactManifest& m) {
  std::map<std::string, std::string> out;
  for (const auto& [name, e] : m.artifacts) out[name] = e.sha256;
  return out;
}

const std::set<std::string> kAllArtifacts = {"crawl_log",   "corpus_manifest", "ontology_nt",
                                             "hierarchy",   "inverted_index",  "concept_index"};

// Builds the fixture artifacts once; tests that modify them copy the tree.
const fs::path& shared_artifacts() {
  static TempDir dir;
  static const bool built = [] {
    const auto config = fixture_config(dir.path() / "a");
    const auto fetcher = make_fetcher(config);
    run_all(config, *fetcher);
    return true;
  }();
  (void)built;
  static const fs::path path = dir.path() / "a";
  return path;
}

fs::path copy_artifacts(const TempDir& into) {
  const auto target = into.path() / "copy";
  fs::copy(shared_artifacts(), target, fs::copy_options::recursive);
  return target;
}

}  // namespace

TEST(Config, ParsesTomlSubset) {
  const auto t = parse_config_text(R"(# comment
name = "a \"quoted\" \\ value" # trailing
n = -3
x = 2.5
flag = true
[crawl]
seeds = ["http://a.test/", "http://b.test/",
  "http://c.test/",
]
empty = []
)");
  EXPECT_EQ(std::get<std::string>(t.at("name")), "a \"quoted\" \\ value");
  EXPECT_EQ(std::get<long long>(t.at("n")), -3);
  EXPECT_DOUBLE_EQ(std::get<double>(t.at("x")), 2.5);
  EXPECT_TRUE(std::get<bool>(t.at("flag")));
  EXPECT_EQ(std::get<std::vector<std::string>>(t.at("crawl.seeds")).size(), 3u);
  EXPECT_TRUE(std::get<std::vector<std::string>>(t.at("crawl.empty")).empty());
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config_text("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_config_text("a = \"open\n"), ConfigError);
  EXPECT_THROW(parse_config_text("just words\n"), ConfigError);
  EXPECT_THROW(parse_config_text("[crawl\n"), ConfigError);
  EXPECT_THROW(parse_config_text("a = [1, 2]\n"), ConfigError);
  EXPECT_THROW(parse_config_text("a = nope\n"), ConfigError);
  try {
    parse_config_text("a = 1\n\nb = \n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(Config, ResolvesPathsAndRejectsUnknownKeys) {
  const auto config = fixture_config("/tmp/x-artifacts");
  EXPECT_EQ(config.ontology_file, kFixtures / "ontology/health.onto");
  EXPECT_EQ(config.fixture_dir, kFixtures / "web");
  EXPECT_EQ(config.crawl.seeds.size(), 3u);
  EXPECT_EQ(config.crawl.max_depth, 2);
  EXPECT_EQ(config.fetched_at, "2024-01-01T00:00:00Z");
  EXPECT_DOUBLE_EQ(config.ranking.cosine_weight, 0.01);
  EXPECT_NO_THROW(config.validate());

  auto table = parse_config_text(semsearch::read_file(kFixtures / "pipeline.toml"));
  table["crawl.max_dpeth"] = 3LL;
  EXPECT_THROW(config_from_table(table, kFixtures), ConfigError);
  table.erase("crawl.max_dpeth");
  table["crawl.max_depth"] = std::string("two");
  EXPECT_THROW(config_from_table(table, kFixtures), ConfigError);
  table["crawl.max_depth"] = 2LL;
  table["crawl.fetcher"] = std::string("ftp");
  EXPECT_THROW(config_from_table(table, kFixtures), ConfigError);
}

TEST(Config, ValidationFailsBeforeAnyIo) {
  TempDir tmp;
  auto config = fixture_config(tmp.path() / "never");
  config.crawl.seeds.clear();
  const auto fetcher = make_fetcher(config);
  EXPECT_THROW(run_all(config, *fetcher), semsearch::webcorpus::InvalidCrawlConfig);
  EXPECT_FALSE(fs::exists(tmp.path() / "never"));

  config = fixture_config(tmp.path() / "never");
  config.crawl.worker_count = 0;
  EXPECT_THROW(config.validate(), semsearch::webcorpus::InvalidCrawlConfig);
  config = fixture_config(kFixtures / "web" / "artifacts");
  EXPECT_THROW(config.validate(), ConfigError);
  config = fixture_config(tmp.path() / "x");
  config.ranking.depth_decay = -1;
  EXPECT_THROW(config.validate(), ConfigError);
  config = fixture_config(tmp.path() / "x");
  config.ontology_file.clear();
  EXPECT_THROW(config.validate(), ConfigError);
  EXPECT_FALSE(fs::exists(tmp.path() / "x"));
}

TEST(Pipeline, RunAllProducesEveryArtifact) {
  const auto& dir = shared_artifacts();
  const auto manifest = read_manifest(dir);
  std::set<std::string> names;
  for (const auto& [name, e] : manifest.artifacts) {
    names.insert(name);
    EXPECT_FALSE(e.stale) << name;
    EXPECT_EQ(e.version, 1);
  }
  EXPECT_EQ(names, kAllArtifacts);
  for (const auto& s : check_artifacts(dir, manifest)) EXPECT_EQ(s.state, ArtifactStatus::State::Ok) << s.name;
  EXPECT_TRUE(fs::exists(dir / "ontology/ontology.ttl"));

  const auto engine = load_search_engine(dir);
  EXPECT_EQ(engine.documents.size(), 20u);
  EXPECT_EQ(engine.inverted.norms.size(), 20u);
  EXPECT_DOUBLE_EQ(engine.ranking.cosine_weight, 0.01);

  const auto r = semsearch::search::search("medicine for the headache", semsearch::search::Mode::Semantic, engine, 10);
  std::set<std::string> got;
  for (const auto& x : r) got.insert(x.doc_id);
  EXPECT_EQ(got, (std::set<std::string>{"04751d1abb6b4529", "30f1dcfc3ba5c99a", "f2c19e5b64bc7cd1"}));
}

TEST(Pipeline, RepeatedRunsAreByteIdentical) {
  TempDir tmp;
  const auto reference = hashes(read_manifest(shared_artifacts()));
  for (const long long workers : {1LL, 8LL}) {
    const auto config = fixture_config(tmp.path() / ("w" + std::to_string(workers)), workers);
    const auto fetcher = make_fetcher(config);
    EXPECT_EQ(hashes(run_all(config, *fetcher)), reference) << "workers=" << workers;
  }
}

TEST(Pipeline, RerunningOneStageMarksDownstreamStale) {
  TempDir tmp;
  const auto dir = copy_artifacts(tmp);
  const auto config = fixture_config(dir);
  const auto fetcher = make_fetcher(config);
  const auto before = read_manifest(dir);
  const auto crawl_log = semsearch::read_file(dir / "crawl/crawl.jsonl");

  auto m = run_stage(config, "index", *fetcher);
  EXPECT_EQ(semsearch::read_file(dir / "crawl/crawl.jsonl"), crawl_log);
  EXPECT_EQ(hashes(m), hashes(before));
  for (const auto& [name, e] : m.artifacts) EXPECT_FALSE(e.stale) << name;

  m = run_stage(config, "classify", *fetcher);
  EXPECT_TRUE(m.artifacts.at("inverted_index").stale);
  EXPECT_TRUE(m.artifacts.at("concept_index").stale);
  EXPECT_FALSE(m.artifacts.at("hierarchy").stale);
  EXPECT_FALSE(m.artifacts.at("crawl_log").stale);
  EXPECT_EQ(read_manifest(dir), m);
  EXPECT_THROW(load_search_engine(dir), ArtifactMismatch);

  m = run_stage(config, "index", *fetcher);
  for (const auto& [name, e] : m.artifacts) EXPECT_FALSE(e.stale) << name;
  EXPECT_NO_THROW(load_search_engine(dir));

  m = run_stage(config, "crawl", *fetcher);
  for (const auto* name : {"corpus_manifest", "inverted_index", "concept_index"}) EXPECT_TRUE(m.artifacts.at(name).stale);
  EXPECT_FALSE(m.artifacts.at("hierarchy").stale);
}

TEST(Pipeline, MissingAndTamperedUpstream) {
  TempDir tmp;
  const auto config = fixture_config(tmp.path() / "empty");
  const auto fetcher = make_fetcher(config);
  try {
    run_stage(config, "classify", *fetcher);
    FAIL();
  } catch (const MissingUpstream& e) {
    EXPECT_EQ(e.artifact(), "ontology_nt");
  }
  EXPECT_THROW(run_stage(config, "frobnicate", *fetcher), UnknownStage);
  try {
    run_stage(config, "indexx", *fetcher);
  } catch (const UnknownStage& e) {
    EXPECT_NE(std::string(e.what()).find("crawl corpus ontology classify index"), std::string::npos) << e.what();
  }

  const auto dir = copy_artifacts(tmp);
  const auto copy_config = fixture_config(dir);
  const auto original_nt = semsearch::read_file(dir / "ontology/ontology.nt");
  write_text(dir / "ontology/ontology.nt", original_nt + "\n");
  EXPECT_THROW(run_stage(copy_config, "classify", *fetcher), ArtifactMismatch);
  EXPECT_THROW(load_search_engine(dir), ArtifactMismatch);
  const auto status = check_artifacts(dir, read_manifest(dir));
  const auto nt = std::find_if(status.begin(), status.end(), [](const auto& s) { return s.name == "ontology_nt"; });
  EXPECT_EQ(nt->state, ArtifactStatus::State::Mismatch);

  write_text(dir / "ontology/ontology.nt", original_nt);
  EXPECT_NO_THROW(load_search_engine(dir));
  fs::remove(dir / "index/concepts.json");
  EXPECT_THROW(load_search_engine(dir), MissingUpstream);
}

TEST(Pipeline, TamperedPageFailsCorpusStage) {
  TempDir tmp;
  const auto dir = copy_artifacts(tmp);
  const auto config = fixture_config(dir);
  const auto fetcher = make_fetcher(config);
  const auto page = *fs::directory_iterator(dir / "crawl/pages");
  write_text(page.path(), "<html>changed</html>");
  try {
    run_stage(config, "corpus", *fetcher);
    FAIL();
  } catch (const StageFailed& e) {
    EXPECT_EQ(e.stage(), "corpus");
  }
}

TEST(Pipeline, FailedStageKeepsEarlierArtifacts) {
  TempDir tmp;
  write_text(tmp.path() / "bad.onto", R"(ontology <http://example.org/t>
class Disease
class Remedy
property hasPrimaryRemedy domain Disease range Remedy
individual flu : Disease
individual aspirin : Remedy
individual rest : Remedy
fact flu hasPrimaryRemedy aspirin
fact flu hasPrimaryRemedy rest
maxcard hasPrimaryRemedy Disease 1
)");
  auto config = fixture_config(tmp.path() / "out");
  config.ontology_file = tmp.path() / "bad.onto";
  const auto fetcher = make_fetcher(config);
  try {
    run_all(config, *fetcher);
    FAIL();
  } catch (const StageFailed& e) {
    EXPECT_EQ(e.stage(), "classify");
    EXPECT_NE(std::string(e.what()).find("inconsistent"), std::string::npos);
  }
  const auto m = read_manifest(tmp.path() / "out");
  std::set<std::string> names;
  for (const auto& [name, e] : m.artifacts) names.insert(name);
  EXPECT_EQ(names, (std::set<std::string>{"crawl_log", "corpus_manifest", "ontology_nt"}));
  for (const auto& s : check_artifacts(tmp.path() / "out", m)) EXPECT_EQ(s.state, ArtifactStatus::State::Ok);
  EXPECT_FALSE(fs::exists(tmp.path() / "out/hierarchy/hierarchy.json"));
}

TEST(Pipeline, ManifestJsonRoundTrip) {
  const auto m = read_manifest(shared_artifacts());
  EXPECT_EQ(manifest_from_json(to_json(m)), m);
  EXPECT_EQ(to_json(m)["format"], 1);
  EXPECT_THROW(manifest_from_json({{"format", 2}, {"artifacts", nlohmann::json::object()}}), ArtifactMismatch);
  TempDir tmp;
  EXPECT_TRUE(read_manifest(tmp.path()).artifacts.empty());
}
