#include "semsearch/pipeline/pipeline.h"

#include <algorithm>
#include <mutex>

#include "semsearch/common/files.h"
#include "semsearch/common/hash.h"
#include "semsearch/indexer/indexer.h"
#include "semsearch/ontology/authoring.h"
#include "semsearch/rdfio/rdfio.h"
#include "semsearch/reasoner/reasoner.h"
#include "semsearch/webcorpus/corpus.h"

namespace semsearch::pipeline {

namespace fs = std::filesystem;

namespace {

struct StageSpec {
  std::string_view name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

const std::vector<StageSpec>& stage_specs() {
  static const std::vector<StageSpec> specs = {
      {"crawl", {}, {"crawl_log"}},
      {"corpus", {"crawl_log"}, {"corpus_manifest"}},
      {"ontology", {}, {"ontology_nt"}},
      {"classify", {"ontology_nt"}, {"hierarchy"}},
      {"index", {"corpus_manifest", "ontology_nt", "hierarchy"}, {"inverted_index", "concept_index"}},
  };
  return specs;
}

const StageSpec& spec_of(std::string_view stage) {
  for (const auto& s : stage_specs()) {
    if (s.name == stage) return s;
  }
  throw UnknownStage(std::string(stage));
}

const std::map<std::string, std::string>& artifact_paths() {
  static const std::map<std::string, std::string> paths = {
      {"crawl_log", "crawl/crawl.jsonl"},
      {"corpus_manifest", "corpus/" + std::string(webcorpus::kCorpusManifestName)},
      {"ontology_nt", "ontology/ontology.nt"},
      {"hierarchy", "hierarchy/hierarchy.json"},
      {"inverted_index", "index/inverted.json"},
      {"concept_index", "index/concepts.json"},
  };
  return paths;
}

constexpr std::string_view kPagesDir = "crawl/pages";
constexpr std::string_view kCorpusDir = "corpus";
constexpr std::string_view kTurtlePath = "ontology/ontology.ttl";

// Stages that consume an output of `stage`, directly or transitively.
std::set<std::string_view> downstream_of(std::string_view stage) {
  std::set<std::string_view> out;
  std::set<std::string> produced(spec_of(stage).outputs.begin(), spec_of(stage).outputs.end());
  for (const auto& s : stage_specs()) {
    const bool consumes = std::any_of(s.inputs.begin(), s.inputs.end(),
                                      [&](const std::string& in) { return produced.contains(in); });
    if (consumes && s.name != stage) {
      out.insert(s.name);
      produced.insert(s.outputs.begin(), s.outputs.end());
    }
  }
  return out;
}

// Keeps the bodies of successful HTML responses for the corpus stage.
class RecordingFetcher : public webcorpus::Fetcher {
 public:
  explicit RecordingFetcher(webcorpus::Fetcher& inner) : inner_(inner) {}

  webcorpus::FetchResponse fetch(const std::string& url) override {
    auto response = inner_.fetch(url);
    if (response.ok() && response.is_html()) {
      std::lock_guard lock(mutex_);
      pages_[url] = response.body;
    }
    return response;
  }

  std::map<std::string, std::string> pages() const {
    std::lock_guard lock(mutex_);
    return pages_;
  }

 private:
  webcorpus::Fetcher& inner_;
  mutable std::mutex mutex_;
  std::map<std::string, std::string> pages_;
};

textprep::StopWordList load_stoplist(const PipelineConfig& config) {
  if (config.stopwords_file == "default") return textprep::StopWordList::english();
  return textprep::StopWordList::load(config.stopwords_file);
}

ontology::Ontology load_ontology_source(const fs::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".nt") return rdfio::from_triples(rdfio::parse_ntriples(read_file(path))).ontology;
  if (ext == ".ttl") return rdfio::from_triples(rdfio::parse_turtle(read_file(path))).ontology;
  return ontology::load_authoring(path);
}

ontology::Ontology load_ontology_artifact(const fs::path& dir) {
  return rdfio::from_triples(rdfio::parse_ntriples(read_file(dir / artifact_paths().at("ontology_nt")))).ontology;
}

void require_valid(const ontology::Ontology& ont) {
  const auto report = ontology::validate(ont);
  if (report.ok()) return;
  std::string message = "ontology has " + std::to_string(report.violations.size()) + " violation(s):";
  for (const auto& v : report.violations) {
    message += " [" + std::string(ontology::to_string(v.kind)) + "] " + v.subject + ";";
  }
  throw Error(message);
}

// Writes the artifact and returns its manifest entry.
ArtifactEntry emit(const fs::path& dir, const std::string& name, std::string_view stage, std::string_view contents) {
  const auto& rel = artifact_paths().at(name);
  write_file_atomic(dir / rel, contents);
  return {std::string(stage), rel, 1, sha256_hex(contents), false};
}

std::map<std::string, ArtifactEntry> run_crawl(const PipelineConfig& config, webcorpus::Fetcher& fetcher) {
  RecordingFetcher recorder(fetcher);
  const auto clock = config.fetched_at ? webcorpus::fixed_clock(*config.fetched_at) : webcorpus::system_clock_utc();
  const auto result = webcorpus::crawl(config.crawl, recorder, clock);
  const auto pages = recorder.pages();
  for (const auto& r : result.records) {
    if (r.status != webcorpus::CrawlStatus::Fetched) continue;
    const auto it = pages.find(r.url);
    if (it == pages.end()) continue;
    write_file_atomic(config.artifacts_dir / kPagesDir / (webcorpus::doc_id_for(r.url) + ".html"), it->second);
  }
  return {{"crawl_log", emit(config.artifacts_dir, "crawl_log", "crawl", webcorpus::crawl_log_jsonl(result.records))}};
}

std::map<std::string, ArtifactEntry> run_corpus(const PipelineConfig& config) {
  const auto& dir = config.artifacts_dir;
  const auto records = webcorpus::parse_crawl_log(read_file(dir / artifact_paths().at("crawl_log")));
  std::vector<webcorpus::Document> documents;
  for (const auto& r : records) {
    if (r.status != webcorpus::CrawlStatus::Fetched) continue;
    const auto page = dir / kPagesDir / (webcorpus::doc_id_for(r.url) + ".html");
    if (!fs::exists(page)) continue;  // fetched but not HTML
    const auto html = read_file(page);
    if (sha256_hex(html) != r.content_hash) throw ArtifactMismatch("stored page for " + r.url + " differs from the crawl log");
    documents.push_back(webcorpus::make_document(r.url, html));
  }
  webcorpus::store_corpus(documents, dir / kCorpusDir);
  const auto& rel = artifact_paths().at("corpus_manifest");
  return {{"corpus_manifest", {"corpus", rel, 1, sha256_hex(read_file(dir / rel)), false}}};
}

std::map<std::string, ArtifactEntry> run_ontology(const PipelineConfig& config) {
  const auto ont = load_ontology_source(config.ontology_file);
  require_valid(ont);
  const auto triples = rdfio::to_triples(ont);
  write_file_atomic(config.artifacts_dir / kTurtlePath, rdfio::write_turtle(triples));
  return {{"ontology_nt", emit(config.artifacts_dir, "ontology_nt", "ontology", rdfio::write_ntriples(triples))}};
}

std::map<std::string, ArtifactEntry> run_classify(const PipelineConfig& config) {
  const auto ont = load_ontology_artifact(config.artifacts_dir);
  const auto h = reasoner::classify(ont);
  const auto report = reasoner::check_consistency(ont, h);
  if (!report.consistent()) {
    std::string message = "ontology is inconsistent:";
    for (const auto& v : report.violations) {
      if (v.kind == reasoner::ConsistencyViolation::Kind::Cardinality) message += " " + v.explanation + ";";
    }
    throw Error(message);
  }
  auto j = reasoner::hierarchy_json(ont, h);
  j["consistency"] = reasoner::report_json(report);
  return {{"hierarchy", emit(config.artifacts_dir, "hierarchy", "classify", indexer::dump(j))}};
}

std::map<std::string, ArtifactEntry> run_index(const PipelineConfig& config) {
  const auto& dir = config.artifacts_dir;
  const auto stoplist = load_stoplist(config);
  const auto documents = webcorpus::load_corpus(dir / kCorpusDir);
  const auto ont = load_ontology_artifact(dir);
  const auto idx = indexer::build_inverted_index(documents, stoplist);
  auto lexicon = indexer::build_lexicon(ont, stoplist);
  const auto annotations = indexer::annotate(documents, lexicon, stoplist);
  const auto cidx = indexer::build_concept_index(annotations, std::move(lexicon));
  return {{"inverted_index", emit(dir, "inverted_index", "index", indexer::dump(indexer::to_json(idx)))},
          {"concept_index", emit(dir, "concept_index", "index", indexer::dump(indexer::to_json(cidx)))}};
}

std::map<std::string, ArtifactEntry> execute(const PipelineConfig& config, std::string_view stage,
                                             webcorpus::Fetcher& fetcher) {
  try {
    if (stage == "crawl") return run_crawl(config, fetcher);
    if (stage == "corpus") return run_corpus(config);
    if (stage == "ontology") return run_ontology(config);
    if (stage == "classify") return run_classify(config);
    return run_index(config);
  } catch (const std::exception& e) {
    throw StageFailed(std::string(stage), e.what());
  }
}

void write_manifest(const fs::path& dir, const ArtifactManifest& m) {
  write_file_atomic(dir / kManifestName, indexer::dump(to_json(m)));
}

void verify_entry(const fs::path& dir, const std::string& name, const ArtifactManifest& m) {
  const auto it = m.artifacts.find(name);
  if (it == m.artifacts.end()) throw MissingUpstream(name);
  const auto path = dir / it->second.path;
  if (!fs::exists(path)) throw MissingUpstream(name + " (" + it->second.path + ")");
  if (sha256_hex(read_file(path)) != it->second.sha256) throw ArtifactMismatch(name + " hash differs from manifest");
}

void record(ArtifactManifest& m, std::string_view stage, std::map<std::string, ArtifactEntry> entries) {
  for (auto& [name, entry] : entries) m.artifacts[name] = std::move(entry);
  for (const auto downstream : downstream_of(stage)) {
    for (const auto& out : spec_of(downstream).outputs) {
      if (const auto it = m.artifacts.find(out); it != m.artifacts.end()) it->second.stale = true;
    }
  }
}

}  // namespace

bool is_stage(std::string_view name) {
  return std::find(std::begin(kStages), std::end(kStages), name) != std::end(kStages);
}

UnknownStage::UnknownStage(const std::string& name)
    : Error([&] {
        std::string message = "unknown stage '" + name + "'; valid stages:";
        for (const auto s : kStages) message += " " + std::string(s);
        return message;
      }()) {}

bool ArtifactManifest::operator==(const ArtifactManifest& o) const {
  return artifacts == o.artifacts && ranking.cosine_weight == o.ranking.cosine_weight &&
         ranking.depth_decay == o.ranking.depth_decay && ranking.expand_upward == o.ranking.expand_upward;
}

nlohmann::json to_json(const ArtifactManifest& m) {
  nlohmann::json artifacts = nlohmann::json::object();
  for (const auto& [name, e] : m.artifacts) {
    artifacts[name] = {{"stage", e.stage}, {"path", e.path}, {"version", e.version}, {"sha256", e.sha256},
                       {"stale", e.stale}};
  }
  return {{"format", 1},
          {"artifacts", artifacts},
          {"ranking",
           {{"cosine_weight", m.ranking.cosine_weight},
            {"depth_decay", m.ranking.depth_decay},
            {"expand_upward", m.ranking.expand_upward}}}};
}

ArtifactManifest manifest_from_json(const nlohmann::json& j) {
  ArtifactManifest m;
  try {
    if (j.at("format") != 1) throw ArtifactMismatch("unsupported manifest format");
    for (const auto& [name, e] : j.at("artifacts").items()) {
      m.artifacts[name] = {e.at("stage").get<std::string>(), e.at("path").get<std::string>(),
                           e.at("version").get<int>(), e.at("sha256").get<std::string>(), e.at("stale").get<bool>()};
    }
    const auto& r = j.at("ranking");
    m.ranking = {r.at("cosine_weight").get<double>(), r.at("depth_decay").get<double>(),
                 r.at("expand_upward").get<bool>()};
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactMismatch(std::string("manifest: ") + e.what());
  }
  return m;
}

ArtifactManifest read_manifest(const fs::path& artifacts_dir) {
  const auto path = artifacts_dir / kManifestName;
  if (!fs::exists(path)) return {};
  try {
    return manifest_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactMismatch(std::string("manifest: ") + e.what());
  }
}

std::string_view to_string(ArtifactStatus::State state) {
  switch (state) {
    case ArtifactStatus::State::Ok:
      return "ok";
    case ArtifactStatus::State::Missing:
      return "missing";
    case ArtifactStatus::State::Mismatch:
      return "mismatch";
  }
  return "ok";
}

std::vector<ArtifactStatus> check_artifacts(const fs::path& artifacts_dir, const ArtifactManifest& manifest) {
  std::vector<ArtifactStatus> out;
  for (const auto& [name, entry] : manifest.artifacts) {
    ArtifactStatus s{name, entry, ArtifactStatus::State::Ok};
    const auto path = artifacts_dir / entry.path;
    if (!fs::exists(path)) {
      s.state = ArtifactStatus::State::Missing;
    } else if (sha256_hex(read_file(path)) != entry.sha256) {
      s.state = ArtifactStatus::State::Mismatch;
    }
    out.push_back(std::move(s));
  }
  return out;
}

ArtifactManifest run_all(const PipelineConfig& config, webcorpus::Fetcher& fetcher) {
  config.validate();
  ArtifactManifest manifest;
  manifest.ranking = config.ranking;
  write_manifest(config.artifacts_dir, manifest);
  for (const auto stage : kStages) {
    record(manifest, stage, execute(config, stage, fetcher));
    write_manifest(config.artifacts_dir, manifest);
  }
  return manifest;
}

ArtifactManifest run_stage(const PipelineConfig& config, std::string_view stage, webcorpus::Fetcher& fetcher) {
  const auto& spec = spec_of(stage);
  config.validate();
  auto manifest = read_manifest(config.artifacts_dir);
  for (const auto& input : spec.inputs) verify_entry(config.artifacts_dir, input, manifest);
  manifest.ranking = config.ranking;
  record(manifest, stage, execute(config, stage, fetcher));
  write_manifest(config.artifacts_dir, manifest);
  return manifest;
}

std::unique_ptr<webcorpus::Fetcher> make_fetcher(const PipelineConfig& config) {
  if (config.fetcher == FetcherKind::Http) return std::make_unique<webcorpus::HttpFetcher>();
  return std::make_unique<webcorpus::FixtureFetcher>(config.fixture_dir);
}

search::SearchEngine load_search_engine(const fs::path& artifacts_dir) {
  const auto manifest = read_manifest(artifacts_dir);
  for (const auto* name : {"corpus_manifest", "ontology_nt", "hierarchy", "inverted_index", "concept_index"}) {
    verify_entry(artifacts_dir, name, manifest);
    if (manifest.artifacts.at(name).stale) {
      throw ArtifactMismatch(std::string(name) + " is stale; rerun the pipeline");
    }
  }
  search::SearchEngine engine;
  engine.ontology = load_ontology_artifact(artifacts_dir);
  engine.hierarchy = reasoner::classify(engine.ontology);
  auto stored = nlohmann::json::parse(read_file(artifacts_dir / artifact_paths().at("hierarchy")));
  stored.erase("consistency");
  if (stored != reasoner::hierarchy_json(engine.ontology, engine.hierarchy)) {
    throw ArtifactMismatch("hierarchy dump does not match the ontology artifact");
  }
  engine.inverted = indexer::load_inverted_index(artifacts_dir / artifact_paths().at("inverted_index"));
  engine.concepts = indexer::load_concept_index(artifacts_dir / artifact_paths().at("concept_index"));
  for (auto& doc : webcorpus::load_corpus(artifacts_dir / kCorpusDir)) {
    auto id = doc.doc_id;
    engine.documents.emplace(std::move(id), std::move(doc));
  }
  engine.ranking = manifest.ranking;
  return engine;
}

}  // namespace semsearch::pipeline
