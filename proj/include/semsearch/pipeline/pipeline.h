#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semsearch/pipeline/config.h"
#include "semsearch/search/search.h"
#include "semsearch/webcorpus/fetcher.h"

namespace semsearch::pipeline {

// Stages in execution order.
inline constexpr std::string_view kStages[] = {"crawl", "corpus", "ontology", "classify", "index"};

bool is_stage(std::string_view name);

// An unknown stage name; the message lists the valid ones.
class UnknownStage : public Error {
 public:
  explicit UnknownStage(const std::string& name);
};

class MissingUpstream : public Error {
 public:
  explicit MissingUpstream(const std::string& artifact)
      : Error("missing upstream artifact: " + artifact), artifact_(artifact) {}
  const std::string& artifact() const { return artifact_; }

 private:
  std::string artifact_;
};

// A file on disk disagrees with the hash recorded for it.
class ArtifactMismatch : public Error {
 public:
  explicit ArtifactMismatch(const std::string& what) : Error("artifact check failed: " + what) {}
};

// Wraps whatever a stage threw, keeping the stage name.
class StageFailed : public Error {
 public:
  StageFailed(std::string stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct ArtifactEntry {
  std::string stage;
  std::string path;  // relative to the artifacts directory
  int version = 1;
  std::string sha256;
  bool stale = false;
  bool operator==(const ArtifactEntry&) const = default;
};

// Artifact names: crawl_log, corpus_manifest, ontology_nt, hierarchy,
// inverted_index, concept_index.
struct ArtifactManifest {
  std::map<std::string, ArtifactEntry> artifacts;
  search::RankingConfig ranking;
  bool operator==(const ArtifactManifest& o) const;
};

inline constexpr std::string_view kManifestName = "manifest.json";

nlohmann::json to_json(const ArtifactManifest& m);
ArtifactManifest manifest_from_json(const nlohmann::json& j);
// Empty manifest when the file does not exist.
ArtifactManifest read_manifest(const std::filesystem::path& artifacts_dir);

struct ArtifactStatus {
  std::string name;
  ArtifactEntry entry;
  enum class State { Ok, Missing, Mismatch } state = State::Ok;
};

std::string_view to_string(ArtifactStatus::State state);

std::vector<ArtifactStatus> check_artifacts(const std::filesystem::path& artifacts_dir,
                                             const ArtifactManifest& manifest);

// Runs every stage in order, each writing its artifacts and then the
// manifest. On failure, throws StageFailed; earlier artifacts and a manifest
// describing them stay on disk.
ArtifactManifest run_all(const PipelineConfig& config, webcorpus::Fetcher& fetcher);

// Reruns one stage over existing upstream artifacts and marks every
// downstream artifact stale. Throws UnknownStage, MissingUpstream,
// ArtifactMismatch or StageFailed.
ArtifactManifest run_stage(const PipelineConfig& config, std::string_view stage, webcorpus::Fetcher& fetcher);

// The fetcher named by the config.
std::unique_ptr<webcorpus::Fetcher> make_fetcher(const PipelineConfig& config);

// Verifies hashes, refuses stale artifacts and rebuilds the query-time
// structures. The ranking constants come from the manifest.
search::SearchEngine load_search_engine(const std::filesystem::path& artifacts_dir);

}  // namespace semsearch::pipeline
