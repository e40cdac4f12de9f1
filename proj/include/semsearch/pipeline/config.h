#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semsearch/common/error.h"
#include "semsearch/search/search.h"
#include "semsearch/webcorpus/crawler.h"

namespace semsearch::pipeline {

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Values of the small TOML subset accepted in config files: strings, integers,
// floats, booleans and arrays of strings. Keys inside [section] headers are
// stored as "section.key".
using ConfigValue = std::variant<std::string, long long, double, bool, std::vector<std::string>>;
using ConfigTable = std::map<std::string, ConfigValue>;

// Throws ConfigError naming the offending line.
ConfigTable parse_config_text(std::string_view text);

enum class FetcherKind { Fixture, Http };

struct PipelineConfig {
  webcorpus::CrawlConfig crawl;
  FetcherKind fetcher = FetcherKind::Fixture;
  std::filesystem::path fixture_dir;
  // Timestamp written into every crawl record; wall clock when unset.
  std::optional<std::string> fetched_at;
  std::filesystem::path ontology_file;
  std::string stopwords_file = "default";
  std::filesystem::path artifacts_dir;
  search::RankingConfig ranking;

  // Throws ConfigError, or InvalidCrawlConfig for crawl settings. Touches no
  // files.
  void validate() const;
};

// Relative paths are resolved against `base_dir`. Unknown keys are errors.
PipelineConfig config_from_table(const ConfigTable& table, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace semsearch::pipeline
