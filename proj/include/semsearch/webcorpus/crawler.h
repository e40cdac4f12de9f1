#pragma once

#include <chrono>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "semsearch/common/error.h"
#include "semsearch/webcorpus/fetcher.h"

namespace semsearch::webcorpus {

struct CrawlConfig {
  std::vector<std::string> seeds;
  int max_depth = 3;
  int max_pages = 100;
  // Empty means the hosts of the seeds.
  std::vector<std::string> allowed_hosts;
  std::chrono::milliseconds politeness_delay{0};
  int worker_count = 1;

  // Throws InvalidCrawlConfig.
  void validate() const;
};

class InvalidCrawlConfig : public Error {
 public:
  explicit InvalidCrawlConfig(const std::string& what) : Error("invalid crawl config: " + what) {}
};

enum class CrawlStatus { Fetched, Failed, Skipped };

std::string_view to_string(CrawlStatus status);
CrawlStatus crawl_status_from_string(std::string_view name);

struct CrawlRecord {
  std::string url;
  int depth = 0;
  std::optional<std::string> parent;
  CrawlStatus status = CrawlStatus::Skipped;
  std::string content_hash;  // sha256 of the body; empty when skipped
  std::optional<std::string> fetched_at;

  bool operator==(const CrawlRecord&) const = default;
};

struct LinkGraph {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;

  void add_edge(const std::string& from, const std::string& to);
};

struct CrawlResult {
  LinkGraph graph;
  std::vector<CrawlRecord> records;  // in discovery order
};

class NoSeedsReachable : public Error {
 public:
  explicit NoSeedsReachable(CrawlResult partial)
      : Error("no seed URL could be fetched"), partial_(std::move(partial)) {}
  const CrawlResult& partial() const { return partial_; }

 private:
  CrawlResult partial_;
};

// Level-synchronous breadth-first crawl. Each level is fetched by
// `worker_count` threads, then its links are merged into the frontier in
// page order, so the visited set and record order do not depend on the
// number of workers. Requests to one host are serialized and spaced by
// `politeness_delay`.
CrawlResult crawl(const CrawlConfig& config, Fetcher& fetcher, const Clock& clock = system_clock_utc());

// JSON-lines crawl log, one record per line.
std::string crawl_log_jsonl(const std::vector<CrawlRecord>& records);
std::vector<CrawlRecord> parse_crawl_log(std::string_view jsonl);

}  // namespace semsearch::webcorpus
