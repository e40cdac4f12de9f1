#include "semsearch/webcorpus/crawler.h"

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <json.hpp>
#include <thread>

#include "semsearch/common/hash.h"
#include "semsearch/webcorpus/html.h"
#include "semsearch/webcorpus/url.h"

namespace semsearch::webcorpus {

namespace {

// Serializes requests per host and spaces their start times.
class PolitenessGate {
 public:
  explicit PolitenessGate(std::chrono::milliseconds delay) : delay_(delay) {}

  FetchResponse fetch(Fetcher& fetcher, const std::string& url) {
    auto slot = slot_for(host_of(url));
    std::lock_guard lock(slot->mutex);
    if (slot->last) std::this_thread::sleep_until(*slot->last + delay_);
    slot->last = std::chrono::steady_clock::now();
    try {
      return fetcher.fetch(url);
    } catch (const std::exception&) {
      return {};
    }
  }

 private:
  struct Slot {
    std::mutex mutex;
    std::optional<std::chrono::steady_clock::time_point> last;
  };

  std::shared_ptr<Slot> slot_for(const std::string& host) {
    std::lock_guard lock(mutex_);
    auto& slot = slots_[host];
    if (!slot) slot = std::make_shared<Slot>();
    return slot;
  }

  std::chrono::milliseconds delay_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

std::vector<FetchResponse> fetch_level(const std::vector<std::string>& urls, int workers,
                                       Fetcher& fetcher, PolitenessGate& gate) {
  std::vector<FetchResponse> responses(urls.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (auto i = next.fetch_add(1); i < urls.size(); i = next.fetch_add(1)) {
      responses[i] = gate.fetch(fetcher, urls[i]);
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(workers), urls.size());
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  return responses;
}

}  // namespace

void CrawlConfig::validate() const {
  if (seeds.empty()) throw InvalidCrawlConfig("no seed URLs");
  for (const auto& seed : seeds) {
    try {
      if (!is_http_scheme(normalize_url(seed))) {
        throw InvalidCrawlConfig("seed is not http(s): " + seed);
      }
    } catch (const MalformedUrl& e) {
      throw InvalidCrawlConfig("seed '" + seed + "' is not an absolute URL");
    }
  }
  if (max_depth < 0) throw InvalidCrawlConfig("max_depth must be nonnegative");
  if (max_pages < 1) throw InvalidCrawlConfig("max_pages must be at least 1");
  if (worker_count < 1) throw InvalidCrawlConfig("worker_count must be at least 1");
  if (politeness_delay.count() < 0) throw InvalidCrawlConfig("politeness_delay must be nonnegative");
}

std::string_view to_string(CrawlStatus status) {
  switch (status) {
    case CrawlStatus::Fetched:
      return "fetched";
    case CrawlStatus::Failed:
      return "failed";
    case CrawlStatus::Skipped:
      return "skipped";
  }
  return "skipped";
}

CrawlStatus crawl_status_from_string(std::string_view name) {
  if (name == "fetched") return CrawlStatus::Fetched;
  if (name == "failed") return CrawlStatus::Failed;
  if (name == "skipped") return CrawlStatus::Skipped;
  throw Error("unknown crawl status '" + std::string(name) + "'");
}

void LinkGraph::add_edge(const std::string& from, const std::string& to) {
  nodes.insert(from);
  nodes.insert(to);
  edges.emplace(from, to);
}

CrawlResult crawl(const CrawlConfig& config, Fetcher& fetcher, const Clock& clock) {
  config.validate();
  std::set<std::string> allowed;
  for (const auto& host : config.allowed_hosts) allowed.insert(host_of(normalize_url("http://" + host)));
  if (allowed.empty()) {
    for (const auto& seed : config.seeds) allowed.insert(host_of(normalize_url(seed)));
  }

  CrawlResult result;
  std::map<std::string, std::size_t> seen;  // canonical URL -> record index
  std::vector<std::size_t> level;

  auto discover = [&](const std::string& url, int depth, std::optional<std::string> parent) {
    CrawlRecord record;
    record.url = url;
    record.depth = depth;
    record.parent = std::move(parent);
    seen.emplace(url, result.records.size());
    result.graph.nodes.insert(url);
    const bool in_scope = allowed.contains(host_of(url));
    result.records.push_back(std::move(record));
    return in_scope;
  };

  for (const auto& seed : config.seeds) {
    const auto url = normalize_url(seed);
    if (seen.contains(url)) continue;
    if (discover(url, 0, std::nullopt)) level.push_back(result.records.size() - 1);
  }

  PolitenessGate gate(config.politeness_delay);
  int attempts = 0;
  bool seed_fetched = false;
  while (!level.empty()) {
    const auto budget = static_cast<std::size_t>(config.max_pages - attempts);
    if (level.size() > budget) level.resize(budget);  // the rest stay skipped
    std::vector<std::string> urls;
    for (auto index : level) urls.push_back(result.records[index].url);
    const auto responses = fetch_level(urls, config.worker_count, fetcher, gate);
    attempts += static_cast<int>(level.size());

    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const auto& response = responses[i];
      auto& record = result.records[level[i]];
      record.status = response.ok() ? CrawlStatus::Fetched : CrawlStatus::Failed;
      record.content_hash = sha256_hex(response.body);
      record.fetched_at = clock();
      if (record.status != CrawlStatus::Fetched) continue;
      if (record.depth == 0) seed_fetched = true;
      if (!response.is_html()) continue;
      const std::string from = record.url;
      const int depth = record.depth;
      for (const auto& link : extract_links(response.body, from)) {
        if (seen.contains(link)) {
          result.graph.add_edge(from, link);
          continue;
        }
        if (depth + 1 > config.max_depth) continue;
        result.graph.add_edge(from, link);
        if (discover(link, depth + 1, from)) next.push_back(result.records.size() - 1);
      }
    }
    if (attempts >= config.max_pages) break;
    level = std::move(next);
  }

  if (!seed_fetched) throw NoSeedsReachable(std::move(result));
  return result;
}

std::string crawl_log_jsonl(const std::vector<CrawlRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::json j = {{"url", r.url},
                        {"depth", r.depth},
                        {"parent", r.parent ? nlohmann::json(*r.parent) : nlohmann::json()},
                        {"status", to_string(r.status)},
                        {"content_hash", r.content_hash},
                        {"fetched_at", r.fetched_at ? nlohmann::json(*r.fetched_at) : nlohmann::json()}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<CrawlRecord> parse_crawl_log(std::string_view jsonl) {
  std::vector<CrawlRecord> records;
  std::size_t line_no = 0;
  while (!jsonl.empty()) {
    const auto eol = jsonl.find('\n');
    const auto line = jsonl.substr(0, eol);
    ++line_no;
    if (!line.empty()) {
      try {
        const auto j = nlohmann::json::parse(line);
        CrawlRecord r;
        r.url = j.at("url").get<std::string>();
        r.depth = j.at("depth").get<int>();
        if (!j.at("parent").is_null()) r.parent = j.at("parent").get<std::string>();
        r.status = crawl_status_from_string(j.at("status").get<std::string>());
        r.content_hash = j.at("content_hash").get<std::string>();
        if (!j.at("fetched_at").is_null()) r.fetched_at = j.at("fetched_at").get<std::string>();
        records.push_back(std::move(r));
      } catch (const nlohmann::json::exception& e) {
        throw Error("crawl log line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (eol == std::string_view::npos) break;
    jsonl.remove_prefix(eol + 1);
  }
  return records;
}

}  // namespace semsearch::webcorpus
