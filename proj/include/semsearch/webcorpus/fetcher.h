#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace semsearch::webcorpus {

struct FetchResponse {
  int status = 0;  // HTTP status; 0 when no response was received
  std::string content_type;
  std::string body;

  bool ok() const { return status >= 200 && status < 300; }
  bool is_html() const;
};

class Fetcher {
 public:
  virtual ~Fetcher() = default;
  // Must be safe to call concurrently.
  virtual FetchResponse fetch(const std::string& url) = 0;
};

// Serves a simulated web from a directory. `routes.txt` maps URLs to files:
//
//   # comment
//   http://host.test/index.html   index.html
//   http://host.test/broken.html  status=500
//
// Unrouted URLs answer 404. Every request is logged with its arrival time.
class FixtureFetcher : public Fetcher {
 public:
  struct Request {
    std::string url;
    std::chrono::steady_clock::time_point at;
  };

  explicit FixtureFetcher(std::filesystem::path directory);

  FetchResponse fetch(const std::string& url) override;

  std::vector<Request> requests() const;
  std::vector<std::string> routed_urls() const;

 private:
  struct Route {
    int status = 200;
    std::string content_type;
    std::string body;
  };

  std::map<std::string, Route> routes_;
  mutable std::mutex mutex_;
  std::vector<Request> requests_;
};

// Live HTTP(S) fetcher; follows redirects.
class HttpFetcher : public Fetcher {
 public:
  explicit HttpFetcher(std::chrono::seconds timeout = std::chrono::seconds(10),
                       std::string user_agent = "semsearch-crawler/1.0");

  FetchResponse fetch(const std::string& url) override;

 private:
  std::chrono::seconds timeout_;
  std::string user_agent_;
};

// ISO-8601 UTC timestamp source for crawl records.
using Clock = std::function<std::string()>;

Clock system_clock_utc();
Clock fixed_clock(std::string timestamp);

}  // namespace semsearch::webcorpus
