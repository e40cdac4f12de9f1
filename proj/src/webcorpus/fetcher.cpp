#include "semsearch/webcorpus/fetcher.h"

#include <httplib.h>

#include <algorithm>
#include <ctime>
#include <sstream>

#include "semsearch/common/files.h"
#include "semsearch/webcorpus/url.h"

namespace semsearch::webcorpus {

bool FetchResponse::is_html() const {
  if (content_type.empty()) return true;
  std::string lowered = content_type;
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lowered.find("html") != std::string::npos;
}

FixtureFetcher::FixtureFetcher(std::filesystem::path directory) {
  const auto routes_file = directory / "routes.txt";
  std::istringstream in(read_file(routes_file));
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string url, target;
    if (!(fields >> url) || url.front() == '#') continue;
    if (!(fields >> target)) {
      throw IoFailure(routes_file.string(), "route without target on line " + std::to_string(number));
    }
    Route route;
    if (target.starts_with("status=")) {
      route.status = std::stoi(target.substr(7));
      route.content_type = "text/plain";
    } else {
      route.body = read_file(directory / target);
      route.content_type = target.ends_with(".html") || target.ends_with(".htm")
                               ? "text/html; charset=utf-8"
                               : "text/plain";
    }
    routes_[normalize_url(url)] = std::move(route);
  }
}

FetchResponse FixtureFetcher::fetch(const std::string& url) {
  {
    std::lock_guard lock(mutex_);
    requests_.push_back({url, std::chrono::steady_clock::now()});
  }
  const auto it = routes_.find(url);
  if (it == routes_.end()) return {404, "text/plain", "not found"};
  return {it->second.status, it->second.content_type, it->second.body};
}

std::vector<FixtureFetcher::Request> FixtureFetcher::requests() const {
  std::lock_guard lock(mutex_);
  return requests_;
}

std::vector<std::string> FixtureFetcher::routed_urls() const {
  std::vector<std::string> urls;
  for (const auto& [url, route] : routes_) urls.push_back(url);
  return urls;
}

HttpFetcher::HttpFetcher(std::chrono::seconds timeout, std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

FetchResponse HttpFetcher::fetch(const std::string& url) {
  const auto parts = parse_url_reference(url);
  std::string path = parts.path.empty() ? "/" : parts.path;
  if (parts.has_query) path += "?" + parts.query;
  httplib::Client client(parts.scheme + "://" + parts.authority());
  client.set_follow_location(true);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  auto result = client.Get(path, httplib::Headers{{"User-Agent", user_agent_}});
  if (!result) return {};
  return {result->status, result->get_header_value("Content-Type"), result->body};
}

Clock system_clock_utc() {
  return [] {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
  };
}

Clock fixed_clock(std::string timestamp) {
  return [timestamp = std::move(timestamp)] { return timestamp; };
}

}  // namespace semsearch::webcorpus
