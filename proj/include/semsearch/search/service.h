#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "semsearch/search/search.h"

namespace semsearch::search {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

inline constexpr std::size_t kDefaultK = 10;

// Routes one GET request. Endpoints:
//   /search?q=...&mode=semantic|keyword&k=N  -> {query, mode, k, took_ms, results}
//   /ontology/classes                        -> inferred hierarchy tree
//   /health                                  -> {"status": "ok"}
// Missing q, unknown mode or a k that is not a positive integer answer 400.
ApiResponse handle_request(const SearchEngine& engine, std::string_view path,
                           const std::multimap<std::string, std::string>& params);

// HTTP front end over handle_request. The engine must outlive the service.
class SearchService {
 public:
  explicit SearchService(const SearchEngine& engine);
  ~SearchService();
  SearchService(const SearchService&) = delete;
  SearchService& operator=(const SearchService&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace semsearch::search
