#include "semsearch/search/service.h"

#include <charconv>
#include <chrono>

#include <httplib.h>

namespace semsearch::search {

namespace {

ApiResponse bad_request(const std::string& message) { return {400, {{"error", message}}}; }

const std::string* param(const std::multimap<std::string, std::string>& params, const std::string& name) {
  const auto it = params.find(name);
  return it == params.end() ? nullptr : &it->second;
}

std::optional<std::size_t> parse_k(const std::string& text) {
  std::size_t k = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, k);
  if (ec != std::errc() || ptr != end || k == 0) return std::nullopt;
  return k;
}

ApiResponse handle_search(const SearchEngine& engine, const std::multimap<std::string, std::string>& params) {
  const auto started = std::chrono::steady_clock::now();
  const auto* q = param(params, "q");
  if (!q) return bad_request("missing query parameter 'q'");
  Mode mode = Mode::Semantic;
  if (const auto* m = param(params, "mode")) {
    const auto parsed = parse_mode(*m);
    if (!parsed) return bad_request("unknown mode '" + *m + "' (expected semantic or keyword)");
    mode = *parsed;
  }
  std::size_t k = kDefaultK;
  if (const auto* text = param(params, "k")) {
    const auto parsed = parse_k(*text);
    if (!parsed) return bad_request("k must be a positive integer");
    k = *parsed;
  }
  auto body = results_json(*q, mode, search(*q, mode, engine, k), engine.ontology);
  body["k"] = k;
  body["took_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return {200, std::move(body)};
}

}  // namespace

ApiResponse handle_request(const SearchEngine& engine, std::string_view path,
                           const std::multimap<std::string, std::string>& params) {
  if (path == "/search") return handle_search(engine, params);
  if (path == "/ontology/classes") return {200, reasoner::hierarchy_tree_json(engine.ontology, engine.hierarchy)};
  if (path == "/health") return {200, {{"status", "ok"}}};
  return {404, {{"error", "no such endpoint: " + std::string(path)}}};
}

struct SearchService::Impl {
  const SearchEngine& engine;
  httplib::Server server;

  explicit Impl(const SearchEngine& e) : engine(e) {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      std::multimap<std::string, std::string> params(req.params.begin(), req.params.end());
      ApiResponse out;
      try {
        out = handle_request(engine, req.path, params);
      } catch (const std::exception& ex) {
        out = {500, {{"error", ex.what()}}};
      }
      res.status = out.status;
      res.set_content(out.body.dump(), "application/json; charset=utf-8");
    };
    server.Get(".*", route);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        res.set_content(nlohmann::json{{"error", httplib::status_message(res.status)}}.dump(),
                        "application/json; charset=utf-8");
      }
    });
  }
};

SearchService::SearchService(const SearchEngine& engine) : impl_(std::make_unique<Impl>(engine)) {}

SearchService::~SearchService() { stop(); }

int SearchService::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void SearchService::listen() { impl_->server.listen_after_bind(); }

void SearchService::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace semsearch::search
