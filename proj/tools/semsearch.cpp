// semsearch command line: pipeline, search, eval, classify, serve, propose-terms.

#include <csignal>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "semsearch/common/files.h"
#include "semsearch/indexer/indexer.h"
#include "semsearch/ontology/authoring.h"
#include "semsearch/pipeline/pipeline.h"
#include "semsearch/rdfio/rdfio.h"
#include "semsearch/reasoner/reasoner.h"
#include "semsearch/search/service.h"

namespace {

using namespace semsearch;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Command-line mirrors of config keys; set values win over the file.
struct ConfigOverrides {
  std::optional<std::string> artifacts_dir, ontology_file, stopwords_file, fixture_dir, fetcher, fetched_at;
  std::vector<std::string> seeds;
  std::optional<int> max_depth, max_pages, worker_count, politeness_delay_ms;
  std::optional<double> cosine_weight, depth_decay;
  std::optional<bool> expand_upward;

  void add_to(CLI::App* app) {
    app->add_option("--artifacts-dir", artifacts_dir, "artifacts_dir");
    app->add_option("--ontology-file", ontology_file, "ontology_file");
    app->add_option("--stopwords-file", stopwords_file, "stopwords_file");
    app->add_option("--seed", seeds, "crawl.seeds (repeatable)");
    app->add_option("--max-depth", max_depth, "crawl.max_depth");
    app->add_option("--max-pages", max_pages, "crawl.max_pages");
    app->add_option("--worker-count", worker_count, "crawl.worker_count");
    app->add_option("--politeness-delay-ms", politeness_delay_ms, "crawl.politeness_delay_ms");
    app->add_option("--fetcher", fetcher, "crawl.fetcher")->check(CLI::IsMember({"fixture", "http"}));
    app->add_option("--fixture-dir", fixture_dir, "crawl.fixture_dir");
    app->add_option("--fetched-at", fetched_at, "crawl.fetched_at");
    app->add_option("--cosine-weight", cosine_weight, "ranking.cosine_weight");
    app->add_option("--depth-decay", depth_decay, "ranking.depth_decay");
    app->add_option("--expand-upward", expand_upward, "ranking.expand_upward");
  }

  pipeline::PipelineConfig apply(const std::string& config_file) const {
    auto table = pipeline::parse_config_text(read_file(config_file));
    auto set = [&](const char* key, const auto& v) {
      if (v) table[key] = *v;
    };
    set("artifacts_dir", artifacts_dir);
    set("ontology_file", ontology_file);
    set("stopwords_file", stopwords_file);
    set("crawl.fixture_dir", fixture_dir);
    set("crawl.fetcher", fetcher);
    set("crawl.fetched_at", fetched_at);
    if (!seeds.empty()) table["crawl.seeds"] = seeds;
    auto set_int = [&](const char* key, const std::optional<int>& v) {
      if (v) table[key] = static_cast<long long>(*v);
    };
    set_int("crawl.max_depth", max_depth);
    set_int("crawl.max_pages", max_pages);
    set_int("crawl.worker_count", worker_count);
    set_int("crawl.politeness_delay_ms", politeness_delay_ms);
    set("ranking.cosine_weight", cosine_weight);
    set("ranking.depth_decay", depth_decay);
    set("ranking.expand_upward", expand_upward);
    // Flag paths are relative to the working directory, file paths to the file.
    auto config = pipeline::config_from_table(table, std::filesystem::path(config_file).parent_path());
    if (artifacts_dir) config.artifacts_dir = std::filesystem::absolute(*artifacts_dir);
    if (ontology_file) config.ontology_file = std::filesystem::absolute(*ontology_file);
    if (fixture_dir) config.fixture_dir = std::filesystem::absolute(*fixture_dir);
    if (stopwords_file && *stopwords_file != "default") {
      config.stopwords_file = std::filesystem::absolute(*stopwords_file).string();
    }
    return config;
  }
};

void print_manifest(const std::filesystem::path& dir, const pipeline::ArtifactManifest& m) {
  for (const auto& s : pipeline::check_artifacts(dir, m)) {
    std::cout << s.name << "\t" << s.entry.stage << "\t" << s.entry.path << "\t" << s.entry.sha256.substr(0, 16)
              << "\t" << pipeline::to_string(s.state) << (s.entry.stale ? "\tstale" : "") << "\n";
  }
}

search::SearchService* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ontology-backed semantic search over a crawled domain"};
  app.require_subcommand(1);

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Build artifacts");
  pipeline_cmd->require_subcommand(1);

  std::string config_file;
  ConfigOverrides run_overrides;
  auto* run_cmd = pipeline_cmd->add_subcommand("run", "Run every stage");
  run_cmd->add_option("--config", config_file, "Config file")->required();
  run_overrides.add_to(run_cmd);

  std::string stage_name;
  ConfigOverrides stage_overrides;
  auto* stage_cmd = pipeline_cmd->add_subcommand("stage", "Rerun one stage");
  stage_cmd->add_option("name", stage_name, "crawl, corpus, ontology, classify or index")->required();
  stage_cmd->add_option("--config", config_file, "Config file")->required();
  stage_overrides.add_to(stage_cmd);

  std::string artifacts;
  auto* status_cmd = pipeline_cmd->add_subcommand("status", "Check the artifact manifest");
  status_cmd->add_option("--artifacts", artifacts, "Artifacts directory")->required();

  std::string query;
  std::string mode_text = "semantic";
  std::size_t k = search::kDefaultK;
  std::optional<double> cosine_weight, depth_decay;
  bool expand_upward = false;
  auto* search_cmd = app.add_subcommand("search", "Query the artifacts, print JSON");
  search_cmd->add_option("--q", query, "Query text")->required();
  search_cmd->add_option("--mode", mode_text, "semantic or keyword")->check(CLI::IsMember({"semantic", "keyword"}));
  search_cmd->add_option("--k", k, "Result count")->check(CLI::PositiveNumber);
  search_cmd->add_option("--artifacts", artifacts, "Artifacts directory")->required();
  search_cmd->add_option("--cosine-weight", cosine_weight, "ranking.cosine_weight");
  search_cmd->add_option("--depth-decay", depth_decay, "ranking.depth_decay");
  search_cmd->add_flag("--expand-upward", expand_upward, "also retrieve superclass documents");

  std::string judgments_file;
  auto* eval_cmd = app.add_subcommand("eval", "Precision and recall over judged queries");
  eval_cmd->add_option("--judgments", judgments_file, "JSON-lines judgments")->required();
  eval_cmd->add_option("--artifacts", artifacts, "Artifacts directory")->required();
  eval_cmd->add_option("--k", k, "Result count")->check(CLI::PositiveNumber);

  std::string ontology_file;
  bool as_json = false;
  auto* classify_cmd = app.add_subcommand("classify", "Classify an ontology file and print the hierarchy");
  classify_cmd->add_option("--ontology", ontology_file, ".onto, .nt or .ttl file")->required();
  classify_cmd->add_flag("--json", as_json, "print the full JSON dump");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API");
  serve_cmd->add_option("--artifacts", artifacts, "Artifacts directory")->required();
  serve_cmd->add_option("--host", host, "Bind address");
  serve_cmd->add_option("--port", port, "Port (0 picks one)");

  std::size_t per_concept = 5;
  auto* propose_cmd = app.add_subcommand("propose-terms", "Suggest synonym candidates for review");
  propose_cmd->add_option("--artifacts", artifacts, "Artifacts directory")->required();
  propose_cmd->add_option("--per-concept", per_concept, "Terms per concept")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  std::string current_stage;
  try {
    if (run_cmd->parsed()) {
      const auto config = run_overrides.apply(config_file);
      const auto fetcher = pipeline::make_fetcher(config);
      const auto manifest = pipeline::run_all(config, *fetcher);
      print_manifest(config.artifacts_dir, manifest);
    } else if (stage_cmd->parsed()) {
      if (!pipeline::is_stage(stage_name)) throw pipeline::UnknownStage(stage_name);
      const auto config = stage_overrides.apply(config_file);
      const auto fetcher = pipeline::make_fetcher(config);
      const auto manifest = pipeline::run_stage(config, stage_name, *fetcher);
      print_manifest(config.artifacts_dir, manifest);
    } else if (status_cmd->parsed()) {
      const auto manifest = pipeline::read_manifest(artifacts);
      print_manifest(artifacts, manifest);
      for (const auto& s : pipeline::check_artifacts(artifacts, manifest)) {
        if (s.state != pipeline::ArtifactStatus::State::Ok) return kExitFailure;
      }
    } else if (search_cmd->parsed()) {
      auto engine = pipeline::load_search_engine(artifacts);
      if (cosine_weight) engine.ranking.cosine_weight = *cosine_weight;
      if (depth_decay) engine.ranking.depth_decay = *depth_decay;
      if (expand_upward) engine.ranking.expand_upward = true;
      const auto mode = *search::parse_mode(mode_text);
      std::cout << search::results_json(query, mode, search::search(query, mode, engine, k), engine.ontology).dump(2)
                << "\n";
    } else if (eval_cmd->parsed()) {
      const auto engine = pipeline::load_search_engine(artifacts);
      const auto judgments = search::parse_judgments(read_file(judgments_file));
      std::cout << search::to_json(search::evaluate(judgments, engine, k)).dump(2) << "\n";
    } else if (classify_cmd->parsed()) {
      const std::filesystem::path path(ontology_file);
      ontology::Ontology ont = path.extension() == ".nt"
                                   ? rdfio::from_triples(rdfio::parse_ntriples(read_file(path))).ontology
                               : path.extension() == ".ttl"
                                   ? rdfio::from_triples(rdfio::parse_turtle(read_file(path))).ontology
                                   : ontology::load_authoring(path);
      const auto h = reasoner::classify(ont);
      const auto report = reasoner::check_consistency(ont, h);
      if (as_json) {
        auto j = reasoner::hierarchy_json(ont, h);
        j["consistency"] = reasoner::report_json(report);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << reasoner::render_tree(ont, h);
        for (const auto& v : report.violations) {
          std::cout << "# " << reasoner::to_string(v.kind) << ": " << v.explanation << "\n";
        }
      }
      if (!report.consistent()) return kExitFailure;
    } else if (serve_cmd->parsed()) {
      const auto engine = pipeline::load_search_engine(artifacts);
      search::SearchService service(engine);
      const int bound = service.bind(host, port);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << host << ":" << bound << "\n";
      service.listen();
      g_service = nullptr;
    } else if (propose_cmd->parsed()) {
      const auto engine = pipeline::load_search_engine(artifacts);
      nlohmann::json out = nlohmann::json::array();
      for (const auto& p : indexer::propose_terms(engine.inverted, engine.concepts, per_concept)) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& [stem, weight] : p.terms) terms.push_back({{"stem", stem}, {"weight", weight}});
        out.push_back({{"concept", p.cls.iri}, {"label", engine.ontology.class_label(p.cls)}, {"terms", terms}});
      }
      std::cout << out.dump(2) << "\n";
    }
  } catch (const pipeline::UnknownStage& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
