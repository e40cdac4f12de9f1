#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "semsearch/indexer/indexer.h"
#include "semsearch/reasoner/reasoner.h"

namespace semsearch::search {

using ontology::ClassId;
using webcorpus::Document;

class UnknownDocId : public Error {
 public:
  explicit UnknownDocId(const std::string& id) : Error("judged doc_id not in corpus: " + id) {}
};

enum class Via { Direct, SubclassExpansion, SuperclassExpansion };

std::string_view to_string(Via via);

struct MatchedConcept {
  ClassId cls;
  Via via = Via::Direct;
  bool operator==(const MatchedConcept&) const = default;
};

struct SearchResult {
  std::string doc_id;
  std::string url;
  std::string title;
  double score = 0.0;
  std::vector<MatchedConcept> matched_concepts;  // empty in keyword mode
  std::string snippet;
};

enum class Mode { Semantic, Keyword };

std::string_view to_string(Mode mode);
// Accepts "semantic" and "keyword"; anything else is std::nullopt.
std::optional<Mode> parse_mode(std::string_view text);

// concept_score = sum of strength / (1 + depth_decay * depth);
// score = concept_score + cosine_weight * cosine.
struct RankingConfig {
  double cosine_weight = 0.01;
  double depth_decay = 1.0;
  bool expand_upward = false;
};

// Everything a query needs, built once and only read afterwards.
struct SearchEngine {
  ontology::Ontology ontology;
  reasoner::InferredHierarchy hierarchy;
  indexer::InvertedIndex inverted;
  indexer::ConceptIndex concepts;
  std::map<std::string, Document> documents;  // by doc_id
  RankingConfig ranking;
};

// Cosine between the query's tf-idf vector and every document sharing a
// nonzero-weight stem with it, keyed by doc_id.
std::map<std::string, double> cosine_scores(std::string_view query, const indexer::InvertedIndex& idx);

std::vector<SearchResult> keyword_search(std::string_view query, const SearchEngine& engine, std::size_t k);

std::set<ClassId> match_concepts(std::string_view query, const indexer::Lexicon& lexicon,
                                 const textprep::StopWordList& stoplist);

std::vector<SearchResult> semantic_search(std::string_view query, const SearchEngine& engine, std::size_t k);

std::vector<SearchResult> search(std::string_view query, Mode mode, const SearchEngine& engine, std::size_t k);

// First sentence of `body` containing one of the stemmed `terms`, else the
// first 160 characters.
std::string make_snippet(std::string_view body, const std::set<std::string>& terms,
                         const textprep::StopWordList& stoplist);

nlohmann::json to_json(const SearchResult& r, const ontology::Ontology& ont);
// {query, mode, results}
nlohmann::json results_json(std::string_view query, Mode mode, const std::vector<SearchResult>& results,
                            const ontology::Ontology& ont);

struct Judgment {
  std::string query;
  std::set<std::string> relevant;
};

// One {"query": ..., "relevant": [doc_id, ...]} object per line.
std::vector<Judgment> parse_judgments(std::string_view jsonl);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// Empty retrieval has precision 1 only when nothing is relevant; an empty
// relevant set has recall 1.
PrecisionRecall precision_recall(const std::vector<std::string>& retrieved, const std::set<std::string>& relevant);

struct QueryEval {
  std::string query;
  std::map<Mode, PrecisionRecall> by_mode;
  std::map<Mode, std::vector<std::string>> retrieved;
};

struct EvalReport {
  std::vector<QueryEval> queries;
  std::map<Mode, PrecisionRecall> macro;
};

// Throws UnknownDocId.
EvalReport evaluate(const std::vector<Judgment>& judgments, const SearchEngine& engine, std::size_t k);

nlohmann::json to_json(const EvalReport& report);

}  // namespace semsearch::search
