#include "semsearch/search/search.h"

#include <algorithm>
#include <cmath>

namespace semsearch::search {

namespace {

constexpr std::size_t kSnippetChars = 160;

void rank(std::vector<SearchResult>& results, std::size_t k) {
  std::sort(results.begin(), results.end(), [](const SearchResult& a, const SearchResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (results.size() > k) results.resize(k);
}

SearchResult make_result(const SearchEngine& engine, const std::string& doc_id, double score,
                         const std::set<std::string>& terms) {
  SearchResult r;
  r.doc_id = doc_id;
  r.score = score;
  if (const auto it = engine.documents.find(doc_id); it != engine.documents.end()) {
    r.url = it->second.url;
    r.title = it->second.title;
    r.snippet = make_snippet(it->second.body, terms, engine.inverted.stoplist);
  }
  return r;
}

std::string padded(const std::vector<std::string>& stems) {
  std::string out = " ";
  for (const auto& s : stems) out += s + " ";
  return out;
}

std::string first_chars(std::string_view text, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t count = 0; i < text.size() && count < n; ++count) {
    ++i;
    while (i < text.size() && (static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) ++i;
  }
  return std::string(text.substr(0, i));
}

}  // namespace

std::string_view to_string(Via via) {
  switch (via) {
    case Via::Direct:
      return "direct";
    case Via::SubclassExpansion:
      return "subclass-expansion";
    case Via::SuperclassExpansion:
      return "superclass-expansion";
  }
  return "direct";
}

std::string_view to_string(Mode mode) { return mode == Mode::Semantic ? "semantic" : "keyword"; }

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "semantic") return Mode::Semantic;
  if (text == "keyword") return Mode::Keyword;
  return std::nullopt;
}

std::map<std::string, double> cosine_scores(std::string_view query, const indexer::InvertedIndex& idx) {
  std::map<std::string, unsigned> tf;
  for (const auto& s : textprep::stems_of(query, idx.stoplist)) ++tf[s];

  double query_norm = 0.0;
  std::map<std::string, double> dot;
  for (const auto& [term, count] : tf) {
    const double idf = idx.idf(term);
    const double wq = count * idf;
    query_norm += wq * wq;
    if (wq == 0.0) continue;
    for (const auto& p : idx.postings.at(term)) dot[p.doc_id] += wq * p.tf * idf;
  }
  query_norm = std::sqrt(query_norm);

  std::map<std::string, double> out;
  for (const auto& [doc_id, d] : dot) {
    const double norm = idx.norms.at(doc_id);
    if (d > 0 && norm > 0) out[doc_id] = d / (query_norm * norm);
  }
  return out;
}

std::vector<SearchResult> keyword_search(std::string_view query, const SearchEngine& engine, std::size_t k) {
  std::set<std::string> terms;
  for (const auto& s : textprep::stems_of(query, engine.inverted.stoplist)) terms.insert(s);
  std::vector<SearchResult> results;
  for (const auto& [doc_id, score] : cosine_scores(query, engine.inverted)) {
    results.push_back(make_result(engine, doc_id, score, terms));
  }
  rank(results, k);
  return results;
}

std::set<ClassId> match_concepts(std::string_view query, const indexer::Lexicon& lexicon,
                                 const textprep::StopWordList& stoplist) {
  std::set<ClassId> out;
  for (const auto& m : indexer::match_lexicon(textprep::stems_of(query, stoplist), lexicon)) {
    const auto& classes = lexicon.at(m.term);
    out.insert(classes.begin(), classes.end());
  }
  return out;
}

std::vector<SearchResult> semantic_search(std::string_view query, const SearchEngine& engine, std::size_t k) {
  const auto matched = match_concepts(query, engine.concepts.lexicon, engine.inverted.stoplist);
  if (matched.empty()) return keyword_search(query, engine, k);

  struct Candidate {
    double concept_score = 0.0;
    std::map<ClassId, Via> concepts;
    std::set<std::string> evidence;
  };
  std::map<std::string, Candidate> candidates;
  const auto& ranking = engine.ranking;

  auto collect = [&](const ClassId& x, unsigned depth, Via via) {
    const auto it = engine.concepts.by_concept.find(x);
    if (it == engine.concepts.by_concept.end()) return;
    for (const auto& posting : it->second) {
      auto& c = candidates[posting.doc_id];
      c.concept_score += posting.strength / (1.0 + ranking.depth_decay * depth);
      const auto [slot, inserted] = c.concepts.emplace(x, via);
      if (!inserted) slot->second = std::min(slot->second, via);
      c.evidence.insert(posting.evidence.begin(), posting.evidence.end());
    }
  };

  for (const auto& c : matched) {
    if (!engine.hierarchy.knows(c)) continue;
    const auto down = reasoner::subsumees_with_distance(engine.hierarchy, c);
    for (const auto& [x, depth] : down) collect(x, depth, x == c ? Via::Direct : Via::SubclassExpansion);
    if (ranking.expand_upward) {
      for (const auto& [y, depth] : reasoner::subsumers_with_distance(engine.hierarchy, c)) {
        if (!down.contains(y)) collect(y, depth, Via::SuperclassExpansion);
      }
    }
  }

  const auto cosine = cosine_scores(query, engine.inverted);
  std::vector<SearchResult> results;
  for (const auto& [doc_id, c] : candidates) {
    const auto cos = cosine.find(doc_id);
    const double score = c.concept_score + ranking.cosine_weight * (cos == cosine.end() ? 0.0 : cos->second);
    auto r = make_result(engine, doc_id, score, c.evidence);
    for (const auto& [cls, via] : c.concepts) r.matched_concepts.push_back({cls, via});
    results.push_back(std::move(r));
  }
  rank(results, k);
  return results;
}

std::vector<SearchResult> search(std::string_view query, Mode mode, const SearchEngine& engine, std::size_t k) {
  return mode == Mode::Semantic ? semantic_search(query, engine, k) : keyword_search(query, engine, k);
}

std::string make_snippet(std::string_view body, const std::set<std::string>& terms,
                         const textprep::StopWordList& stoplist) {
  // Block boundaries (one per line of extracted text) also end sentences.
  std::size_t start = 0;
  while (!terms.empty() && start < body.size()) {
    auto end = body.find('\n', start);
    if (end == std::string_view::npos) end = body.size();
    for (const auto& sentence : textprep::segment_sentences(body.substr(start, end - start))) {
      const auto stems = padded(textprep::stems_of(sentence, stoplist));
      for (const auto& t : terms) {
        if (stems.find(" " + t + " ") != std::string::npos) return sentence;
      }
    }
    start = end + 1;
  }
  return first_chars(body, kSnippetChars);
}

nlohmann::json to_json(const SearchResult& r, const ontology::Ontology& ont) {
  nlohmann::json concepts = nlohmann::json::array();
  for (const auto& m : r.matched_concepts) {
    concepts.push_back({{"iri", m.cls.iri}, {"label", ont.class_label(m.cls)}, {"via", to_string(m.via)}});
  }
  return {{"doc_id", r.doc_id}, {"url", r.url},           {"title", r.title},
          {"score", r.score},   {"matched_concepts", concepts}, {"snippet", r.snippet}};
}

nlohmann::json results_json(std::string_view query, Mode mode, const std::vector<SearchResult>& results,
                            const ontology::Ontology& ont) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& r : results) list.push_back(to_json(r, ont));
  return {{"query", query}, {"mode", to_string(mode)}, {"results", list}};
}

std::vector<Judgment> parse_judgments(std::string_view jsonl) {
  std::vector<Judgment> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    auto end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("query").get<std::string>(), j.at("relevant").get<std::set<std::string>>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error("judgments line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

PrecisionRecall precision_recall(const std::vector<std::string>& retrieved, const std::set<std::string>& relevant) {
  std::size_t hits = 0;
  for (const auto& id : retrieved) hits += relevant.contains(id) ? 1 : 0;
  PrecisionRecall pr;
  if (retrieved.empty()) {
    pr.precision = relevant.empty() ? 1.0 : 0.0;
  } else {
    pr.precision = static_cast<double>(hits) / static_cast<double>(retrieved.size());
  }
  pr.recall = relevant.empty() ? 1.0 : static_cast<double>(hits) / static_cast<double>(relevant.size());
  return pr;
}

EvalReport evaluate(const std::vector<Judgment>& judgments, const SearchEngine& engine, std::size_t k) {
  EvalReport report;
  for (const auto& j : judgments) {
    for (const auto& id : j.relevant) {
      if (!engine.documents.contains(id)) throw UnknownDocId(id);
    }
  }
  for (const auto& j : judgments) {
    QueryEval q;
    q.query = j.query;
    for (const auto mode : {Mode::Semantic, Mode::Keyword}) {
      std::vector<std::string> ids;
      for (const auto& r : search(j.query, mode, engine, k)) ids.push_back(r.doc_id);
      q.by_mode[mode] = precision_recall(ids, j.relevant);
      q.retrieved[mode] = std::move(ids);
    }
    report.queries.push_back(std::move(q));
  }
  for (const auto mode : {Mode::Semantic, Mode::Keyword}) {
    PrecisionRecall sum;
    for (const auto& q : report.queries) {
      sum.precision += q.by_mode.at(mode).precision;
      sum.recall += q.by_mode.at(mode).recall;
    }
    if (!report.queries.empty()) {
      sum.precision /= static_cast<double>(report.queries.size());
      sum.recall /= static_cast<double>(report.queries.size());
    }
    report.macro[mode] = sum;
  }
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  auto pr = [](const PrecisionRecall& p) { return nlohmann::json{{"precision", p.precision}, {"recall", p.recall}}; };
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& q : report.queries) {
    nlohmann::json entry = {{"query", q.query}};
    for (const auto& [mode, p] : q.by_mode) {
      auto m = pr(p);
      m["retrieved"] = q.retrieved.at(mode);
      entry[std::string(to_string(mode))] = m;
    }
    queries.push_back(entry);
  }
  nlohmann::json macro = nlohmann::json::object();
  for (const auto& [mode, p] : report.macro) macro[std::string(to_string(mode))] = pr(p);
  return {{"queries", queries}, {"macro", macro}};
}

}  // namespace semsearch::search
