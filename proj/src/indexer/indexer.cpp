#include "semsearch/indexer/indexer.h"

#include <algorithm>
#include <cmath>

#include "semsearch/common/files.h"

namespace semsearch::indexer {

namespace {

std::string join(const std::vector<std::string>& stems) {
  std::string out;
  for (const auto& s : stems) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

void check_format(const nlohmann::json& j, std::string_view what) {
  if (!j.is_object() || !j.contains("format") || j["format"] != kIndexFormat) {
    throw CorruptIndex(std::string(what) + ": unsupported or missing \"format\"");
  }
}

nlohmann::json parse_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CorruptIndex(path.string() + ": " + e.what());
  }
}

}  // namespace

double InvertedIndex::idf(const std::string& term) const {
  const auto it = df.find(term);
  if (it == df.end() || it->second == 0) return 0.0;
  return std::log(static_cast<double>(N) / static_cast<double>(it->second));
}

InvertedIndex build_inverted_index(const std::vector<Document>& corpus, const textprep::StopWordList& stoplist) {
  if (corpus.empty()) throw EmptyCorpus();
  InvertedIndex idx;
  idx.N = corpus.size();
  idx.stoplist = stoplist;

  std::map<std::string, std::map<std::string, unsigned>> tf_by_doc;
  for (const auto& doc : corpus) {
    if (tf_by_doc.contains(doc.doc_id)) throw DuplicateDocId(doc.doc_id);
    auto& counts = tf_by_doc[doc.doc_id];
    for (const auto& s : textprep::stems_of(doc.body, stoplist)) ++counts[s];
  }
  for (const auto& [doc_id, counts] : tf_by_doc) {
    for (const auto& [term, tf] : counts) idx.postings[term].push_back({doc_id, tf});
  }
  for (const auto& [term, list] : idx.postings) idx.df[term] = list.size();
  for (const auto& [doc_id, counts] : tf_by_doc) {
    double sum = 0.0;
    for (const auto& [term, tf] : counts) {
      const double w = tf * idx.idf(term);
      sum += w * w;
    }
    idx.norms[doc_id] = std::sqrt(sum);
  }
  return idx;
}

void verify(const InvertedIndex& idx) {
  if (idx.df.size() != idx.postings.size()) throw CorruptIndex("df and postings cover different terms");
  for (const auto& [term, list] : idx.postings) {
    const auto it = idx.df.find(term);
    if (it == idx.df.end() || it->second != list.size()) {
      throw CorruptIndex("df of '" + term + "' does not match its postings");
    }
    if (list.empty() || list.size() > idx.N) throw CorruptIndex("df of '" + term + "' out of range");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].tf == 0) throw CorruptIndex("zero tf in postings of '" + term + "'");
      if (i > 0 && !(list[i - 1].doc_id < list[i].doc_id)) {
        throw CorruptIndex("postings of '" + term + "' not strictly ordered");
      }
      if (!idx.norms.contains(list[i].doc_id)) throw CorruptIndex("no norm for " + list[i].doc_id);
    }
  }
  if (idx.norms.size() != idx.N) throw CorruptIndex("norm count differs from N");
}

Lexicon build_lexicon(const ontology::Ontology& ont, const textprep::StopWordList& stoplist) {
  Lexicon lexicon;
  for (const auto& [c, info] : ont.classes()) {
    std::vector<std::string> terms{info.label};
    terms.insert(terms.end(), info.synonyms.begin(), info.synonyms.end());
    for (const auto& t : terms) {
      const auto key = join(textprep::stems_of(t, stoplist));
      if (!key.empty()) lexicon[key].insert(c);
    }
  }
  return lexicon;
}

std::vector<LexiconMatch> match_lexicon(const std::vector<std::string>& stems, const Lexicon& lexicon) {
  std::size_t longest = 0;
  for (const auto& [term, classes] : lexicon) {
    longest = std::max<std::size_t>(longest, 1 + std::count(term.begin(), term.end(), ' '));
  }
  std::vector<LexiconMatch> out;
  std::size_t i = 0;
  while (i < stems.size()) {
    bool matched = false;
    for (std::size_t len = std::min(longest, stems.size() - i); len > 0; --len) {
      const auto key = join(std::vector<std::string>(stems.begin() + i, stems.begin() + i + len));
      if (lexicon.contains(key)) {
        out.push_back({key, i, len});
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) ++i;
  }
  return out;
}

std::vector<Annotation> annotate(const std::vector<Document>& corpus, const Lexicon& lexicon,
                                 const textprep::StopWordList& stoplist) {
  std::map<std::pair<std::string, ClassId>, Annotation> by_key;
  for (const auto& doc : corpus) {
    for (const auto& m : match_lexicon(textprep::stems_of(doc.body, stoplist), lexicon)) {
      for (const auto& c : lexicon.at(m.term)) {
        auto& a = by_key[{doc.doc_id, c}];
        a.doc_id = doc.doc_id;
        a.cls = c;
        a.evidence.push_back(m.term);
        a.strength = static_cast<unsigned>(a.evidence.size());
      }
    }
  }
  std::vector<Annotation> out;
  out.reserve(by_key.size());
  for (auto& [key, a] : by_key) out.push_back(std::move(a));
  return out;
}

ConceptIndex build_concept_index(const std::vector<Annotation>& annotations, Lexicon lexicon) {
  ConceptIndex cidx;
  cidx.lexicon = std::move(lexicon);
  for (const auto& a : annotations) {
    std::set<std::string> distinct(a.evidence.begin(), a.evidence.end());
    auto& list = cidx.by_concept[a.cls];
    const auto existing = std::find_if(list.begin(), list.end(),
                                       [&](const ConceptPosting& p) { return p.doc_id == a.doc_id; });
    if (existing != list.end()) {
      existing->strength += a.strength;
      distinct.insert(existing->evidence.begin(), existing->evidence.end());
      existing->evidence.assign(distinct.begin(), distinct.end());
    } else {
      list.push_back({a.doc_id, a.strength, {distinct.begin(), distinct.end()}});
    }
  }
  for (auto& [c, list] : cidx.by_concept) {
    std::sort(list.begin(), list.end(), [](const ConceptPosting& x, const ConceptPosting& y) {
      if (x.strength != y.strength) return x.strength > y.strength;
      return x.doc_id < y.doc_id;
    });
  }
  return cidx;
}

nlohmann::json to_json(const InvertedIndex& idx) {
  nlohmann::json postings = nlohmann::json::object();
  for (const auto& [term, list] : idx.postings) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : list) arr.push_back({p.doc_id, p.tf});
    postings[term] = arr;
  }
  nlohmann::json stop = nlohmann::json::array();
  for (const auto& w : idx.stoplist.words()) stop.push_back(w);
  return {{"format", kIndexFormat}, {"N", idx.N},         {"df", idx.df},
          {"postings", postings},  {"norms", idx.norms}, {"stoplist", stop}};
}

InvertedIndex inverted_index_from_json(const nlohmann::json& j) {
  check_format(j, "inverted index");
  InvertedIndex idx;
  try {
    idx.N = j.at("N").get<std::size_t>();
    idx.df = j.at("df").get<std::map<std::string, std::size_t>>();
    for (const auto& [term, arr] : j.at("postings").items()) {
      auto& list = idx.postings[term];
      for (const auto& p : arr) list.push_back({p.at(0).get<std::string>(), p.at(1).get<unsigned>()});
    }
    idx.norms = j.at("norms").get<std::map<std::string, double>>();
    idx.stoplist = textprep::StopWordList(j.at("stoplist").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw CorruptIndex(std::string("inverted index: ") + e.what());
  }
  verify(idx);
  return idx;
}

nlohmann::json to_json(const ConceptIndex& cidx) {
  nlohmann::json lexicon = nlohmann::json::object();
  for (const auto& [term, classes] : cidx.lexicon) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : classes) arr.push_back(c.iri);
    lexicon[term] = arr;
  }
  nlohmann::json by_concept = nlohmann::json::object();
  for (const auto& [c, list] : cidx.by_concept) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : list) {
      arr.push_back({{"doc_id", p.doc_id}, {"strength", p.strength}, {"evidence", p.evidence}});
    }
    by_concept[c.iri] = arr;
  }
  return {{"format", kIndexFormat}, {"lexicon", lexicon}, {"by_concept", by_concept}};
}

ConceptIndex concept_index_from_json(const nlohmann::json& j) {
  check_format(j, "concept index");
  ConceptIndex cidx;
  try {
    for (const auto& [term, arr] : j.at("lexicon").items()) {
      auto& classes = cidx.lexicon[term];
      for (const auto& iri : arr) classes.insert(ClassId{iri.get<std::string>()});
    }
    for (const auto& [iri, arr] : j.at("by_concept").items()) {
      auto& list = cidx.by_concept[ClassId{iri}];
      for (const auto& p : arr) {
        list.push_back({p.at("doc_id").get<std::string>(), p.at("strength").get<unsigned>(),
                        p.at("evidence").get<std::vector<std::string>>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw CorruptIndex(std::string("concept index: ") + e.what());
  }
  return cidx;
}

std::string dump(const nlohmann::json& j) { return j.dump(1) + "\n"; }

InvertedIndex load_inverted_index(const std::filesystem::path& path) {
  return inverted_index_from_json(parse_file(path));
}

ConceptIndex load_concept_index(const std::filesystem::path& path) {
  return concept_index_from_json(parse_file(path));
}

std::vector<TermProposal> propose_terms(const InvertedIndex& idx, const ConceptIndex& cidx,
                                        std::size_t per_concept) {
  std::set<std::string> known;
  for (const auto& [term, classes] : cidx.lexicon) {
    std::size_t start = 0;
    while (start <= term.size()) {
      const auto end = std::min(term.find(' ', start), term.size());
      known.insert(term.substr(start, end - start));
      start = end + 1;
    }
  }
  std::map<std::string, std::vector<std::pair<std::string, unsigned>>> terms_by_doc;
  for (const auto& [term, list] : idx.postings) {
    for (const auto& p : list) terms_by_doc[p.doc_id].emplace_back(term, p.tf);
  }

  std::vector<TermProposal> out;
  for (const auto& [c, list] : cidx.by_concept) {
    std::map<std::string, double> score;
    for (const auto& posting : list) {
      for (const auto& [term, tf] : terms_by_doc[posting.doc_id]) {
        if (!known.contains(term)) score[term] += tf * idx.idf(term);
      }
    }
    std::vector<std::pair<std::string, double>> ranked;
    for (const auto& [term, s] : score) {
      if (s > 0) ranked.emplace_back(term, s);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (ranked.size() > per_concept) ranked.resize(per_concept);
    out.push_back({c, std::move(ranked)});
  }
  return out;
}

}  // namespace semsearch::indexer
