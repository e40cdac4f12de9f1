#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "semsearch/ontology/ontology.h"
#include "semsearch/textprep/textprep.h"
#include "semsearch/webcorpus/corpus.h"

namespace semsearch::indexer {

using ontology::ClassId;
using webcorpus::Document;

class EmptyCorpus : public Error {
 public:
  EmptyCorpus() : Error("cannot index an empty corpus") {}
};

class DuplicateDocId : public Error {
 public:
  explicit DuplicateDocId(const std::string& id) : Error("duplicate doc_id " + id) {}
};

// Thrown when a persisted index fails its self-consistency checks.
class CorruptIndex : public Error {
 public:
  using Error::Error;
};

struct Posting {
  std::string doc_id;
  unsigned tf = 0;
  bool operator==(const Posting&) const = default;
};

// tf-idf index. weight(t, d) = tf(t, d) * ln(N / df(t)); norms are the
// Euclidean lengths of the document weight vectors and may be 0 when every
// term of a document occurs in all documents.
struct InvertedIndex {
  std::size_t N = 0;
  std::map<std::string, std::size_t> df;
  std::map<std::string, std::vector<Posting>> postings;  // doc_id ascending
  std::map<std::string, double> norms;                    // every doc_id
  textprep::StopWordList stoplist;

  double idf(const std::string& term) const;
  bool operator==(const InvertedIndex&) const = default;
};

InvertedIndex build_inverted_index(const std::vector<Document>& corpus, const textprep::StopWordList& stoplist);

// Throws CorruptIndex describing the first inconsistency found.
void verify(const InvertedIndex& idx);

// Stemmed term (space-joined stems for multi-word terms) -> classes.
using Lexicon = std::map<std::string, std::set<ClassId>>;

// Built from every class label and synonym, preprocessed with `stoplist`.
Lexicon build_lexicon(const ontology::Ontology& ont, const textprep::StopWordList& stoplist);

struct LexiconMatch {
  std::string term;
  std::size_t position = 0;  // index of the first stem
  std::size_t length = 0;    // number of stems
};

// Greedy leftmost-longest matching of lexicon terms over a stem sequence.
std::vector<LexiconMatch> match_lexicon(const std::vector<std::string>& stems, const Lexicon& lexicon);

struct Annotation {
  std::string doc_id;
  ClassId cls;
  std::vector<std::string> evidence;  // matched term, once per occurrence
  unsigned strength = 0;              // evidence.size()
  bool operator==(const Annotation&) const = default;
};

// Sorted by (doc_id, concept).
std::vector<Annotation> annotate(const std::vector<Document>& corpus, const Lexicon& lexicon,
                                 const textprep::StopWordList& stoplist);

struct ConceptPosting {
  std::string doc_id;
  unsigned strength = 0;
  std::vector<std::string> evidence;  // distinct matched terms, sorted
  bool operator==(const ConceptPosting&) const = default;
};

struct ConceptIndex {
  // Per concept: strength descending, then doc_id ascending.
  std::map<ClassId, std::vector<ConceptPosting>> by_concept;
  Lexicon lexicon;
  bool operator==(const ConceptIndex&) const = default;
};

ConceptIndex build_concept_index(const std::vector<Annotation>& annotations, Lexicon lexicon);

inline constexpr int kIndexFormat = 1;

nlohmann::json to_json(const InvertedIndex& idx);
InvertedIndex inverted_index_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ConceptIndex& cidx);
ConceptIndex concept_index_from_json(const nlohmann::json& j);

// Canonical pretty-printed JSON text, newline terminated.
std::string dump(const nlohmann::json& j);

InvertedIndex load_inverted_index(const std::filesystem::path& path);
ConceptIndex load_concept_index(const std::filesystem::path& path);

struct TermProposal {
  ClassId cls;
  std::vector<std::pair<std::string, double>> terms;  // stem, summed tf-idf weight
};

// For each annotated concept, the highest-weighted stems across its
// documents that are not yet part of any lexicon term. Meant for human
// review; nothing is written back to the ontology.
std::vector<TermProposal> propose_terms(const InvertedIndex& idx, const ConceptIndex& cidx,
                                        std::size_t per_concept);

}  // namespace semsearch::indexer
