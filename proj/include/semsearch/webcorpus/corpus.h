#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semsearch::webcorpus {

struct Document {
  std::string doc_id;
  std::string url;
  std::string title;
  std::string body;

  bool operator==(const Document&) const = default;
};

// First 16 hex characters of sha256(canonical_url).
std::string doc_id_for(std::string_view canonical_url);

Document make_document(const std::string& canonical_url, std::string_view html);

struct ManifestRow {
  std::string doc_id;
  std::string url;
  std::string title;
  std::string path;  // relative to the corpus directory

  bool operator==(const ManifestRow&) const = default;
};

inline constexpr std::string_view kCorpusManifestName = "manifest.jsonl";

// Writes <doc_id>.txt per document plus manifest.jsonl. Throws IoFailure.
std::vector<ManifestRow> store_corpus(const std::vector<Document>& documents,
                                      const std::filesystem::path& directory);

std::vector<ManifestRow> read_corpus_manifest(const std::filesystem::path& directory);

// Documents in manifest order.
std::vector<Document> load_corpus(const std::filesystem::path& directory);

}  // namespace semsearch::webcorpus
