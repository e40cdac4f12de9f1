#include "semsearch/webcorpus/corpus.h"

#include <json.hpp>
#include <set>

#include "semsearch/common/error.h"
#include "semsearch/common/files.h"
#include "semsearch/common/hash.h"
#include "semsearch/webcorpus/html.h"

namespace semsearch::webcorpus {

std::string doc_id_for(std::string_view canonical_url) {
  return sha256_hex(canonical_url).substr(0, 16);
}

Document make_document(const std::string& canonical_url, std::string_view html) {
  auto text = extract_text(html);
  return {doc_id_for(canonical_url), canonical_url, std::move(text.title), std::move(text.body)};
}

std::vector<ManifestRow> store_corpus(const std::vector<Document>& documents,
                                      const std::filesystem::path& directory) {
  std::set<std::string> ids;
  std::vector<ManifestRow> rows;
  std::string manifest;
  for (const auto& doc : documents) {
    if (!ids.insert(doc.doc_id).second) throw Error("duplicate doc_id " + doc.doc_id);
    ManifestRow row{doc.doc_id, doc.url, doc.title, doc.doc_id + ".txt"};
    write_file_atomic(directory / row.path, doc.body);
    manifest += nlohmann::json{{"doc_id", row.doc_id},
                               {"url", row.url},
                               {"title", row.title},
                               {"path", row.path}}
                    .dump() +
                "\n";
    rows.push_back(std::move(row));
  }
  write_file_atomic(directory / kCorpusManifestName, manifest);
  return rows;
}

std::vector<ManifestRow> read_corpus_manifest(const std::filesystem::path& directory) {
  const auto path = directory / kCorpusManifestName;
  const auto text = read_file(path);
  std::vector<ManifestRow> rows;
  std::size_t start = 0;
  while (start < text.size()) {
    auto eol = text.find('\n', start);
    if (eol == std::string::npos) eol = text.size();
    const auto line = std::string_view(text).substr(start, eol - start);
    if (!line.empty()) {
      try {
        const auto j = nlohmann::json::parse(line);
        rows.push_back({j.at("doc_id").get<std::string>(), j.at("url").get<std::string>(),
                        j.at("title").get<std::string>(), j.at("path").get<std::string>()});
      } catch (const nlohmann::json::exception& e) {
        throw IoFailure(path.string(), std::string("bad manifest row (") + e.what() + ")");
      }
    }
    start = eol + 1;
  }
  return rows;
}

std::vector<Document> load_corpus(const std::filesystem::path& directory) {
  std::vector<Document> docs;
  for (auto& row : read_corpus_manifest(directory)) {
    docs.push_back({row.doc_id, row.url, row.title, read_file(directory / row.path)});
  }
  return docs;
}

}  // namespace semsearch::webcorpus
