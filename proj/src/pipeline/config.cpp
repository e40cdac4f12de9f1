#include "semsearch/pipeline/config.h"

#include <cctype>
#include <charconv>
#include <set>

#include "semsearch/common/files.h"

namespace semsearch::pipeline {

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  [[noreturn]] void fail(const std::string& reason) const {
    throw ConfigError("config line " + std::to_string(line_) + ": " + reason);
  }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ >= s_.size() || s_[pos_] == '#';
  }
  char peek() {
    skip_space();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string key() {
    skip_space();
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                s_[pos_] == '-' || s_[pos_] == '.')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a key");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string string() {
    expect('"');
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        if (++pos_ >= s_.size()) break;
        switch (s_[pos_]) {
          case 'n':
            out.push_back('\n');
            break;
          case 't':
            out.push_back('\t');
            break;
          case '"':
          case '\\':
            out.push_back(s_[pos_]);
            break;
          default:
            fail(std::string("unsupported escape \\") + s_[pos_]);
        }
        ++pos_;
      } else {
        out.push_back(s_[pos_++]);
      }
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  ConfigValue scalar() {
    if (peek() == '"') return string();
    const auto start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '#' &&
           s_[pos_] != ',' && s_[pos_] != ']') {
      ++pos_;
    }
    const auto word = s_.substr(start, pos_ - start);
    if (word == "true") return true;
    if (word == "false") return false;
    long long i = 0;
    if (auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), i);
        ec == std::errc() && p == word.data() + word.size() && !word.empty()) {
      return i;
    }
    double d = 0;
    if (auto [p, ec] = std::from_chars(word.data(), word.data() + word.size(), d);
        ec == std::errc() && p == word.data() + word.size() && !word.empty()) {
      return d;
    }
    fail("cannot read value '" + std::string(word) + "'");
  }

  // Reads string items of an array until ']' or end of line; returns true
  // once the closing bracket has been consumed.
  bool array_items(std::vector<std::string>& out) {
    for (;;) {
      if (at_end()) return false;
      if (peek() == ']') {
        ++pos_;
        return true;
      }
      if (peek() != '"') fail("arrays may only hold strings");
      out.push_back(string());
      if (peek() == ',') ++pos_;
    }
  }

  std::size_t pos_ = 0;

 private:
  std::string_view s_;
  std::size_t line_;
};

template <typename T>
const T* get(const ConfigTable& t, const std::string& key) {
  const auto it = t.find(key);
  if (it == t.end()) return nullptr;
  const auto* v = std::get_if<T>(&it->second);
  if (!v) throw ConfigError("config key '" + key + "' has the wrong type");
  return v;
}

double get_number(const ConfigTable& t, const std::string& key, double fallback) {
  const auto it = t.find(key);
  if (it == t.end()) return fallback;
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  if (const auto* i = std::get_if<long long>(&it->second)) return static_cast<double>(*i);
  throw ConfigError("config key '" + key + "' must be a number");
}

int get_int(const ConfigTable& t, const std::string& key, int fallback) {
  const auto* v = get<long long>(t, key);
  return v ? static_cast<int>(*v) : fallback;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

bool within(const std::filesystem::path& inner, const std::filesystem::path& outer) {
  const auto a = std::filesystem::weakly_canonical(inner);
  const auto b = std::filesystem::weakly_canonical(outer);
  auto ai = a.begin();
  for (auto bi = b.begin(); bi != b.end(); ++bi, ++ai) {
    if (bi->empty()) continue;
    if (ai == a.end() || *ai != *bi) return false;
  }
  return true;
}

}  // namespace

ConfigTable parse_config_text(std::string_view text) {
  ConfigTable table;
  std::string section;
  std::size_t line_no = 0;
  std::string pending_key;
  std::vector<std::string> pending_array;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    LineParser p(line, line_no);

    if (!pending_key.empty()) {
      if (p.array_items(pending_array)) {
        if (!p.at_end()) p.fail("unexpected text after array");
        table[pending_key] = std::move(pending_array);
        pending_array.clear();
        pending_key.clear();
      }
      if (end == text.size()) break;
      continue;
    }
    if (p.at_end()) {
      if (end == text.size()) break;
      continue;
    }
    if (p.peek() == '[') {
      ++p.pos_;
      section = p.key();
      p.expect(']');
      if (!p.at_end()) p.fail("unexpected text after section header");
    } else {
      const auto key = (section.empty() ? "" : section + ".") + p.key();
      if (table.contains(key)) p.fail("duplicate key '" + key + "'");
      p.expect('=');
      if (p.peek() == '[') {
        ++p.pos_;
        std::vector<std::string> items;
        if (p.array_items(items)) {
          table[key] = std::move(items);
        } else {
          pending_key = key;
          pending_array = std::move(items);
        }
      } else {
        table[key] = p.scalar();
      }
      if (!p.at_end()) p.fail("unexpected text after value");
    }
    if (end == text.size()) break;
  }
  if (!pending_key.empty()) throw ConfigError("unterminated array for '" + pending_key + "'");
  return table;
}

void PipelineConfig::validate() const {
  crawl.validate();
  if (ontology_file.empty()) throw ConfigError("ontology_file is required");
  if (artifacts_dir.empty()) throw ConfigError("artifacts_dir is required");
  if (fetcher == FetcherKind::Fixture) {
    if (fixture_dir.empty()) throw ConfigError("crawl.fixture_dir is required for the fixture fetcher");
    if (within(artifacts_dir, fixture_dir) || within(fixture_dir, artifacts_dir)) {
      throw ConfigError("artifacts_dir must be separate from crawl.fixture_dir");
    }
  }
  if (within(ontology_file, artifacts_dir)) throw ConfigError("ontology_file must not live inside artifacts_dir");
  if (ranking.cosine_weight < 0 || ranking.depth_decay < 0) {
    throw ConfigError("ranking constants must be nonnegative");
  }
}

PipelineConfig config_from_table(const ConfigTable& table, const std::filesystem::path& base_dir) {
  static const std::set<std::string> known = {
      "artifacts_dir",       "ontology_file",       "stopwords_file",    "crawl.seeds",
      "crawl.max_depth",     "crawl.max_pages",     "crawl.allowed_hosts", "crawl.politeness_delay_ms",
      "crawl.worker_count",  "crawl.fetcher",       "crawl.fixture_dir", "crawl.fetched_at",
      "ranking.cosine_weight", "ranking.depth_decay", "ranking.expand_upward"};
  for (const auto& [key, value] : table) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  PipelineConfig c;
  if (const auto* v = get<std::vector<std::string>>(table, "crawl.seeds")) c.crawl.seeds = *v;
  c.crawl.max_depth = get_int(table, "crawl.max_depth", c.crawl.max_depth);
  c.crawl.max_pages = get_int(table, "crawl.max_pages", c.crawl.max_pages);
  if (const auto* v = get<std::vector<std::string>>(table, "crawl.allowed_hosts")) c.crawl.allowed_hosts = *v;
  c.crawl.politeness_delay = std::chrono::milliseconds(get_int(table, "crawl.politeness_delay_ms", 0));
  c.crawl.worker_count = get_int(table, "crawl.worker_count", c.crawl.worker_count);
  if (const auto* v = get<std::string>(table, "crawl.fetcher")) {
    if (*v == "fixture") {
      c.fetcher = FetcherKind::Fixture;
    } else if (*v == "http") {
      c.fetcher = FetcherKind::Http;
    } else {
      throw ConfigError("crawl.fetcher must be \"fixture\" or \"http\"");
    }
  }
  if (const auto* v = get<std::string>(table, "crawl.fixture_dir")) c.fixture_dir = resolve(base_dir, *v);
  if (const auto* v = get<std::string>(table, "crawl.fetched_at")) c.fetched_at = *v;
  if (const auto* v = get<std::string>(table, "ontology_file")) c.ontology_file = resolve(base_dir, *v);
  if (const auto* v = get<std::string>(table, "stopwords_file")) {
    c.stopwords_file = *v == "default" ? *v : resolve(base_dir, *v).string();
  }
  if (const auto* v = get<std::string>(table, "artifacts_dir")) c.artifacts_dir = resolve(base_dir, *v);
  c.ranking.cosine_weight = get_number(table, "ranking.cosine_weight", c.ranking.cosine_weight);
  c.ranking.depth_decay = get_number(table, "ranking.depth_decay", c.ranking.depth_decay);
  if (const auto* v = get<bool>(table, "ranking.expand_upward")) c.ranking.expand_upward = *v;
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_table(parse_config_text(read_file(path)), path.parent_path());
}

}  // namespace semsearch::pipeline
