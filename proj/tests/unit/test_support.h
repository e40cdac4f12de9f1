#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("semsearch-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

// Builds a fixture web directory: url -> html body (or "status=NNN").
inline void write_fixture_web(const std::filesystem::path& dir,
                              const std::map<std::string, std::string>& pages) {
  std::string routes;
  int n = 0;
  for (const auto& [url, body] : pages) {
    if (body.starts_with("status=")) {
      routes += url + " " + body + "\n";
      continue;
    }
    const auto file = "page" + std::to_string(n++) + ".html";
    write_text(dir / file, body);
    routes += url + " " + file + "\n";
  }
  write_text(dir / "routes.txt", routes);
}

inline std::string links_page(const std::vector<std::string>& hrefs, const std::string& text = "") {
  std::string html = "<html><body><p>" + text + "</p>";
  for (const auto& h : hrefs) html += "<a href=\"" + h + "\">link</a>";
  return html + "</body></html>";
}
