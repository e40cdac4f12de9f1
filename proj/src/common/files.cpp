#include "semsearch/common/files.h"

#include <fstream>
#include <sstream>
#include <system_error>

#include "semsearch/common/error.h"

namespace semsearch {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoFailure(path.string(), "cannot open for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoFailure(path.string(), "read failed");
  }
  return buffer.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoFailure(path.parent_path().string(), "cannot create directory");
    }
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoFailure(tmp.string(), "cannot open for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      throw IoFailure(tmp.string(), "write failed");
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoFailure(path.string(), "cannot rename into place");
  }
}

}  // namespace semsearch
