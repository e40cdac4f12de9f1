#pragma once

#include <stdexcept>
#include <string>

namespace semsearch {

// Root of every exception the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A read or write on the filesystem failed.
class IoFailure : public Error {
 public:
  IoFailure(std::string path, const std::string& what)
      : Error(what + ": " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace semsearch
