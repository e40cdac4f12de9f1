#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "semsearch/common/error.h"

namespace semsearch::webcorpus {

class MalformedUrl : public Error {
 public:
  explicit MalformedUrl(const std::string& what) : Error("malformed URL: " + what) {}
};

// Components of a URI reference (RFC 3986 section 3). `has_*` flags keep an
// empty component distinct from an absent one.
struct UrlParts {
  std::string scheme;
  bool has_authority = false;
  std::string userinfo;
  std::string host;
  std::string port;
  std::string path;
  bool has_query = false;
  std::string query;
  bool has_fragment = false;
  std::string fragment;

  std::string authority() const;
  // Recomposition; fragment included when present.
  std::string to_string() const;
};

UrlParts parse_url_reference(std::string_view ref);

std::string remove_dot_segments(std::string_view path);

// Resolves `url` against `base` (when relative) and returns the canonical
// absolute form: scheme and host lowercased, default port and fragment
// dropped, dot segments removed, empty path on an authority becomes "/".
std::string normalize_url(std::string_view url, std::optional<std::string_view> base = std::nullopt);

// Lowercased host of a canonical URL, empty when there is none.
std::string host_of(std::string_view canonical_url);

bool is_http_scheme(std::string_view canonical_url);

}  // namespace semsearch::webcorpus
