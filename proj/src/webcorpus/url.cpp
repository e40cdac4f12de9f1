#include "semsearch/webcorpus/url.h"

#include <algorithm>
#include <cctype>
#include <vector>

namespace semsearch::webcorpus {

namespace {

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

bool valid_scheme(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
  });
}

// Percent-encodes bytes that may not appear raw in a URI and uppercases the
// hex digits of existing escapes.
std::string clean_reference(std::string_view raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    if (c < 0x20 || c == 0x7f) {
      if (c == '\n' || c == '\r' || c == '\t') continue;  // stripped, as browsers do
      throw MalformedUrl("control character in reference");
    }
    if (c == '%' && i + 2 < raw.size() &&
        std::isxdigit(static_cast<unsigned char>(raw[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(raw[i + 2]))) {
      out.push_back('%');
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(raw[i + 1]))));
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(raw[i + 2]))));
      i += 2;
      continue;
    }
    const bool needs_escape = c >= 0x80 || c == ' ' || c == '"' || c == '<' || c == '>' ||
                              c == '\\' || c == '^' || c == '`' || c == '{' || c == '|' ||
                              c == '}' || c == '%';
    if (needs_escape) {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0x0f]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string merge_paths(const UrlParts& base, std::string_view ref_path) {
  if (base.has_authority && base.path.empty()) return "/" + std::string(ref_path);
  const auto slash = base.path.rfind('/');
  if (slash == std::string::npos) return std::string(ref_path);
  return base.path.substr(0, slash + 1) + std::string(ref_path);
}

// RFC 3986 section 5.2.2, strict variant.
UrlParts resolve(const UrlParts& base, const UrlParts& ref) {
  UrlParts t;
  if (!ref.scheme.empty()) {
    t = ref;
    t.path = remove_dot_segments(ref.path);
    return t;
  }
  t.scheme = base.scheme;
  if (ref.has_authority) {
    t.has_authority = true;
    t.userinfo = ref.userinfo;
    t.host = ref.host;
    t.port = ref.port;
    t.path = remove_dot_segments(ref.path);
    t.has_query = ref.has_query;
    t.query = ref.query;
  } else {
    t.has_authority = base.has_authority;
    t.userinfo = base.userinfo;
    t.host = base.host;
    t.port = base.port;
    if (ref.path.empty()) {
      t.path = base.path;
      t.has_query = ref.has_query || base.has_query;
      t.query = ref.has_query ? ref.query : base.query;
    } else {
      t.path = ref.path.front() == '/' ? remove_dot_segments(ref.path)
                                       : remove_dot_segments(merge_paths(base, ref.path));
      t.has_query = ref.has_query;
      t.query = ref.query;
    }
  }
  t.has_fragment = ref.has_fragment;
  t.fragment = ref.fragment;
  return t;
}

std::string default_port(std::string_view scheme) {
  if (scheme == "http") return "80";
  if (scheme == "https") return "443";
  if (scheme == "ftp") return "21";
  return {};
}

}  // namespace

std::string UrlParts::authority() const {
  std::string out;
  if (!userinfo.empty()) out += userinfo + "@";
  out += host;
  if (!port.empty()) out += ":" + port;
  return out;
}

std::string UrlParts::to_string() const {
  std::string out;
  if (!scheme.empty()) out += scheme + ":";
  if (has_authority) out += "//" + authority();
  out += path;
  if (has_query) out += "?" + query;
  if (has_fragment) out += "#" + fragment;
  return out;
}

UrlParts parse_url_reference(std::string_view ref) {
  UrlParts parts;
  // scheme: everything before the first ':' if no '/', '?' or '#' precedes it
  const auto colon = ref.find(':');
  const auto delim = ref.find_first_of("/?#");
  if (colon != std::string_view::npos && (delim == std::string_view::npos || colon < delim)) {
    const auto scheme = ref.substr(0, colon);
    if (!valid_scheme(scheme)) throw MalformedUrl("invalid scheme '" + std::string(scheme) + "'");
    parts.scheme.assign(scheme);
    ref.remove_prefix(colon + 1);
  }
  if (const auto hash = ref.find('#'); hash != std::string_view::npos) {
    parts.has_fragment = true;
    parts.fragment.assign(ref.substr(hash + 1));
    ref = ref.substr(0, hash);
  }
  if (const auto q = ref.find('?'); q != std::string_view::npos) {
    parts.has_query = true;
    parts.query.assign(ref.substr(q + 1));
    ref = ref.substr(0, q);
  }
  if (ref.starts_with("//")) {
    ref.remove_prefix(2);
    const auto end = ref.find('/');
    auto authority = ref.substr(0, end);
    ref = end == std::string_view::npos ? std::string_view{} : ref.substr(end);
    parts.has_authority = true;
    if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
      parts.userinfo.assign(authority.substr(0, at));
      authority.remove_prefix(at + 1);
    }
    std::size_t host_end = authority.size();
    if (authority.starts_with('[')) {
      const auto close = authority.find(']');
      if (close == std::string_view::npos) throw MalformedUrl("unterminated IPv6 literal");
      host_end = close + 1;
    } else if (const auto pc = authority.rfind(':'); pc != std::string_view::npos) {
      host_end = pc;
    }
    parts.host.assign(authority.substr(0, host_end));
    if (host_end < authority.size()) {
      if (authority[host_end] != ':') throw MalformedUrl("garbage after host");
      parts.port.assign(authority.substr(host_end + 1));
      if (!std::all_of(parts.port.begin(), parts.port.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw MalformedUrl("non-numeric port '" + parts.port + "'");
      }
    }
  }
  parts.path.assign(ref);
  return parts;
}

std::string remove_dot_segments(std::string_view input) {
  std::string in(input);
  std::string out;
  while (!in.empty()) {
    if (in.starts_with("../")) {
      in.erase(0, 3);
    } else if (in.starts_with("./")) {
      in.erase(0, 2);
    } else if (in.starts_with("/./")) {
      in.erase(0, 2);
    } else if (in == "/.") {
      in = "/";
    } else if (in.starts_with("/../") || in == "/..") {
      in = in.size() == 3 ? std::string("/") : in.substr(3);
      const auto slash = out.rfind('/');
      out.erase(slash == std::string::npos ? 0 : slash);
    } else if (in == "." || in == "..") {
      in.clear();
    } else {
      const auto next = in.find('/', in.front() == '/' ? 1 : 0);
      out += in.substr(0, next);
      in.erase(0, next == std::string::npos ? in.size() : next);
    }
  }
  return out;
}

std::string normalize_url(std::string_view url, std::optional<std::string_view> base) {
  const auto trimmed = trim(url);
  if (trimmed.empty()) throw MalformedUrl("empty reference");
  const auto ref = parse_url_reference(clean_reference(trimmed));
  UrlParts target;
  if (!ref.scheme.empty()) {
    target = ref;
    target.path = remove_dot_segments(ref.path);
  } else {
    if (!base) throw MalformedUrl("relative reference '" + std::string(trimmed) + "' without base");
    const auto base_parts = parse_url_reference(clean_reference(trim(*base)));
    if (base_parts.scheme.empty()) throw MalformedUrl("base is not absolute");
    target = resolve(base_parts, ref);
  }
  std::transform(target.scheme.begin(), target.scheme.end(), target.scheme.begin(), lower);
  std::transform(target.host.begin(), target.host.end(), target.host.begin(), lower);
  if (!target.port.empty()) {
    const auto digits = target.port.find_first_not_of('0');
    target.port = digits == std::string::npos ? "0" : target.port.substr(digits);
    if (target.port == default_port(target.scheme)) target.port.clear();
  }
  if ((target.scheme == "http" || target.scheme == "https") &&
      (!target.has_authority || target.host.empty())) {
    throw MalformedUrl("missing host in '" + std::string(trimmed) + "'");
  }
  if (target.has_authority && target.path.empty()) target.path = "/";
  target.has_fragment = false;
  target.fragment.clear();
  return target.to_string();
}

std::string host_of(std::string_view canonical_url) {
  try {
    return parse_url_reference(canonical_url).host;
  } catch (const MalformedUrl&) {
    return {};
  }
}

bool is_http_scheme(std::string_view canonical_url) {
  return canonical_url.starts_with("http://") || canonical_url.starts_with("https://");
}

}  // namespace semsearch::webcorpus
