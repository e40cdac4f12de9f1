#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "semsearch/ontology/ontology.h"

namespace semsearch::ontology {

class OntologySyntaxError : public OntologyError {
 public:
  OntologySyntaxError(std::size_t line, const std::string& reason)
      : OntologyError("line " + std::to_string(line) + ": " + reason), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Parses the line-oriented authoring format, one statement per line:
//
//   ontology <http://example.org/health>
//   domain "health care"
//   depth "lightweight"
//   class Headache ⊂ Pain "headache" "head ache"
//   class TennisPlayer label "tennis player" < ProfessionalAthlete
//   property hasRemedy domain Disease range Remedy "treated with"
//   property hasPrimaryRemedy ⊂ hasRemedy
//   individual flu1 : Disease
//   fact flu1 hasSymptom fever1
//   fact flu1 hasNote "seasonal"
//   maxcard hasPrimaryRemedy Disease 1
//
// Names resolve to <base>#<Name>; `Thing` is owl:Thing; <...> is a full IRI.
// Without `label`, the label is the name split at case changes. Entities may
// be referenced before the line that declares them. '#' starts a comment.
Ontology parse_authoring(std::string_view text);
Ontology load_authoring(const std::filesystem::path& path);

}  // namespace semsearch::ontology
