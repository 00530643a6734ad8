#pragma once

#include <stdexcept>
#include <string>

namespace qh {

/// Root of every error the toolkit raises. `kind()` is a stable machine-readable tag.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define QH_DEFINE_ERROR(Name, tag) \
  class Name : public Error {      \
   public:                         \
    explicit Name(const std::string& what) : Error(tag, what) {} \
  };

QH_DEFINE_ERROR(InvalidInput, "invalid-input")
QH_DEFINE_ERROR(DomainViolation, "domain-violation")
QH_DEFINE_ERROR(CertificationError, "certification")
QH_DEFINE_ERROR(EvaluationError, "evaluation")
QH_DEFINE_ERROR(NoPathError, "no-path")
QH_DEFINE_ERROR(SolverStalled, "stalled")
QH_DEFINE_ERROR(SolverError, "solver")
QH_DEFINE_ERROR(ConfigurationError, "configuration")
QH_DEFINE_ERROR(FieldError, "field")
QH_DEFINE_ERROR(TruncatedContour, "truncated-contour")
QH_DEFINE_ERROR(ResolutionError, "resolution")
QH_DEFINE_ERROR(DependencyError, "dependency")
QH_DEFINE_ERROR(ProbeRejected, "probe-rejected")
QH_DEFINE_ERROR(RenderError, "render")
QH_DEFINE_ERROR(SchemaError, "schema")

#undef QH_DEFINE_ERROR

}  // namespace qh
