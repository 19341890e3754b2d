#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ectsum {

// Base of every error raised by the library. kind() is a stable identifier
// used in structured CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define ECTSUM_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  };

ECTSUM_DEFINE_ERROR(ConfigError)
ECTSUM_DEFINE_ERROR(FormatError)
ECTSUM_DEFINE_ERROR(IoError)
ECTSUM_DEFINE_ERROR(ShapeError)
ECTSUM_DEFINE_ERROR(MissingEmbedding)
ECTSUM_DEFINE_ERROR(FallbackFailed)
ECTSUM_DEFINE_ERROR(SplitTooSmall)
ECTSUM_DEFINE_ERROR(BackendViolation)
ECTSUM_DEFINE_ERROR(TrainingDiverged)
ECTSUM_DEFINE_ERROR(MissingInput)

#undef ECTSUM_DEFINE_ERROR

class UnknownPlaceholder : public Error {
 public:
  explicit UnknownPlaceholder(std::string name)
      : Error("UnknownPlaceholder", "unknown placeholder [" + name + "]"),
        name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class AmbiguousEvent : public Error {
 public:
  explicit AmbiguousEvent(std::vector<std::string> ids)
      : Error("AmbiguousEvent", describe(ids)), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const noexcept { return ids_; }

 private:
  static std::string describe(const std::vector<std::string>& ids) {
    std::string s = "multiple transcripts for one (company, date) event:";
    for (const auto& id : ids) s += " " + id;
    return s;
  }
  std::vector<std::string> ids_;
};

}  // namespace ectsum
