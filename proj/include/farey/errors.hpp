#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace farey {

enum class ErrorKind {
  InvalidPoint,
  DegenerateArc,
  InvalidInput,
  Unsupported,
  InvalidSymbol,
  InvalidQuery,
  NotNormalized,
  InvalidLevel,
  LikelyInfiniteIndex,
  InvalidCut,
  InternalConsistency,
  InternalProgress,
  InvalidStage,
  ReductionStuck,
  Parse,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidPoint: return "invalid-point";
    case ErrorKind::DegenerateArc: return "degenerate-arc";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::InvalidSymbol: return "invalid-symbol";
    case ErrorKind::InvalidQuery: return "invalid-query";
    case ErrorKind::NotNormalized: return "not-normalized";
    case ErrorKind::InvalidLevel: return "invalid-level";
    case ErrorKind::LikelyInfiniteIndex: return "likely-infinite-index";
    case ErrorKind::InvalidCut: return "invalid-cut";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::InternalProgress: return "internal-progress";
    case ErrorKind::InvalidStage: return "invalid-stage";
    case ErrorKind::ReductionStuck: return "reduction-stuck";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

/// Single exception type for the library; `kind()` discriminates.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        index_(index) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Offending arc index, when the failure is attributable to one.
  std::optional<std::size_t> index() const noexcept { return index_; }

  /// True for failures that signal a bug rather than bad input.
  bool is_internal() const noexcept {
    return kind_ == ErrorKind::InternalConsistency ||
           kind_ == ErrorKind::InternalProgress ||
           kind_ == ErrorKind::ReductionStuck;
  }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
};

}  // namespace farey
