#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace samurai {

/// Every failure the engine can report. Grouped by the exit-code class the
/// CLI maps them to (see error_category()).
enum class ErrorCode {
  // configuration
  InvalidArgument,
  MissingRoot,
  // data
  EmptyDataset,
  MalformedEntry,
  DecodeError,
  EncodeError,
  Utf8Error,
  EmptyMask,
  EmptyRefinedMask,
  ParseError,
  DimensionMismatch,
  DuplicateRecord,
  ZeroVector,
  PolarityMismatch,
  MissingEmbedding,
  SceneMismatch,
  CatalogMismatch,
  MissingTruth,
  UnknownScene,
  EmptyResults,
  InfeasibleMargin,
  Io,
};

enum class ErrorCategory { Config, Data };

std::string_view to_string(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace samurai
