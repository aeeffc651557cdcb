#include "samurai/error.hpp"

namespace samurai {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::MalformedEntry: return "MalformedEntry";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::EncodeError: return "EncodeError";
    case ErrorCode::Utf8Error: return "Utf8Error";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::EmptyRefinedMask: return "EmptyRefinedMask";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateRecord: return "DuplicateRecord";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::PolarityMismatch: return "PolarityMismatch";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::SceneMismatch: return "SceneMismatch";
    case ErrorCode::CatalogMismatch: return "CatalogMismatch";
    case ErrorCode::MissingTruth: return "MissingTruth";
    case ErrorCode::UnknownScene: return "UnknownScene";
    case ErrorCode::EmptyResults: return "EmptyResults";
    case ErrorCode::InfeasibleMargin: return "InfeasibleMargin";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::MissingRoot:
      return ErrorCategory::Config;
    default:
      return ErrorCategory::Data;
  }
}

}  // namespace samurai
