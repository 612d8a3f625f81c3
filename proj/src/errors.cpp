#include "supercas/errors.hpp"

namespace supercas {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameters: return "InvalidParameters";
    case ErrorCode::PresentationMismatch: return "PresentationMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::FormParityMismatch: return "FormParityMismatch";
    case ErrorCode::NonDiagonalAction: return "NonDiagonalAction";
    case ErrorCode::ZeroOnRoot: return "ZeroOnRoot";
    case ErrorCode::MissingData: return "MissingData";
    case ErrorCode::InfinitePartitions: return "InfinitePartitions";
    case ErrorCode::NonScalarA: return "NonScalarA";
    case ErrorCode::GradingIncompatible: return "GradingIncompatible";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::OddCartan: return "OddCartan";
    case ErrorCode::NotAWeight: return "NotAWeight";
    case ErrorCode::OutOfCone: return "OutOfCone";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace supercas
