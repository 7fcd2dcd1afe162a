#include "qsobp/error.hpp"

namespace qsobp {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::SizeOverflow: return "SizeOverflow";
    case ErrorCode::IndexOutOfPartition: return "IndexOutOfPartition";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::EmptyCompatibleSet: return "EmptyCompatibleSet";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::IsFixedPoint: return "IsFixedPoint";
    case ErrorCode::OnCriticalLine: return "OnCriticalLine";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace qsobp
