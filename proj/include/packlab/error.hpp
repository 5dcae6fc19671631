#pragma once

#include <stdexcept>
#include <string>

namespace packlab {

enum class ErrorCode {
    UnknownEdge,
    UnknownVertex,
    DuplicateId,
    ClippingViolation,
    ClippedItem,
    ParseError,
    Infeasible,
    Unbounded,
    InsufficientRoom,
    NotMonotoneOrderable,
    NonUnitDemand,
    NotMatchingInstance,
    NotRankTwo,
    ParallelEdges,
    MalformedPath,
    ParityConflict,
    InternalInvariantViolation,
    IterationLimit,
    OracleGuaranteeViolated,
    TooLarge,
    UnsupportedOrder,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::UnknownEdge: return "unknown_edge";
        case ErrorCode::UnknownVertex: return "unknown_vertex";
        case ErrorCode::DuplicateId: return "duplicate_id";
        case ErrorCode::ClippingViolation: return "clipping_violation";
        case ErrorCode::ClippedItem: return "clipped_item";
        case ErrorCode::ParseError: return "parse_error";
        case ErrorCode::Infeasible: return "infeasible";
        case ErrorCode::Unbounded: return "unbounded";
        case ErrorCode::InsufficientRoom: return "insufficient_room";
        case ErrorCode::NotMonotoneOrderable: return "not_monotone_orderable";
        case ErrorCode::NonUnitDemand: return "non_unit_demand";
        case ErrorCode::NotMatchingInstance: return "not_matching_instance";
        case ErrorCode::NotRankTwo: return "not_rank_two";
        case ErrorCode::ParallelEdges: return "parallel_edges";
        case ErrorCode::MalformedPath: return "malformed_path";
        case ErrorCode::ParityConflict: return "parity_conflict";
        case ErrorCode::InternalInvariantViolation: return "internal_invariant_violation";
        case ErrorCode::IterationLimit: return "iteration_limit";
        case ErrorCode::OracleGuaranteeViolated: return "oracle_guarantee_violated";
        case ErrorCode::TooLarge: return "too_large";
        case ErrorCode::UnsupportedOrder: return "unsupported_order";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + detail), code_(code), detail_(detail) {}

    ErrorCode code() const { return code_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

}  // namespace packlab
