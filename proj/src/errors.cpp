#include "specflow/errors.hpp"

namespace specflow {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::PoleProximity: return "PoleProximity";
        case ErrorCode::EmptyMeasure: return "EmptyMeasure";
        case ErrorCode::NonConvergedInversion: return "NonConvergedInversion";
        case ErrorCode::NegativeDensity: return "NegativeDensity";
        case ErrorCode::QuadratureAccuracy: return "QuadratureAccuracy";
        case ErrorCode::EmptySupport: return "EmptySupport";
        case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
        case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
        case ErrorCode::ContinuationStall: return "ContinuationStall";
        case ErrorCode::SingularJacobian: return "SingularJacobian";
        case ErrorCode::CharacteristicDegenerate: return "CharacteristicDegenerate";
        case ErrorCode::CharacteristicBlowup: return "CharacteristicBlowup";
        case ErrorCode::ShootingFailure: return "ShootingFailure";
        case ErrorCode::CausticEncountered: return "CausticEncountered";
        case ErrorCode::InvalidRaneyParams: return "InvalidRaneyParams";
        case ErrorCode::DimensionOrder: return "DimensionOrder";
        case ErrorCode::AtomRoundingError: return "AtomRoundingError";
        case ErrorCode::DiscretizationTooCoarse: return "DiscretizationTooCoarse";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::MassDrift: return "MassDrift";
        case ErrorCode::SingularIntegrand: return "SingularIntegrand";
        case ErrorCode::InvalidInitialData: return "InvalidInitialData";
        case ErrorCode::InvalidMeasure: return "InvalidMeasure";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoFailure: return "IoFailure";
    }
    return "UnknownError";
}

}  // namespace specflow
