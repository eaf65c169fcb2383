#include "orthosym/errors.hpp"

namespace orthosym {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotEven: return "NotEven";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::OutsideDomain: return "OutsideDomain";
        case ErrorKind::OutsideCone: return "OutsideCone";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::TruncationUnderflow: return "TruncationUnderflow";
        case ErrorKind::IrrationalPhase: return "IrrationalPhase";
        case ErrorKind::UnsupportedWeight: return "UnsupportedWeight";
        case ErrorKind::IndexNotOne: return "IndexNotOne";
        case ErrorKind::EmptyRange: return "EmptyRange";
        case ErrorKind::InsufficientTruncation: return "InsufficientTruncation";
        case ErrorKind::BothZeroOnRange: return "BothZeroOnRange";
        case ErrorKind::MissingCoefficients: return "MissingCoefficients";
        case ErrorKind::CaseMismatch: return "CaseMismatch";
        case ErrorKind::Divergent: return "Divergent";
        case ErrorKind::BadC: return "BadC";
        case ErrorKind::OnDivisor: return "OnDivisor";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace orthosym
