#include "stancekit/error.hpp"

namespace stancekit {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NoThesis: return "NoThesis";
    case ErrorKind::MultipleTheses: return "MultipleTheses";
    case ErrorKind::DanglingParent: return "DanglingParent";
    case ErrorKind::CycleDetected: return "CycleDetected";
    case ErrorKind::DuplicateClaimId: return "DuplicateClaimId";
    case ErrorKind::InconsistentStance: return "InconsistentStance";
    case ErrorKind::UnknownClaim: return "UnknownClaim";
    case ErrorKind::UnknownAuthor: return "UnknownAuthor";
    case ErrorKind::UnknownDocument: return "UnknownDocument";
    case ErrorKind::EmptyCorpus: return "EmptyCorpus";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::FractionOutOfRange: return "FractionOutOfRange";
    case ErrorKind::IsThesis: return "IsThesis";
    case ErrorKind::NotAChild: return "NotAChild";
    case ErrorKind::ThesisHasNoStance: return "ThesisHasNoStance";
    case ErrorKind::ConfigConflict: return "ConfigConflict";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UntrainedModel: return "UntrainedModel";
    case ErrorKind::EmptyInput: return "EmptyInput";
    }
    return "Unknown";
}

} // namespace stancekit
