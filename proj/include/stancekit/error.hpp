#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stancekit {

enum class ErrorKind {
    NoThesis,
    MultipleTheses,
    DanglingParent,
    CycleDetected,
    DuplicateClaimId,
    InconsistentStance,
    UnknownClaim,
    UnknownAuthor,
    UnknownDocument,
    EmptyCorpus,
    MalformedRecord,
    MissingField,
    FractionOutOfRange,
    IsThesis,
    NotAChild,
    ThesisHasNoStance,
    ConfigConflict,
    InvalidP,
    InvalidArgument,
    UntrainedModel,
    EmptyInput,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace stancekit
