#include "idemx/error.hpp"

namespace idemx {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::membership_violation: return "MembershipViolation";
    case Errc::preorder_violation: return "PreorderViolation";
    case Errc::empty_set: return "EmptySet";
    case Errc::unknown_axiom: return "UnknownAxiom";
    case Errc::budget_exhausted_inconclusive: return "BudgetExhaustedInconclusive";
    case Errc::axiom_precheck_failed: return "AxiomPrecheckFailed";
    case Errc::too_large: return "TooLarge";
    case Errc::mode_arity: return "ModeArity";
    case Errc::space_mismatch: return "SpaceMismatch";
    case Errc::not_a_retraction: return "NotARetraction";
    case Errc::classification_failed: return "ClassificationFailed";
    case Errc::not_normalized: return "NotNormalized";
    case Errc::parse_error: return "ParseError";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::unknown_suite: return "UnknownSuite";
    case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& message, const std::string& field) {
    std::string out{to_string(code)};
    if (!field.empty()) {
        out += "(" + field + ")";
    }
    if (!message.empty()) {
        out += ": " + message;
    }
    return out;
}

} // namespace

Error::Error(Errc code, const std::string& message, std::string field)
    : std::runtime_error(compose(code, message, field)), code_(code), field_(std::move(field)) {}

} // namespace idemx
