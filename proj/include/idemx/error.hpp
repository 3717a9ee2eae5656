#ifndef IDEMX_ERROR_HPP
#define IDEMX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace idemx {

enum class Errc {
    membership_violation,
    preorder_violation,
    empty_set,
    unknown_axiom,
    budget_exhausted_inconclusive,
    axiom_precheck_failed,
    too_large,
    mode_arity,
    space_mismatch,
    not_a_retraction,
    classification_failed,
    not_normalized,
    parse_error,
    invariant_violation,
    unknown_suite,
    io_error,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the toolkit. `field()` carries the offending
/// field path or point identifier when one applies.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::string field = {});

    Errc code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    Errc code_;
    std::string field_;
};

} // namespace idemx

#endif // IDEMX_ERROR_HPP
