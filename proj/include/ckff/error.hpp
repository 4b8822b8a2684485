#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ckff {

enum class ErrorKind {
    InvalidArgument,
    InvalidConfig,
    InvalidInput,
    NotSelfAdjoint,
    NotPositive,
    ZeroPencil,
    NonRealForm,
    NotPositiveBlock,
    NonSelfAdjointS,
    ZeroK,
    ZeroOperator,
    NotAFrame,
    SingularRestriction,
    RangeNotContained,
    RangesNotOrthogonal,
    HypothesisFailed,
    NotInvertible,
    NotUnitary,
    PreconditionViolated,
};

std::string_view to_string(ErrorKind kind);

/// A named hypothesis of a theorem together with its numerical margin.
/// `margin >= 0` means the hypothesis holds at the tolerance in use.
struct Hypothesis {
    std::string name;
    double margin = 0.0;
    bool pass = false;
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what,
          std::optional<std::size_t> item = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    /// Index of the offending frame item, when the error is item-specific.
    std::optional<std::size_t> item() const noexcept { return item_; }

private:
    ErrorKind kind_;
    std::optional<std::size_t> item_;
};

/// Raised when a theorem's hypotheses do not hold; carries every margin checked.
class HypothesisError : public Error {
public:
    HypothesisError(ErrorKind kind, std::vector<Hypothesis> checked);

    const std::vector<Hypothesis>& checked() const noexcept { return checked_; }
    const Hypothesis& first_failure() const;

private:
    std::vector<Hypothesis> checked_;
};

}  // namespace ckff
