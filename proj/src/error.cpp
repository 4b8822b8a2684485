#include "ckff/error.hpp"

#include <algorithm>

namespace ckff {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::ZeroPencil: return "ZeroPencil";
    case ErrorKind::NonRealForm: return "NonRealForm";
    case ErrorKind::NotPositiveBlock: return "NotPositiveBlock";
    case ErrorKind::NonSelfAdjointS: return "NonSelfAdjointS";
    case ErrorKind::ZeroK: return "ZeroK";
    case ErrorKind::ZeroOperator: return "ZeroOperator";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::SingularRestriction: return "SingularRestriction";
    case ErrorKind::RangeNotContained: return "RangeNotContained";
    case ErrorKind::RangesNotOrthogonal: return "RangesNotOrthogonal";
    case ErrorKind::HypothesisFailed: return "HypothesisFailed";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what, std::optional<std::size_t> item)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), item_(item)
{
}

namespace {

std::string describe(const std::vector<Hypothesis>& checked)
{
    std::string out = "hypothesis failed:";
    for (const auto& h : checked) {
        if (!h.pass) {
            out += " " + h.name + " (margin " + std::to_string(h.margin) + ")";
        }
    }
    return out;
}

}  // namespace

HypothesisError::HypothesisError(ErrorKind kind, std::vector<Hypothesis> checked)
    : Error(kind, describe(checked)), checked_(std::move(checked))
{
}

const Hypothesis& HypothesisError::first_failure() const
{
    auto it = std::find_if(checked_.begin(), checked_.end(), [](const auto& h) { return !h.pass; });
    return it != checked_.end() ? *it : checked_.front();
}

}  // namespace ckff
