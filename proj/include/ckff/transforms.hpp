#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ckff/error.hpp"
#include "ckff/frame.hpp"
#include "ckff/linalg.hpp"

// Bound propagation for the structural results on controlled K-fusion frames.
// Each transform checks its hypotheses numerically (margins are always
// reported), applies the theorem's constants, and compares them against the
// optimal bounds computed directly by `classify`.
namespace ckff {

enum class Theorem {
    RestrictToRange,
    TransferToT,
    CombineK,
    StripToPlain,
    StripFromPlain,
    UnitaryTransform,
    UnitaryCorollary,
    Perturbation,
};

std::string_view to_string(Theorem t);

struct PropagatedBounds {
    double lower = 0.0;
    double upper = 0.0;
    Theorem source = Theorem::RestrictToRange;
    std::vector<Hypothesis> hypotheses;
    /// Optimal constants for the conclusion's setting, computed independently.
    double reference_lower = 0.0;
    double reference_upper = 0.0;
    /// lower <= reference_lower + tol and upper >= reference_upper - tol.
    bool conclusion_holds = false;
    std::string note;
};

/// Bounds (A / ||(K*)^+||^2, B) valid for f in R_K with respect to ||f||^2.
PropagatedBounds restrict_to_range(const ControlledFrameSpec& spec, double lower, double upper,
                                   const Tolerance& tol = {});

/// Minimal lambda with TT* <= lambda KK*. Throws RangeNotContained.
double douglas_lambda(const Operator& t, const Operator& k, const Tolerance& tol = {});

/// Bounds (A / lambda, B) for the same system with K replaced by T.
PropagatedBounds transfer_frame_to_T(const ControlledFrameSpec& spec, double lower, double upper,
                                     const Operator& t, const Tolerance& tol = {});

/// Bounds for K = alpha K1 + beta K2 from bounds for K1 and K2 (ranges orthogonal).
PropagatedBounds combine_k(const ControlledFrameSpec& spec, const Operator& k1, const Operator& k2,
                           double lower1, double upper1, double lower2, double upper2, Complex alpha,
                           Complex beta, const Tolerance& tol = {});

struct StripResult {
    PropagatedBounds to_plain;
    PropagatedBounds from_plain;
};

/// Equivalence between the controlled K-fusion frame and the plain K-fusion frame
/// when C, C' are positive, invertible and commute with K and S_plain.
StripResult strip_controllers(const ControlledFrameSpec& spec, const Tolerance& tol = {});

struct TransportResult {
    ControlledFrameSpec new_spec;
    PropagatedBounds bounds;
};

/// Moves every W_i to U W_i for invertible U with U*C = CU* and K*(U*)^-1 = (U*)^-1 K*.
TransportResult unitary_transform(const ControlledFrameSpec& spec, const Operator& u, const Tolerance& tol = {});

/// Unitary variant: U*U = I, U^-1 C = C U^-1 and K*U = UK*.
TransportResult unitary_transform_corollary(const ControlledFrameSpec& spec, const Operator& u,
                                            const Tolerance& tol = {});

/// Perturbation of the subspaces W_i -> V_i with weights, controllers and K fixed.
/// Returns the Bessel bound R + B and the lower bound A - R ||K^+||^2 on R_K.
PropagatedBounds perturb_check(const ControlledFrameSpec& spec_w, std::span<const Subspace> subspaces_v,
                               double radius, double lower, double upper, const Tolerance& tol = {});

}  // namespace ckff
