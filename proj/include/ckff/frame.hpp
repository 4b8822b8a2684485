#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ckff/error.hpp"
#include "ckff/linalg.hpp"
#include "ckff/tolerance.hpp"

namespace ckff {

struct FusionItem {
    Subspace subspace;
    double weight;
};

/// Weighted family {(W_i, w_i)}: nonempty, strictly positive weights, common ambient space.
class FusionSystem {
public:
    FusionSystem(Index ambient_dim, std::vector<FusionItem> items);

    Index ambient_dim() const noexcept { return ambient_dim_; }
    const std::vector<FusionItem>& items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }

private:
    Index ambient_dim_;
    std::vector<FusionItem> items_;
};

/// A fusion system together with its controllers C, C' (both invertible) and the operator K.
class ControlledFrameSpec {
public:
    ControlledFrameSpec(FusionSystem system, Operator c, Operator cp, Operator k,
                        const Tolerance& tol = {});

    const FusionSystem& system() const noexcept { return system_; }
    const Operator& C() const noexcept { return c_; }
    const Operator& Cp() const noexcept { return cp_; }
    const Operator& K() const noexcept { return k_; }
    Index dim() const noexcept { return system_.ambient_dim(); }

    ControlledFrameSpec with_K(Operator k) const;
    ControlledFrameSpec with_system(FusionSystem system) const;
    ControlledFrameSpec with_controllers(Operator c, Operator cp) const;

private:
    FusionSystem system_;
    Operator c_;
    Operator cp_;
    Operator k_;
};

/// One vector per frame item: an element of the block space (+_i H).
struct BlockVector {
    std::vector<Vector> blocks;
};

Complex block_inner(const BlockVector& a, const BlockVector& b);
double block_norm_squared(const BlockVector& a);

struct BoundWitness {
    double value = 0.0;
    Vector witness;
};

struct BoundsReport {
    double lower = 0.0;
    double upper = 0.0;
    Vector lower_witness;
    Vector upper_witness;
    bool is_frame = false;
    bool is_parseval = false;
    Tolerance tol_used;
    /// ||T*|| when every block C'* pi_i C is positive; compared against sqrt(upper).
    std::optional<double> synthesis_norm;
    bool bessel_consistent = true;
};

/// How analysis/synthesis map a block operator B_i = C'* pi_i C to the block coefficient
/// operator. `Omitted` exists only so the verification harness can inject a mutation.
enum class BlockRoot { Principal, Omitted };

/// Threshold used by frame-level comparisons: tol scale at max(||S||, ||KK*||).
double frame_tolerance(const ControlledFrameSpec& spec, const Tolerance& tol);

/// Re sum_i w_i^2 <pi_i C f, pi_i C' f>. Throws NonRealForm if the imaginary part is not negligible.
double frame_sum(const ControlledFrameSpec& spec, const Vector& f, const Tolerance& tol = {});

/// S = sum_i w_i^2 C'* pi_i C.
Operator frame_operator(const ControlledFrameSpec& spec);

/// Plain fusion frame operator sum_i w_i^2 pi_i (controllers ignored).
Operator plain_frame_operator(const FusionSystem& system);

/// C'* pi_i C for item i.
Operator block_operator(const ControlledFrameSpec& spec, std::size_t item);

BlockVector analysis_apply(const ControlledFrameSpec& spec, const Vector& f, const Tolerance& tol = {},
                           BlockRoot root = BlockRoot::Principal);
Vector synthesis_apply(const ControlledFrameSpec& spec, const BlockVector& g, const Tolerance& tol = {},
                       BlockRoot root = BlockRoot::Principal);
/// Matrix of the synthesis map, n x (n * items); its adjoint is the analysis map.
Matrix synthesis_matrix(const ControlledFrameSpec& spec, const Tolerance& tol = {},
                        BlockRoot root = BlockRoot::Principal);

BoundWitness optimal_upper_bound(const ControlledFrameSpec& spec, const Tolerance& tol = {});
BoundWitness optimal_lower_bound(const ControlledFrameSpec& spec, const Tolerance& tol = {});

BoundsReport classify(const ControlledFrameSpec& spec, const Tolerance& tol = {});

struct DefinitionCheck {
    bool passed = true;
    std::size_t trials = 0;
    std::size_t violations = 0;
    /// Smallest slack min(sum - A||K*f||^2, B||f||^2 - sum) seen; negative means violated.
    double worst_margin = 0.0;
    Vector worst_witness;
};

/// Randomized check of A||K*f||^2 - tol <= frame_sum(f) <= B||f||^2 + tol on unit vectors.
DefinitionCheck verify_definition(const ControlledFrameSpec& spec, double lower, double upper,
                                  std::size_t trials, std::uint64_t seed, const Tolerance& tol = {});

/// A KK* <= S <= B I for the bounds in `report`.
bool frame_operator_sandwich(const ControlledFrameSpec& spec, const BoundsReport& report,
                             const Tolerance& tol = {});

struct RestrictedInverse {
    /// Q (S Q)^+ for an orthonormal basis Q of R_K: inverts S on S(R_K), zero on its complement.
    Operator inverse;
    Subspace domain;  // R_K
    Subspace image;   // S(R_K)
    double lo = 0.0;  // 1 / B
    double hi = 0.0;  // ||K^+||^2 / A
    std::size_t samples = 0;
    bool certified = false;
    double worst_margin = 0.0;
};

RestrictedInverse s_restricted_inverse(const ControlledFrameSpec& spec, const Tolerance& tol = {},
                                       std::size_t samples = 1000, std::uint64_t seed = 0);

}  // namespace ckff
