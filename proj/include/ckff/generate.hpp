#pragma once

#include <cstdint>
#include <vector>

#include "ckff/frame.hpp"
#include "ckff/linalg.hpp"
#include "ckff/random.hpp"

namespace ckff {

struct InstanceConfig {
    Index dim = 4;
    Index n_subspaces = 4;
    Index max_subdim = 2;
    double controller_condition = 4.0;
    Index k_rank = 4;
    std::uint64_t seed = 0;
    /// Keep every C'* pi_i C positive (C' = c C with C in GL+).
    bool positivity = true;
};

/// Seeded random controlled frame spec. Deterministic in `config.seed`.
/// Throws InvalidConfig on out-of-range parameters.
ControlledFrameSpec gen_instance(const InstanceConfig& config);

/// Truncation to C^n of the diagonal l2 example: W_i = span{e_i}, w_i = 1/sqrt(i+1),
/// C = alpha I, C' = beta I, K = diag(1/sqrt(i+1)).
ControlledFrameSpec build_paper_example(Index n, double alpha, double beta);

// Building blocks shared by the theorem-specific generators in the suite.
namespace gen {

/// Random positive operator Q diag(e) Q* with eigenvalues spanning [1, condition].
Operator positive_controller(Rng& rng, Index n, double condition);

/// Random operator of exact rank `rank` with singular values in [0.5, 2].
Operator random_rank_operator(Rng& rng, Index n, Index rank);

/// Random subspaces whose dimensions sum to at least n whenever count * max_subdim >= n,
/// with weights in [0.5, 1.5].
FusionSystem random_system(Rng& rng, Index n, Index count, Index max_subdim);

// Instances constructed so that one theorem's hypotheses hold.

/// C = V diag(c) V* and K = V diag(k) V* in an eigenbasis V of S_plain, C' = t C.
ControlledFrameSpec strip_instance(Rng& rng, Index n);

struct TransportInstance {
    ControlledFrameSpec spec;
    Operator u;
};

/// Shared block structure: C = C' and K scalar on each block, U block-diagonal
/// (invertible blocks, or unitary blocks when `unitary`).
TransportInstance transport_instance(Rng& rng, Index n, bool unitary);

struct CombineInstance {
    ControlledFrameSpec spec;
    Operator k1;
    Operator k2;
    Complex alpha;
    Complex beta;
};

/// K1 = P1 M1, K2 = P2 M2 with complementary orthogonal projections P1, P2.
CombineInstance combine_instance(Rng& rng, Index n);

struct TransferInstance {
    ControlledFrameSpec spec;
    Operator t;
};

/// T = K M with ||M|| <= 1.
TransferInstance transfer_instance(Rng& rng, Index n);

struct PerturbInstance {
    ControlledFrameSpec spec_w;
    std::vector<Subspace> subspaces_v;
    double radius;
};

/// A frame plus n items with zero subspace and small weight; the perturbation
/// replaces those zero subspaces by random lines, so D is positive definite
/// with largest eigenvalue 0.9 R, where R = min(A, A / ||K^+||^2) / 2.
PerturbInstance perturb_instance(Rng& rng, Index n);

}  // namespace gen

}  // namespace ckff
