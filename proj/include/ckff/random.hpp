#pragma once

#include <cstdint>
#include <random>

#include "ckff/linalg.hpp"

namespace ckff {

/// Seeded generator with a platform-stable normal sampler (Box-Muller over
/// mt19937_64 raw output; std::normal_distribution differs between standard
/// libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    Index integer(Index lo, Index hi);
    double normal();
    Complex complex_normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols);
Vector gaussian_vector(Rng& rng, Index n);
/// Uniformly distributed point on the unit sphere of C^n.
Vector random_unit_vector(Rng& rng, Index n);
/// Haar-distributed unitary matrix.
Matrix haar_unitary(Rng& rng, Index n);
/// n x k matrix with orthonormal columns spanning a rotation-invariant random subspace.
Matrix haar_frame(Rng& rng, Index n, Index k);

}  // namespace ckff
