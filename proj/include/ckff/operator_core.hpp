#pragma once

#include <span>

#include "ckff/error.hpp"
#include "ckff/linalg.hpp"
#include "ckff/tolerance.hpp"

// Dense linear-algebra kernel. All functions are pure; every rank, sign or
// equality decision is made against an explicit Tolerance.
namespace ckff {

struct SpectralBounds {
    double min = 0.0;
    double max = 0.0;
};

struct PencilMin {
    double value = 0.0;
    Vector witness;  // unit vector attaining the quotient
};

Operator adjoint(const Operator& a);

double op_norm(const Operator& a);

/// ||A - A*||, the distance from self-adjointness.
double self_adjoint_defect(const Operator& a);

/// Extreme eigenvalues m, M with mI <= A <= MI. Throws NotSelfAdjoint.
SpectralBounds pos_bounds(const Operator& a, const Tolerance& tol = {});

bool is_positive(const Operator& a, const Tolerance& tol = {});

/// Positive square root via spectral calculus. Throws NotPositive.
Operator sqrt_psd(const Operator& a, const Tolerance& tol = {});

/// Moore-Penrose pseudo-inverse with singular values at or below tol scale treated as zero.
Operator pinv(const Operator& a, const Tolerance& tol = {});
Matrix pinv(const Matrix& a, const Tolerance& tol = {});

Operator projection(const Subspace& w);

/// Orthonormal basis of span(vectors); rank is the number of singular values above tol scale.
Subspace orthonormalize(Index ambient_dim, std::span<const Vector> vectors,
                        const Tolerance& tol = {});
Subspace orthonormalize_columns(const Matrix& columns, const Tolerance& tol = {});

Subspace range_basis(const Operator& a, const Tolerance& tol = {});

/// Orthonormal basis of ker(A) (complement of the row space).
Subspace kernel_basis(const Operator& a, const Tolerance& tol = {});

/// A <= B in the Loewner order. Throws NotSelfAdjoint.
bool loewner_leq(const Operator& a, const Operator& b, const Tolerance& tol = {});

/// inf <Sf,f>/<Gf,f> over <Gf,f> > 0, via the Schur complement of S on ker(G).
/// Throws ZeroPencil if G vanishes, NotSelfAdjoint / NotPositive on bad inputs.
PencilMin pencil_min(const Operator& s, const Operator& g, const Tolerance& tol = {});

/// Hermitian eigen-decomposition of (A + A*)/2, eigenvalues ascending.
struct HermitianEigen {
    Eigen::VectorXd values;
    Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix& a);

}  // namespace ckff
