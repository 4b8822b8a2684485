#include <doctest.h>

#include <cmath>
#include <vector>

#include "ckff/operator_core.hpp"
#include "ckff/random.hpp"
#include "oracles.hpp"

using namespace ckff;
using namespace std::complex_literals;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d)
{
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Vector basis_vector(Index n, Index i)
{
    Vector v = Vector::Zero(n);
    v(i) = 1.0;
    return v;
}

Matrix random_rank(Rng& rng, Index n, Index rank)
{
    return gaussian_matrix(rng, n, rank) * gaussian_matrix(rng, rank, n);
}

}  // namespace

TEST_CASE("adjoint")
{
    CHECK(adjoint(Operator::identity(2)).matrix() == Matrix::Identity(2, 2));
    CHECK(adjoint(Operator(mat2(0, 1, 0, 0))).matrix() == mat2(0, 0, 1, 0));
    CHECK(adjoint(Operator(mat2(1i, 0, 0, 0))).matrix() == mat2(-1i, 0, 0, 0));

    Rng rng(7);
    const Operator a(gaussian_matrix(rng, 4, 4));
    CHECK(adjoint(adjoint(a)).matrix() == a.matrix());
}

TEST_CASE("op_norm")
{
    CHECK(op_norm(Operator::identity(3)) == doctest::Approx(1.0));
    CHECK(op_norm(Operator::diagonal(Vector{{2.0, 3.0}})) == doctest::Approx(3.0));

    SUBCASE("random 5x5 against sphere sampling")
    {
        Rng rng(11);
        const Operator a(gaussian_matrix(rng, 5, 5));
        const Matrix ata = a.matrix().adjoint() * a.matrix();
        const auto sampled = oracle::quotient_extremum(ata, Matrix::Identity(5, 5), 100000, 3, false);
        const double oracle_norm = std::sqrt(sampled.polished);
        CHECK(std::abs(op_norm(a) - oracle_norm) <= 1e-6 * oracle_norm);
        CHECK(std::sqrt(sampled.raw) <= op_norm(a) * (1 + 1e-12));
        CHECK(op_norm(adjoint(a)) == doctest::Approx(op_norm(a)).epsilon(1e-12));
    }
}

TEST_CASE("pos_bounds")
{
    const auto id = pos_bounds(Operator::identity(4));
    CHECK(id.min == doctest::Approx(1.0));
    CHECK(id.max == doctest::Approx(1.0));

    // C = 2I, C' = 3I composed.
    const Operator c = Operator::scalar(2, 2.0);
    const Operator cp = Operator::scalar(2, 3.0);
    const Operator composed = Operator::diagonal(Vector{{1.0, 1.0}}) * Operator::diagonal(Vector{{2.0, 6.0}});
    const auto roots = oracle::char_poly_roots_2x2(composed.matrix());
    const auto b = pos_bounds(composed);
    CHECK(b.min == doctest::Approx(roots.first));
    CHECK(b.max == doctest::Approx(roots.second));
    CHECK(b.min == doctest::Approx(2.0));
    CHECK(b.max == doctest::Approx(6.0));
    CHECK(pos_bounds(adjoint(cp) * c).max == doctest::Approx(6.0));

    try {
        pos_bounds(Operator(mat2(0, 1, 0, 0)));
        FAIL("expected NotSelfAdjoint");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotSelfAdjoint);
    }
}

TEST_CASE("is_positive")
{
    Rng rng(5);
    const Subspace w = orthonormalize_columns(gaussian_matrix(rng, 4, 2));
    const Operator p = projection(w);
    CHECK(is_positive(p));
    CHECK_FALSE(is_positive(Operator::diagonal(Vector{{1.0, -1e-3}}), Tolerance(1e-12, 0.0)));
    CHECK_FALSE(is_positive(Operator(mat2(0, 1, 0, 0))));

    // C'* pi C = 6 pi with spectrum in {0, 6}.
    const Operator block = adjoint(Operator::scalar(4, 3.0)) * p * Operator::scalar(4, 2.0);
    CHECK(is_positive(block));
    const auto eig = hermitian_eigen(block.matrix());
    for (Index i = 0; i < eig.values.size(); ++i) {
        const double v = eig.values(i);
        CHECK((std::abs(v) < 1e-12 || std::abs(v - 6.0) < 1e-12));
    }
}

TEST_CASE("sqrt_psd")
{
    CHECK((sqrt_psd(Operator::identity(3)).matrix() - Matrix::Identity(3, 3)).norm() < 1e-14);
    const Operator r = sqrt_psd(Operator::diagonal(Vector{{4.0, 9.0}}));
    CHECK((r.matrix() - Vector{{2.0, 3.0}}.asDiagonal().toDenseMatrix()).norm() < 1e-14);

    Rng rng(9);
    const Operator p = projection(orthonormalize_columns(gaussian_matrix(rng, 5, 2)));
    const Operator six_p = Complex(6.0) * p;
    const Operator root = sqrt_psd(six_p);
    CHECK((root.matrix() - std::sqrt(6.0) * p.matrix()).norm() < 1e-12);
    CHECK(((root * root).matrix() - six_p.matrix()).norm() < 1e-12);
    CHECK(self_adjoint_defect(root) < 1e-14);

    CHECK_THROWS_AS(sqrt_psd(Operator::diagonal(Vector{{1.0, -1.0}})), Error);
}

TEST_CASE("pinv examples")
{
    CHECK((pinv(Operator::identity(3)).matrix() - Matrix::Identity(3, 3)).norm() < 1e-14);
    CHECK((pinv(Operator::diagonal(Vector{{2.0, 0.0}})).matrix() -
           Vector{{0.5, 0.0}}.asDiagonal().toDenseMatrix())
              .norm() < 1e-14);
    const Vector k{{1.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(3.0)}};
    const Vector expected{{1.0, std::sqrt(2.0), std::sqrt(3.0)}};
    CHECK((pinv(Operator::diagonal(k)).matrix() - expected.asDiagonal().toDenseMatrix()).norm() < 1e-12);
}

TEST_CASE("pinv Penrose identities and adjoint commutation")
{
    Rng rng(21);
    const Tolerance tol;
    for (int trial = 0; trial < 60; ++trial) {
        const Index n = rng.integer(1, 8);
        const Index rank = rng.integer(0, n);
        const Operator a(random_rank(rng, n, rank));
        const Operator ap = pinv(a, tol);
        const Matrix& m = a.matrix();
        const Matrix& p = ap.matrix();
        const double s = tol.scale(n, op_norm(a) * std::max(1.0, op_norm(ap)));
        CHECK(spectral_norm(m * p * m - m) <= s * std::max(1.0, op_norm(a)));
        CHECK(spectral_norm(p * m * p - p) <= s * std::max(1.0, op_norm(ap)));
        CHECK(spectral_norm((m * p).adjoint() - m * p) <= s);
        CHECK(spectral_norm((p * m).adjoint() - p * m) <= s);
        const Vector x = m * gaussian_vector(rng, n);
        CHECK((m * (p * x) - x).norm() <= s * std::max(1.0, x.norm()));
        CHECK(spectral_norm(pinv(adjoint(a), tol).matrix() - p.adjoint()) <= s);
    }
}

TEST_CASE("projection")
{
    const Subspace e1(Matrix(Vector{{1.0, 0.0}}));
    CHECK((projection(e1).matrix() - Vector{{1.0, 0.0}}.asDiagonal().toDenseMatrix()).norm() < 1e-15);

    const Subspace diag(Matrix(Vector{{1.0, 1.0}} / std::sqrt(2.0)));
    CHECK((projection(diag).matrix() - Matrix::Constant(2, 2, 0.5)).norm() < 1e-15);

    Rng rng(31);
    const Matrix v = gaussian_matrix(rng, 4, 2);
    const Subspace w = orthonormalize_columns(v);
    const Operator p = projection(w);
    CHECK(w.dim() == 2);
    CHECK((p.matrix() - oracle::gram_projection(v)).norm() < 1e-10);
    CHECK(spectral_norm(p.matrix() * p.matrix() - p.matrix()) < 1e-12);
    CHECK(self_adjoint_defect(p) < 1e-12);
    for (Index j = 0; j < w.dim(); ++j) {
        CHECK((p(w.basis().col(j)) - w.basis().col(j)).norm() < 1e-12);
    }
}

TEST_CASE("projection identities")
{
    Rng rng(41);
    const Tolerance tol;
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = rng.integer(2, 6);
        const Subspace v = orthonormalize_columns(gaussian_matrix(rng, n, rng.integer(1, n)));

        // Unitary U: pi_{UV} U = U pi_V.
        const Operator u(haar_unitary(rng, n));
        const Subspace uv = orthonormalize_columns(u.matrix() * v.basis(), tol);
        CHECK(op_norm(projection(uv) * u - u * projection(v)) <= tol.scale(n, 1.0));

        // Arbitrary T: pi_V T* = pi_V T* pi_{TV}.
        const Operator t(gaussian_matrix(rng, n, n));
        const Subspace tv = orthonormalize_columns(t.matrix() * v.basis(), tol);
        const Operator lhs = projection(v) * adjoint(t);
        CHECK(op_norm(lhs - lhs * projection(tv)) <= tol.scale(n, op_norm(t)));
    }
}

TEST_CASE("orthonormalize")
{
    const std::vector<Vector> dependent{basis_vector(3, 0), 2.0 * basis_vector(3, 0)};
    const Subspace s = orthonormalize(3, dependent);
    REQUIRE(s.dim() == 1);
    CHECK(std::abs(std::abs(s.basis()(0, 0)) - 1.0) < 1e-14);

    const std::vector<Vector> none;
    CHECK(orthonormalize(4, none).dim() == 0);

    Rng rng(51);
    std::vector<Vector> three;
    for (int i = 0; i < 3; ++i) {
        three.push_back(gaussian_vector(rng, 5));
    }
    const Subspace w = orthonormalize(5, three);
    CHECK(w.dim() == 3);
    CHECK((w.basis().adjoint() * w.basis() - Matrix::Identity(3, 3)).norm() < 1e-12);
    // Rank oracle: the Gram determinant of independent vectors is nonzero.
    Matrix v(5, 3);
    for (int i = 0; i < 3; ++i) {
        v.col(i) = three[i];
    }
    CHECK(std::abs((v.adjoint() * v).determinant()) > 1e-6);
    const Operator p = projection(w);
    for (const auto& x : three) {
        CHECK((p(x) - x).norm() < 1e-12 * x.norm());
    }

    std::vector<Vector> mixed{gaussian_vector(rng, 3)};
    mixed.push_back(Vector::Zero(4));
    CHECK_THROWS_AS(orthonormalize(3, mixed), Error);
}

TEST_CASE("range_basis")
{
    CHECK(range_basis(Operator::zero(3)).dim() == 0);

    const Subspace r = range_basis(Operator::diagonal(Vector{{1.0, 0.0, 2.0}}));
    REQUIRE(r.dim() == 2);
    CHECK((projection(r).matrix() - Vector{{1.0, 0.0, 1.0}}.asDiagonal().toDenseMatrix()).norm() < 1e-14);

    Rng rng(61);
    const Vector x = gaussian_vector(rng, 4), y = gaussian_vector(rng, 4);
    const Vector u = gaussian_vector(rng, 4), v = gaussian_vector(rng, 4);
    const Operator a(x * y.adjoint() + u * v.adjoint());
    const Subspace ra = range_basis(a);
    CHECK(ra.dim() == 2);
    CHECK(op_norm(projection(ra) * a - a) <= Tolerance{}.scale(4, op_norm(a)));
    CHECK(kernel_basis(a).dim() == 2);
}

TEST_CASE("loewner_leq")
{
    Rng rng(71);
    const Operator psd(oracle::random_psd(rng, 3, 2));
    CHECK(loewner_leq(Operator::zero(3), psd));

    const Operator d10 = Operator::diagonal(Vector{{1.0, 0.0}});
    CHECK(loewner_leq(d10, Operator::identity(2)));
    CHECK_FALSE(loewner_leq(Operator::identity(2), d10));

    for (int trial = 0; trial < 20; ++trial) {
        const Index n = rng.integer(1, 6);
        const Operator k(gaussian_matrix(rng, n, n));
        const Operator kk = k * adjoint(k);
        const double norm = op_norm(k);
        CHECK(loewner_leq(kk, Operator::scalar(n, norm * norm)));
        // Oracle via eigenvalues: the largest eigenvalue of KK* is ||K||^2.
        CHECK(hermitian_eigen(kk.matrix()).values(n - 1) == doctest::Approx(norm * norm).epsilon(1e-10));
    }
    CHECK_THROWS_AS(loewner_leq(Operator(mat2(0, 1, 0, 0)), Operator::identity(2)), Error);
}

TEST_CASE("pencil_min examples")
{
    const auto unit = pencil_min(Operator::identity(3), Operator::identity(3));
    CHECK(unit.value == doctest::Approx(1.0));
    CHECK(unit.witness.norm() == doctest::Approx(1.0));

    // Truncated controlled example: quotient identically 6.
    const Operator s = Operator::diagonal(Vector{{6.0, 3.0, 2.0}});
    const Operator g = Operator::diagonal(Vector{{1.0, 0.5, 1.0 / 3.0}});
    const auto pm = pencil_min(s, g);
    CHECK(std::abs(pm.value - 6.0) < 1e-12);
    const auto sampled = oracle::quotient_extremum(s.matrix(), g.matrix(), 10000, 17, true, 0);
    CHECK(std::abs(sampled.raw - 6.0) < 1e-9);

    // Kernel overlap: restriction to span{e1}.
    const Operator d10 = Operator::diagonal(Vector{{1.0, 0.0}});
    const auto overlap = pencil_min(d10, d10);
    CHECK(overlap.value == doctest::Approx(1.0));
    CHECK(std::abs(overlap.witness(0)) == doctest::Approx(1.0));

    CHECK_THROWS_AS(pencil_min(Operator::identity(2), Operator::zero(2)), Error);
    try {
        pencil_min(Operator::identity(2), Operator::zero(2));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroPencil);
    }
}

TEST_CASE("pencil_min with coupled kernel uses the Schur complement")
{
    // S = [[2,1],[1,1]], G = diag(1,0): inf over f2 of (2|a|^2 + 2Re(a conj b) + |b|^2)/|a|^2 = 1.
    const Operator s(mat2(2, 1, 1, 1));
    const Operator g = Operator::diagonal(Vector{{1.0, 0.0}});
    const auto pm = pencil_min(s, g);
    CHECK(pm.value == doctest::Approx(1.0).epsilon(1e-12));
    const auto q = oracle::forms(s.matrix(), g.matrix(), pm.witness);
    CHECK(q.s / q.g == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pencil_min never exceeds sampled quotients")
{
    Rng rng(81);
    const Tolerance tol;
    for (int trial = 0; trial < 25; ++trial) {
        const Index n = rng.integer(1, 6);
        const Operator s(oracle::random_psd(rng, n, rng.integer(1, n)));
        const Operator g(oracle::random_psd(rng, n, rng.integer(1, n)));
        const auto pm = pencil_min(s, g, tol);
        const auto sampled = oracle::quotient_extremum(s.matrix(), g.matrix(), 10000, 100 + trial, true);
        const double slack = tol.scale(n, std::max(op_norm(s), op_norm(g)));
        for (double q : sampled.all) {
            CHECK(pm.value <= q + slack);
        }
        CHECK(sampled.polished - pm.value <= 1e-3);
        CHECK(pm.value >= 0.0);
        const auto wq = oracle::forms(s.matrix(), g.matrix(), pm.witness);
        CHECK(wq.s / wq.g == doctest::Approx(pm.value).epsilon(1e-6));
    }
}

TEST_CASE("surjectivity characterization")
{
    Rng rng(91);
    const Tolerance tol;
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = rng.integer(1, 6);
        const Index rank = rng.integer(0, n);
        const Operator a(random_rank(rng, n, rank));
        const bool full = range_basis(a, tol).dim() == n;
        const Operator aa = a * adjoint(a);
        const auto pm = pencil_min(aa, Operator::identity(n), tol);
        CHECK(full == (pm.value > tol.scale(n, op_norm(aa))));
    }
}

TEST_CASE("tolerance and type invariants")
{
    CHECK_THROWS_AS(Tolerance(0.0, 0.0), Error);
    CHECK_THROWS_AS(Tolerance(1e-9, -1.0), Error);
    CHECK(Tolerance{}.scale(4, 0.5) == doctest::Approx(4e-9 + 1e-12));
    CHECK_THROWS_AS(Operator(Matrix(2, 3)), Error);
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(Operator{bad}, Error);
    CHECK_THROWS_AS(Subspace(Matrix::Constant(2, 1, 1.0)), Error);
}
