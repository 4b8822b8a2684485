#include "ckff/generate.hpp"

#include <cmath>
#include <string>

#include "ckff/operator_core.hpp"
#include "ckff/random.hpp"

namespace ckff {

namespace gen {

Operator positive_controller(Rng& rng, Index n, double condition)
{
    const Matrix q = haar_unitary(rng, n);
    Eigen::VectorXd eig(n);
    for (Index i = 0; i < n; ++i) {
        // Log-uniform in [1, condition]; the endpoints are pinned so the condition number is exact.
        const double t = n == 1 ? 0.0 : (i == 0 ? 0.0 : (i == n - 1 ? 1.0 : rng.uniform()));
        eig(i) = std::pow(condition, t);
    }
    Matrix c = q * eig.asDiagonal() * q.adjoint();
    return Operator((c + c.adjoint()) / 2.0);
}

Operator random_rank_operator(Rng& rng, Index n, Index rank)
{
    if (rank == 0) {
        return Operator::zero(n);
    }
    const Matrix u = haar_frame(rng, n, rank);
    const Matrix v = haar_frame(rng, n, rank);
    Eigen::VectorXd sv(rank);
    for (Index i = 0; i < rank; ++i) {
        sv(i) = rng.uniform(0.5, 2.0);
    }
    return Operator(u * sv.asDiagonal() * v.adjoint());
}

FusionSystem random_system(Rng& rng, Index n, Index count, Index max_subdim)
{
    std::vector<Index> dims(static_cast<std::size_t>(count));
    Index total = 0;
    for (auto& d : dims) {
        d = rng.integer(1, max_subdim);
        total += d;
    }
    for (std::size_t i = 0; total < n && count * max_subdim >= n; i = (i + 1) % dims.size()) {
        if (dims[i] < max_subdim) {
            ++dims[i];
            ++total;
        }
    }
    std::vector<FusionItem> items;
    items.reserve(dims.size());
    for (Index d : dims) {
        items.push_back({Subspace(haar_frame(rng, n, d)), rng.uniform(0.5, 1.5)});
    }
    return FusionSystem(n, std::move(items));
}

namespace {

Matrix scaled_diagonal_in(const Matrix& basis, const Eigen::VectorXd& values)
{
    Matrix m = basis * values.asDiagonal() * basis.adjoint();
    return (m + m.adjoint()) / 2.0;
}

ControlledFrameSpec full_rank_spec(Rng& rng, Index n)
{
    InstanceConfig cfg;
    cfg.dim = n;
    cfg.n_subspaces = n;
    cfg.max_subdim = std::min<Index>(2, n);
    cfg.k_rank = n;
    cfg.seed = static_cast<std::uint64_t>(rng.integer(0, Index{1} << 40));
    return gen_instance(cfg);
}

}  // namespace

ControlledFrameSpec strip_instance(Rng& rng, Index n)
{
    FusionSystem system = random_system(rng, n, n, std::min<Index>(2, n));
    const Matrix v = hermitian_eigen(plain_frame_operator(system).matrix()).vectors;
    Eigen::VectorXd c(n), k(n);
    for (Index i = 0; i < n; ++i) {
        c(i) = rng.uniform(1.0, 3.0);
        k(i) = rng.uniform(0.5, 2.0);
    }
    const Matrix cm = scaled_diagonal_in(v, c);
    const double t = rng.uniform(0.5, 2.0);
    return ControlledFrameSpec(std::move(system), Operator(cm), Operator(Complex(t) * cm),
                               Operator(scaled_diagonal_in(v, k)));
}

TransportInstance transport_instance(Rng& rng, Index n, bool unitary)
{
    const Matrix q = haar_unitary(rng, n);
    Eigen::VectorXd c(n), k(n);
    Matrix u = Matrix::Zero(n, n);
    for (Index start = 0; start < n;) {
        const Index size = std::min(n - start, rng.integer(1, 3));
        const double cj = rng.uniform(1.0, 3.0);
        const double kj = rng.uniform(0.5, 2.0);
        c.segment(start, size).setConstant(cj);
        k.segment(start, size).setConstant(kj);
        u.block(start, start, size, size) =
            unitary ? haar_unitary(rng, size) : random_rank_operator(rng, size, size).matrix();
        start += size;
    }
    const Matrix cm = scaled_diagonal_in(q, c);
    ControlledFrameSpec spec(random_system(rng, n, n, std::min<Index>(2, n)), Operator(cm), Operator(cm),
                             Operator(scaled_diagonal_in(q, k)));
    return {std::move(spec), Operator(q * u * q.adjoint())};
}

CombineInstance combine_instance(Rng& rng, Index n)
{
    ControlledFrameSpec spec = full_rank_spec(rng, n);
    const Matrix q = haar_unitary(rng, n);
    const Index split = n == 1 ? 1 : rng.integer(1, n - 1);
    const Matrix p1 = q.leftCols(split) * q.leftCols(split).adjoint();
    const Matrix p2 = Matrix::Identity(n, n) - p1;
    const Operator k1(p1 * random_rank_operator(rng, n, n).matrix());
    const Operator k2(p2 * random_rank_operator(rng, n, n).matrix());
    const Complex alpha(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    const Complex beta(rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0));
    return {std::move(spec), k1, k2, alpha, beta};
}

TransferInstance transfer_instance(Rng& rng, Index n)
{
    InstanceConfig cfg;
    cfg.dim = n;
    cfg.n_subspaces = n;
    cfg.max_subdim = std::min<Index>(2, n);
    cfg.k_rank = rng.integer(1, n);
    cfg.seed = static_cast<std::uint64_t>(rng.integer(0, Index{1} << 40));
    ControlledFrameSpec spec = gen_instance(cfg);
    const Operator m = random_rank_operator(rng, n, n);
    const double shrink = rng.uniform(0.3, 1.0) / spectral_norm(m.matrix());
    Operator t = spec.K() * (Complex(shrink) * m);
    return {std::move(spec), std::move(t)};
}

PerturbInstance perturb_instance(Rng& rng, Index n)
{
    const ControlledFrameSpec base = full_rank_spec(rng, n);
    std::vector<Matrix> lines;
    Matrix d1 = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        lines.push_back(haar_frame(rng, n, 1));
        const Matrix pc = lines.back() * (lines.back().adjoint() * base.C().matrix());
        d1 += base.Cp().matrix().adjoint() * pc;
    }
    const auto report = classify(base);
    const double kp = op_norm(pinv(base.K()));
    const double radius = 0.5 * std::min(report.lower, report.lower / (kp * kp));
    const double d1_max = hermitian_eigen(d1).values(n - 1);
    const double weight = std::sqrt(0.9 * radius / d1_max);

    std::vector<FusionItem> items = base.system().items();
    std::vector<Subspace> v;
    for (const auto& item : items) {
        v.push_back(item.subspace);
    }
    for (Index i = 0; i < n; ++i) {
        items.push_back({Subspace::zero(n), weight});
        v.emplace_back(lines[static_cast<std::size_t>(i)]);
    }
    return {base.with_system(FusionSystem(n, std::move(items))), std::move(v), radius};
}

}  // namespace gen

ControlledFrameSpec gen_instance(const InstanceConfig& config)
{
    const Index n = config.dim;
    if (n < 1 || config.n_subspaces < 1 || config.max_subdim < 1 || config.max_subdim > n ||
        !(config.controller_condition >= 1.0) || !std::isfinite(config.controller_condition) ||
        config.k_rank < 0 || config.k_rank > n) {
        throw Error(ErrorKind::InvalidConfig,
                    "gen_instance needs dim >= 1, n_subspaces >= 1, 1 <= max_subdim <= dim, "
                    "condition >= 1 and 0 <= k_rank <= dim");
    }
    Rng rng(config.seed);
    FusionSystem system = gen::random_system(rng, n, config.n_subspaces, config.max_subdim);
    const Operator c = gen::positive_controller(rng, n, config.controller_condition);
    const double scale = rng.uniform(0.5, 2.0);
    const Operator cp = config.positivity ? Complex(scale) * c
                                          : gen::positive_controller(rng, n, config.controller_condition);
    const Operator k = gen::random_rank_operator(rng, n, config.k_rank);
    return ControlledFrameSpec(std::move(system), c, cp, k);
}

ControlledFrameSpec build_paper_example(Index n, double alpha, double beta)
{
    if (n < 1 || !(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorKind::InvalidConfig, "diagonal example needs n >= 1 and alpha, beta > 0");
    }
    std::vector<FusionItem> items;
    Vector k(n);
    for (Index i = 0; i < n; ++i) {
        Matrix e = Matrix::Zero(n, 1);
        e(i, 0) = 1.0;
        const double w = 1.0 / std::sqrt(static_cast<double>(i + 1));
        items.push_back({Subspace(std::move(e)), w});
        k(i) = w;
    }
    return ControlledFrameSpec(FusionSystem(n, std::move(items)), Operator::scalar(n, alpha),
                               Operator::scalar(n, beta), Operator::diagonal(k));
}

}  // namespace ckff
