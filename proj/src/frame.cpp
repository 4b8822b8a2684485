#include "ckff/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ckff/operator_core.hpp"
#include "ckff/random.hpp"

namespace ckff {

FusionSystem::FusionSystem(Index ambient_dim, std::vector<FusionItem> items)
    : ambient_dim_(ambient_dim), items_(std::move(items))
{
    if (ambient_dim_ <= 0) {
        throw Error(ErrorKind::InvalidArgument, "fusion system ambient dimension must be positive");
    }
    if (items_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "fusion system must have at least one item");
    }
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto& item = items_[i];
        if (!(item.weight > 0.0) || !std::isfinite(item.weight)) {
            throw Error(ErrorKind::InvalidArgument, "weights must be finite and strictly positive", i);
        }
        if (item.subspace.ambient_dim() != ambient_dim_) {
            throw Error(ErrorKind::InvalidArgument, "subspace ambient dimension mismatch", i);
        }
    }
}

ControlledFrameSpec::ControlledFrameSpec(FusionSystem system, Operator c, Operator cp, Operator k,
                                         const Tolerance& tol)
    : system_(std::move(system)), c_(std::move(c)), cp_(std::move(cp)), k_(std::move(k))
{
    const Index n = system_.ambient_dim();
    if (c_.dim() != n || cp_.dim() != n || k_.dim() != n) {
        throw Error(ErrorKind::InvalidArgument, "controller / K dimensions do not match the fusion system");
    }
    for (const Operator* ctrl : {&c_, &cp_}) {
        Eigen::JacobiSVD<Matrix> svd(ctrl->matrix());
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) <= tol.scale(n, sv(0))) {
            throw Error(ErrorKind::NotInvertible, ctrl == &c_ ? "C is not invertible" : "C' is not invertible");
        }
    }
}

ControlledFrameSpec ControlledFrameSpec::with_K(Operator k) const
{
    return ControlledFrameSpec(system_, c_, cp_, std::move(k));
}

ControlledFrameSpec ControlledFrameSpec::with_system(FusionSystem system) const
{
    return ControlledFrameSpec(std::move(system), c_, cp_, k_);
}

ControlledFrameSpec ControlledFrameSpec::with_controllers(Operator c, Operator cp) const
{
    return ControlledFrameSpec(system_, std::move(c), std::move(cp), k_);
}

Complex block_inner(const BlockVector& a, const BlockVector& b)
{
    if (a.blocks.size() != b.blocks.size()) {
        throw Error(ErrorKind::InvalidArgument, "block vectors have different block counts");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.blocks.size(); ++i) {
        acc += b.blocks[i].dot(a.blocks[i]);  // <a_i, b_i> = b_i^H a_i
    }
    return acc;
}

double block_norm_squared(const BlockVector& a)
{
    double acc = 0.0;
    for (const auto& v : a.blocks) {
        acc += v.squaredNorm();
    }
    return acc;
}

namespace {

void require_vector(const ControlledFrameSpec& spec, const Vector& f)
{
    if (f.size() != spec.dim()) {
        throw Error(ErrorKind::InvalidArgument, "vector dimension does not match the frame");
    }
}

/// S checked for self-adjointness at frame tolerance, then symmetrized.
Operator hermitian_frame_operator(const ControlledFrameSpec& spec, const Tolerance& tol)
{
    const Operator s = frame_operator(spec);
    const double defect = self_adjoint_defect(s);
    if (defect > frame_tolerance(spec, tol)) {
        throw Error(ErrorKind::NonSelfAdjointS,
                    "frame operator is not self-adjoint (||S - S*|| = " + std::to_string(defect) + ")");
    }
    return Operator((s.matrix() + s.matrix().adjoint()) / 2.0);
}

std::vector<Operator> block_roots(const ControlledFrameSpec& spec, const Tolerance& tol, BlockRoot root)
{
    std::vector<Operator> roots;
    roots.reserve(spec.system().size());
    for (std::size_t i = 0; i < spec.system().size(); ++i) {
        Operator b = block_operator(spec, i);
        if (!is_positive(b, tol)) {
            throw Error(ErrorKind::NotPositiveBlock,
                        "C'* pi_W C is not positive for item " + std::to_string(i), i);
        }
        roots.push_back(root == BlockRoot::Principal ? sqrt_psd(b, tol) : std::move(b));
    }
    return roots;
}

}  // namespace

double frame_tolerance(const ControlledFrameSpec& spec, const Tolerance& tol)
{
    const double s_norm = op_norm(frame_operator(spec));
    const double k_norm = op_norm(spec.K());
    return tol.scale(spec.dim(), std::max(s_norm, k_norm * k_norm));
}

double frame_sum(const ControlledFrameSpec& spec, const Vector& f, const Tolerance& tol)
{
    require_vector(spec, f);
    const Vector cf = spec.C()(f);
    const Vector cpf = spec.Cp()(f);
    Complex acc{0.0, 0.0};
    for (const auto& item : spec.system().items()) {
        const Matrix& b = item.subspace.basis();
        const Vector x = b.adjoint() * cf;
        const Vector y = b.adjoint() * cpf;
        acc += item.weight * item.weight * y.dot(x);
    }
    const double limit = frame_tolerance(spec, tol) * std::max(1.0, f.squaredNorm());
    if (std::abs(acc.imag()) > limit) {
        throw Error(ErrorKind::NonRealForm,
                    "frame quadratic form has imaginary part " + std::to_string(acc.imag()));
    }
    return acc.real();
}

Operator frame_operator(const ControlledFrameSpec& spec)
{
    const Index n = spec.dim();
    Matrix s = Matrix::Zero(n, n);
    const Matrix cp_adj = spec.Cp().matrix().adjoint();
    for (const auto& item : spec.system().items()) {
        const Matrix& b = item.subspace.basis();
        s += (item.weight * item.weight) * (cp_adj * b) * (b.adjoint() * spec.C().matrix());
    }
    return Operator(std::move(s));
}

Operator plain_frame_operator(const FusionSystem& system)
{
    const Index n = system.ambient_dim();
    Matrix s = Matrix::Zero(n, n);
    for (const auto& item : system.items()) {
        const Matrix& b = item.subspace.basis();
        s += (item.weight * item.weight) * b * b.adjoint();
    }
    return Operator(std::move(s));
}

Operator block_operator(const ControlledFrameSpec& spec, std::size_t item)
{
    if (item >= spec.system().size()) {
        throw Error(ErrorKind::InvalidArgument, "item index out of range");
    }
    const Matrix& b = spec.system().items()[item].subspace.basis();
    return Operator((spec.Cp().matrix().adjoint() * b) * (b.adjoint() * spec.C().matrix()));
}

BlockVector analysis_apply(const ControlledFrameSpec& spec, const Vector& f, const Tolerance& tol, BlockRoot root)
{
    require_vector(spec, f);
    const auto roots = block_roots(spec, tol, root);
    BlockVector out;
    out.blocks.reserve(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out.blocks.push_back(spec.system().items()[i].weight * roots[i](f));
    }
    return out;
}

Vector synthesis_apply(const ControlledFrameSpec& spec, const BlockVector& g, const Tolerance& tol, BlockRoot root)
{
    if (g.blocks.size() != spec.system().size()) {
        throw Error(ErrorKind::InvalidArgument, "block count does not match item count");
    }
    const auto roots = block_roots(spec, tol, root);
    Vector out = Vector::Zero(spec.dim());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        out += spec.system().items()[i].weight * roots[i](g.blocks[i]);
    }
    return out;
}

Matrix synthesis_matrix(const ControlledFrameSpec& spec, const Tolerance& tol, BlockRoot root)
{
    const Index n = spec.dim();
    const auto roots = block_roots(spec, tol, root);
    Matrix t(n, n * static_cast<Index>(roots.size()));
    for (std::size_t i = 0; i < roots.size(); ++i) {
        t.middleCols(static_cast<Index>(i) * n, n) = spec.system().items()[i].weight * roots[i].matrix();
    }
    return t;
}

BoundWitness optimal_upper_bound(const ControlledFrameSpec& spec, const Tolerance& tol)
{
    const Operator s = hermitian_frame_operator(spec, tol);
    const auto eig = hermitian_eigen(s.matrix());
    const Index top = eig.values.size() - 1;
    return {eig.values(top), eig.vectors.col(top)};
}

BoundWitness optimal_lower_bound(const ControlledFrameSpec& spec, const Tolerance& tol)
{
    const Operator s = hermitian_frame_operator(spec, tol);
    const double k_norm = op_norm(spec.K());
    if (k_norm <= tol.scale(spec.dim(), 0.0)) {
        throw Error(ErrorKind::ZeroK, "K vanishes within tolerance");
    }
    const Operator g = spec.K() * adjoint(spec.K());
    const auto pm = pencil_min(s, Operator((g.matrix() + g.matrix().adjoint()) / 2.0), tol);
    return {pm.value, pm.witness};
}

BoundsReport classify(const ControlledFrameSpec& spec, const Tolerance& tol)
{
    BoundsReport r;
    const auto upper = optimal_upper_bound(spec, tol);
    const auto lower = optimal_lower_bound(spec, tol);
    const double s = frame_tolerance(spec, tol);
    r.upper = upper.value;
    r.upper_witness = upper.witness;
    r.lower = lower.value;
    r.lower_witness = lower.witness;
    r.is_frame = r.lower > s;
    r.is_parseval = std::abs(r.lower - 1.0) <= s && std::abs(r.upper - 1.0) <= s;
    r.tol_used = tol;
    try {
        const double norm = spectral_norm(synthesis_matrix(spec, tol));
        r.synthesis_norm = norm;
        r.bessel_consistent = norm <= std::sqrt(std::max(0.0, r.upper)) + s;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotPositiveBlock) {
            throw;
        }
    }
    return r;
}

DefinitionCheck verify_definition(const ControlledFrameSpec& spec, double lower, double upper,
                                  std::size_t trials, std::uint64_t seed, const Tolerance& tol)
{
    if (trials == 0) {
        throw Error(ErrorKind::InvalidArgument, "verify_definition needs at least one trial");
    }
    const double s = frame_tolerance(spec, tol);
    const Matrix k_adj = spec.K().matrix().adjoint();
    Rng rng(seed);
    DefinitionCheck out;
    out.trials = trials;
    out.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
        const Vector f = random_unit_vector(rng, spec.dim());
        const double sum = frame_sum(spec, f, tol);
        const double lower_slack = sum - lower * (k_adj * f).squaredNorm();
        const double upper_slack = upper - sum;
        const double margin = std::min(lower_slack, upper_slack);
        if (lower_slack < -s || upper_slack < -s) {
            ++out.violations;
        }
        if (margin < out.worst_margin) {
            out.worst_margin = margin;
            out.worst_witness = f;
        }
    }
    out.passed = out.violations == 0;
    return out;
}

bool frame_operator_sandwich(const ControlledFrameSpec& spec, const BoundsReport& report, const Tolerance& tol)
{
    const Operator s = frame_operator(spec);
    const Operator kk = spec.K() * adjoint(spec.K());
    return loewner_leq(Complex(report.lower) * kk, s, tol) &&
           loewner_leq(s, Operator::scalar(spec.dim(), report.upper), tol);
}

RestrictedInverse s_restricted_inverse(const ControlledFrameSpec& spec, const Tolerance& tol,
                                       std::size_t samples, std::uint64_t seed)
{
    const auto report = classify(spec, tol);
    if (!report.is_frame) {
        throw Error(ErrorKind::NotAFrame, "lower frame bound vanishes; S is not invertible on R_K");
    }
    const Subspace domain = range_basis(spec.K(), tol);
    if (domain.dim() == 0) {
        throw Error(ErrorKind::ZeroK, "range of K is trivial");
    }
    const Matrix s = frame_operator(spec).matrix();
    const Matrix sq = s * domain.basis();
    Eigen::JacobiSVD<Matrix> svd(sq);
    const auto& sv = svd.singularValues();
    const double s_tol = frame_tolerance(spec, tol);
    if (sv(sv.size() - 1) <= s_tol) {
        throw Error(ErrorKind::SingularRestriction, "S restricted to R_K is singular");
    }
    const double k_pinv_norm = op_norm(pinv(spec.K(), tol));

    RestrictedInverse out{
        .inverse = Operator(domain.basis() * pinv(sq, tol)),
        .domain = domain,
        .image = orthonormalize_columns(sq, tol),
        .lo = 1.0 / report.upper,
        .hi = k_pinv_norm * k_pinv_norm / report.lower,
    };

    Rng rng(seed);
    out.samples = samples;
    out.worst_margin = std::numeric_limits<double>::infinity();
    const Index k = out.image.dim();
    for (std::size_t t = 0; t < samples; ++t) {
        const Vector f = out.image.basis() * random_unit_vector(rng, k);
        const double g = out.inverse(f).norm();
        const double fn = f.norm();
        out.worst_margin = std::min({out.worst_margin, g - out.lo * fn, out.hi * fn - g});
    }
    out.certified = samples == 0 || out.worst_margin >= -s_tol;
    return out;
}

}  // namespace ckff
