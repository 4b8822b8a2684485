#include "ckff/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ckff/operator_core.hpp"
#include "ckff/random.hpp"

namespace ckff {

std::string_view to_string(Theorem t)
{
    switch (t) {
    case Theorem::RestrictToRange: return "restrict_to_range";
    case Theorem::TransferToT: return "transfer_frame_to_T";
    case Theorem::CombineK: return "combine_k";
    case Theorem::StripToPlain: return "strip_controllers/to_plain";
    case Theorem::StripFromPlain: return "strip_controllers/from_plain";
    case Theorem::UnitaryTransform: return "unitary_transform";
    case Theorem::UnitaryCorollary: return "unitary_transform_corollary";
    case Theorem::Perturbation: return "perturb_check";
    }
    return "unknown";
}

namespace {

constexpr std::uint64_t kSamplingSeed = 0x5eedf00dULL;
constexpr std::size_t kSamples = 256;

class HypothesisLog {
public:
    /// residual <= limit
    void within(std::string name, double residual, double limit) { add(std::move(name), limit - residual); }
    /// value >= threshold
    void at_least(std::string name, double value, double threshold) { add(std::move(name), value - threshold); }

    void throw_if_failed(ErrorKind kind = ErrorKind::HypothesisFailed) const
    {
        if (std::any_of(log_.begin(), log_.end(), [](const auto& h) { return !h.pass; })) {
            throw HypothesisError(kind, log_);
        }
    }

    std::vector<Hypothesis> take() { return std::move(log_); }

private:
    void add(std::string name, double margin)
    {
        const bool pass = std::isfinite(margin) && margin >= 0.0;
        log_.push_back({std::move(name), margin, pass});
    }

    std::vector<Hypothesis> log_;
};

double commutator_norm(const Operator& a, const Operator& b)
{
    return spectral_norm(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

double commutator_limit(const Operator& a, const Operator& b, const Tolerance& tol)
{
    return tol.scale(a.dim(), op_norm(a) * op_norm(b));
}

void require_nonzero_k(const Operator& k, const Tolerance& tol)
{
    if (op_norm(k) <= tol.scale(k.dim(), 0.0)) {
        throw Error(ErrorKind::ZeroK, "K vanishes within tolerance");
    }
}

void conclude(PropagatedBounds& out, double s)
{
    out.conclusion_holds = out.lower <= out.reference_lower + s && out.upper >= out.reference_upper - s;
}

/// Extreme eigenvalues of Q* M Q for a Hermitian M and orthonormal Q.
SpectralBounds compressed_spectrum(const Operator& m, const Subspace& q)
{
    const Matrix c = q.basis().adjoint() * m.matrix() * q.basis();
    const auto eig = hermitian_eigen(c);
    return {eig.values(0), eig.values(eig.values.size() - 1)};
}

/// Checks the supplied (A, B) against the optimal bounds of `report`.
void log_bounds_valid(HypothesisLog& log, const std::string& prefix, const BoundsReport& report, double lower,
                      double upper, double s)
{
    log.at_least(prefix + "lower_bound_valid", report.lower + s, lower);
    log.at_least(prefix + "upper_bound_valid", upper + s, report.upper);
}

TransportResult transport(const ControlledFrameSpec& spec, const Operator& u, const Operator& u_inv,
                          HypothesisLog log, Theorem source, const Tolerance& tol)
{
    log.throw_if_failed();
    const auto original = classify(spec, tol);

    std::vector<FusionItem> moved;
    moved.reserve(spec.system().size());
    for (const auto& item : spec.system().items()) {
        moved.push_back({orthonormalize_columns(u.matrix() * item.subspace.basis(), tol), item.weight});
    }
    ControlledFrameSpec new_spec = spec.with_system(FusionSystem(spec.dim(), std::move(moved)));
    const auto transported = classify(new_spec, tol);

    const double nu = op_norm(u);
    const double nu_inv = op_norm(u_inv);
    const double factor = nu * nu * nu_inv * nu_inv;

    PropagatedBounds out;
    out.source = source;
    out.lower = original.lower / factor;
    out.upper = original.upper * factor;
    out.hypotheses = log.take();
    out.reference_lower = transported.lower;
    out.reference_upper = transported.upper;
    conclude(out, std::max(frame_tolerance(spec, tol), frame_tolerance(new_spec, tol)));
    return {std::move(new_spec), std::move(out)};
}

struct RangeLeak {
    double residual;
    double limit;
};

/// ||(I - P_{R_K}) T|| against its threshold.
RangeLeak range_leak(const Operator& t, const Subspace& range_k, const Tolerance& tol)
{
    const Matrix& q = range_k.basis();
    const Matrix leak = t.matrix() - q * (q.adjoint() * t.matrix());
    return {spectral_norm(leak), tol.scale(t.dim(), op_norm(t))};
}

}  // namespace

PropagatedBounds restrict_to_range(const ControlledFrameSpec& spec, double lower, double upper, const Tolerance& tol)
{
    require_nonzero_k(spec.K(), tol);
    const double s = frame_tolerance(spec, tol);
    const auto report = classify(spec, tol);

    HypothesisLog log;
    log_bounds_valid(log, "", report, lower, upper, s);
    log.throw_if_failed();

    const double kp = op_norm(pinv(adjoint(spec.K()), tol));
    const Subspace range = range_basis(spec.K(), tol);
    const Operator frame_op = frame_operator(spec);
    const auto restricted = compressed_spectrum(frame_op, range);

    PropagatedBounds out;
    out.source = Theorem::RestrictToRange;
    out.lower = lower / (kp * kp);
    out.upper = upper;
    out.hypotheses = log.take();
    out.reference_lower = restricted.min;
    out.reference_upper = restricted.max;
    conclude(out, s);

    Rng rng(kSamplingSeed);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < kSamples; ++t) {
        const Vector f = range.basis() * random_unit_vector(rng, range.dim());
        worst = std::min(worst, frame_sum(spec, f, tol) - out.lower * f.squaredNorm());
    }
    out.conclusion_holds = out.conclusion_holds && worst >= -s;
    out.note = "sampled lower margin on R_K: " + std::to_string(worst);
    return out;
}

double douglas_lambda(const Operator& t, const Operator& k, const Tolerance& tol)
{
    const Index n = k.dim();
    if (t.dim() != n) {
        throw Error(ErrorKind::InvalidArgument, "T and K differ in dimension");
    }
    const Subspace range = range_basis(k, tol);
    const auto leak = range_leak(t, range, tol);
    if (leak.residual > leak.limit) {
        throw HypothesisError(ErrorKind::RangeNotContained,
                              {{"range_contained", leak.limit - leak.residual, false}});
    }
    if (op_norm(t) <= tol.scale(n, 0.0) || range.dim() == 0) {
        return 0.0;
    }
    const Matrix& q = range.basis();
    const Matrix tq = q.adjoint() * t.matrix();
    const Matrix kq = q.adjoint() * k.matrix();
    const auto g = hermitian_eigen(kq * kq.adjoint());
    const Eigen::VectorXd d_inv_sqrt = g.values.cwiseMax(std::numeric_limits<double>::min()).cwiseSqrt().cwiseInverse();
    const Matrix whiten = g.vectors * d_inv_sqrt.asDiagonal();
    const Matrix reduced = whiten.adjoint() * (tq * tq.adjoint()) * whiten;
    const auto eig = hermitian_eigen(reduced);
    return std::max(0.0, eig.values(eig.values.size() - 1));
}

PropagatedBounds transfer_frame_to_T(const ControlledFrameSpec& spec, double lower, double upper, const Operator& t,
                                     const Tolerance& tol)
{
    const double lambda = douglas_lambda(t, spec.K(), tol);
    if (lambda <= tol.scale(spec.dim(), 0.0)) {
        throw Error(ErrorKind::ZeroOperator, "T vanishes; any lower bound holds");
    }
    const double s = frame_tolerance(spec, tol);
    const auto report = classify(spec, tol);

    HypothesisLog log;
    const auto leak = range_leak(t, range_basis(spec.K(), tol), tol);
    log.within("range_contained", leak.residual, leak.limit);
    log_bounds_valid(log, "", report, lower, upper, s);
    log.throw_if_failed();

    const ControlledFrameSpec target = spec.with_K(t);
    const auto reference = classify(target, tol);

    PropagatedBounds out;
    out.source = Theorem::TransferToT;
    out.lower = lower / lambda;
    out.upper = upper;
    out.hypotheses = log.take();
    out.reference_lower = reference.lower;
    out.reference_upper = reference.upper;
    conclude(out, std::max(s, frame_tolerance(target, tol)));
    out.note = "lambda = " + std::to_string(lambda);
    return out;
}

PropagatedBounds combine_k(const ControlledFrameSpec& spec, const Operator& k1, const Operator& k2, double lower1,
                           double upper1, double lower2, double upper2, Complex alpha, Complex beta,
                           const Tolerance& tol)
{
    const Index n = spec.dim();
    if (k1.dim() != n || k2.dim() != n) {
        throw Error(ErrorKind::InvalidArgument, "K1, K2 dimensions do not match the frame");
    }
    const double overlap = spectral_norm(k2.matrix().adjoint() * k1.matrix());
    const double overlap_limit = tol.scale(n, op_norm(k1) * op_norm(k2));
    if (overlap > overlap_limit) {
        throw HypothesisError(ErrorKind::RangesNotOrthogonal,
                              {{"ranges_orthogonal", overlap_limit - overlap, false}});
    }
    const Operator k = alpha * k1 + beta * k2;
    require_nonzero_k(k, tol);

    const ControlledFrameSpec spec1 = spec.with_K(k1);
    const ControlledFrameSpec spec2 = spec.with_K(k2);
    const ControlledFrameSpec target = spec.with_K(k);
    const double s1 = frame_tolerance(spec1, tol);
    const double s2 = frame_tolerance(spec2, tol);

    HypothesisLog log;
    log.within("ranges_orthogonal", overlap, overlap_limit);
    log_bounds_valid(log, "K1_", classify(spec1, tol), lower1, upper1, s1);
    log_bounds_valid(log, "K2_", classify(spec2, tol), lower2, upper2, s2);
    log.at_least("K1_lower_positive", lower1, s1);
    log.at_least("K2_lower_positive", lower2, s2);
    log.throw_if_failed();

    const double a2 = std::norm(alpha);
    const double b2 = std::norm(beta);
    const auto reference = classify(target, tol);

    PropagatedBounds out;
    out.source = Theorem::CombineK;
    out.lower = lower1 * lower2 / (2.0 * (a2 * lower2 + b2 * lower1));
    out.upper = (upper1 + upper2) / 2.0;
    out.hypotheses = log.take();
    out.reference_lower = reference.lower;
    out.reference_upper = reference.upper;
    conclude(out, frame_tolerance(target, tol));
    out.note = "lower = A1*A2 / (2(|alpha|^2 A2 + |beta|^2 A1)), the constant the "
               "parallelogram bound ||(aK1+bK2)*f||^2 <= 2(|a|^2||K1*f||^2 + |b|^2||K2*f||^2) supports";
    return out;
}

StripResult strip_controllers(const ControlledFrameSpec& spec, const Tolerance& tol)
{
    const Index n = spec.dim();
    const Operator& c = spec.C();
    const Operator& cp = spec.Cp();
    const Operator& k = spec.K();
    const Operator s_plain = plain_frame_operator(spec.system());

    HypothesisLog log;
    log.within("C_commutes_K", commutator_norm(c, k), commutator_limit(c, k, tol));
    log.within("Cp_commutes_K", commutator_norm(cp, k), commutator_limit(cp, k, tol));
    log.within("S_plain_commutes_C", commutator_norm(s_plain, c), commutator_limit(s_plain, c, tol));
    log.within("S_plain_commutes_Cp", commutator_norm(s_plain, cp), commutator_limit(s_plain, cp, tol));
    log.within("C_commutes_Cp", commutator_norm(c, cp), commutator_limit(c, cp, tol));
    log.within("C_self_adjoint", self_adjoint_defect(c), tol.scale(n, op_norm(c)));
    log.within("Cp_self_adjoint", self_adjoint_defect(cp), tol.scale(n, op_norm(cp)));
    const auto ce = hermitian_eigen(c.matrix());
    const auto cpe = hermitian_eigen(cp.matrix());
    const double m = ce.values(0), big_m = ce.values(n - 1);
    const double mp = cpe.values(0), big_mp = cpe.values(n - 1);
    log.at_least("C_positive_invertible", m, tol.scale(n, big_m));
    log.at_least("Cp_positive_invertible", mp, tol.scale(n, big_mp));
    log.throw_if_failed();
    const auto hypotheses = log.take();

    const ControlledFrameSpec plain = spec.with_controllers(Operator::identity(n), Operator::identity(n));
    const auto plain_report = classify(plain, tol);
    const auto controlled_report = classify(spec, tol);

    StripResult out;
    auto& from = out.from_plain;
    from.source = Theorem::StripFromPlain;
    from.lower = m * mp * plain_report.lower;
    from.upper = big_m * big_mp * plain_report.upper;
    from.hypotheses = hypotheses;
    from.reference_lower = controlled_report.lower;
    from.reference_upper = controlled_report.upper;
    conclude(from, frame_tolerance(spec, tol));

    const Operator ccp((c.matrix() * cp.matrix() + (c.matrix() * cp.matrix()).adjoint()) / 2.0);
    const Operator root = sqrt_psd(ccp, tol);
    const double root_norm = op_norm(root);
    const double inv_root_norm = op_norm(pinv(root, tol));

    auto& to = out.to_plain;
    to.source = Theorem::StripToPlain;
    to.lower = controlled_report.lower / (root_norm * root_norm);
    to.upper = controlled_report.upper * inv_root_norm * inv_root_norm;
    to.hypotheses = hypotheses;
    to.reference_lower = plain_report.lower;
    to.reference_upper = plain_report.upper;
    conclude(to, frame_tolerance(plain, tol));
    return out;
}

TransportResult unitary_transform(const ControlledFrameSpec& spec, const Operator& u, const Tolerance& tol)
{
    const Index n = spec.dim();
    if (u.dim() != n) {
        throw Error(ErrorKind::InvalidArgument, "U dimension does not match the frame");
    }
    Eigen::JacobiSVD<Matrix> svd(u.matrix());
    const auto& sv = svd.singularValues();
    if (sv(n - 1) <= tol.scale(n, sv(0))) {
        throw Error(ErrorKind::NotInvertible, "U is not invertible");
    }
    const Operator u_inv(u.matrix().inverse());
    const Operator u_adj = adjoint(u);
    const Operator u_adj_inv = adjoint(u_inv);
    const Operator k_adj = adjoint(spec.K());

    HypothesisLog log;
    log.within("Cp_equals_C", op_norm(spec.Cp() - spec.C()), tol.scale(n, op_norm(spec.C())));
    log.within("U_adjoint_commutes_C", commutator_norm(u_adj, spec.C()), commutator_limit(u_adj, spec.C(), tol));
    log.within("K_adjoint_commutes_U_adjoint_inverse", commutator_norm(k_adj, u_adj_inv),
               commutator_limit(k_adj, u_adj_inv, tol));
    return transport(spec, u, u_inv, std::move(log), Theorem::UnitaryTransform, tol);
}

TransportResult unitary_transform_corollary(const ControlledFrameSpec& spec, const Operator& u, const Tolerance& tol)
{
    const Index n = spec.dim();
    if (u.dim() != n) {
        throw Error(ErrorKind::InvalidArgument, "U dimension does not match the frame");
    }
    const double unitarity = spectral_norm(u.matrix().adjoint() * u.matrix() - Matrix::Identity(n, n));
    if (unitarity > tol.scale(n, 1.0)) {
        throw Error(ErrorKind::NotUnitary, "||U*U - I|| = " + std::to_string(unitarity));
    }
    const Operator u_inv = adjoint(u);
    const Operator k_adj = adjoint(spec.K());

    HypothesisLog log;
    log.within("unitary", unitarity, tol.scale(n, 1.0));
    log.within("Cp_equals_C", op_norm(spec.Cp() - spec.C()), tol.scale(n, op_norm(spec.C())));
    log.within("U_inverse_commutes_C", commutator_norm(u_inv, spec.C()), commutator_limit(u_inv, spec.C(), tol));
    log.within("K_adjoint_commutes_U", commutator_norm(k_adj, u), commutator_limit(k_adj, u, tol));
    return transport(spec, u, u_inv, std::move(log), Theorem::UnitaryCorollary, tol);
}

PropagatedBounds perturb_check(const ControlledFrameSpec& spec_w, std::span<const Subspace> subspaces_v,
                               double radius, double lower, double upper, const Tolerance& tol)
{
    const auto& items = spec_w.system().items();
    if (subspaces_v.size() != items.size()) {
        throw Error(ErrorKind::InvalidArgument, "perturbed family must have one subspace per item");
    }
    if (!(radius > 0.0) || !(radius < lower)) {
        throw Error(ErrorKind::PreconditionViolated, "perturbation radius must satisfy 0 < R < A");
    }
    require_nonzero_k(spec_w.K(), tol);

    std::vector<FusionItem> perturbed;
    perturbed.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        perturbed.push_back({subspaces_v[i], items[i].weight});
    }
    const ControlledFrameSpec spec_v = spec_w.with_system(FusionSystem(spec_w.dim(), std::move(perturbed)));

    const Index n = spec_w.dim();
    const Matrix d = frame_operator(spec_v).matrix() - frame_operator(spec_w).matrix();
    const double s = frame_tolerance(spec_w, tol);
    const auto report_w = classify(spec_w, tol);
    const double kp = op_norm(pinv(spec_w.K(), tol));
    const double new_lower = lower - radius * kp * kp;

    const auto de = hermitian_eigen(d);
    Rng rng(kSamplingSeed);
    double q_min = std::numeric_limits<double>::infinity();
    double q_max = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < kSamples; ++t) {
        const Vector f = random_unit_vector(rng, n);
        const double q = f.dot(d * f).real();
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
    }

    HypothesisLog log;
    log.within("D_self_adjoint", spectral_norm(d - d.adjoint()), s);
    log.at_least("D_positive_definite", de.values(0), s);
    log.at_least("D_bounded_by_R", radius + s, de.values(n - 1));
    log.at_least("D_quotient_sampled", std::min(q_min - s, radius + s - q_max), 0.0);
    log_bounds_valid(log, "", report_w, lower, upper, s);
    log.at_least("lower_constant_positive", new_lower, s);
    log.throw_if_failed();

    const auto report_v = classify(spec_v, tol);
    const Subspace range = range_basis(spec_w.K(), tol);
    const Matrix& q = range.basis();
    const Matrix kq = q.adjoint() * spec_w.K().matrix();
    const Matrix sv = q.adjoint() * frame_operator(spec_v).matrix() * q;
    const auto restricted = pencil_min(Operator((sv + sv.adjoint()) / 2.0),
                                       Operator(kq * kq.adjoint()), tol);

    PropagatedBounds out;
    out.source = Theorem::Perturbation;
    out.lower = new_lower;
    out.upper = radius + upper;
    out.hypotheses = log.take();
    out.reference_lower = restricted.value;
    out.reference_upper = report_v.upper;
    conclude(out, std::max(s, frame_tolerance(spec_v, tol)));
    out.note = "lower bound on R_K is A - R*||K^+||^2 (sign of the exponent corrected)";
    return out;
}

}  // namespace ckff
