#include "ckff/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <thread>

#include "ckff/frame.hpp"
#include "ckff/generate.hpp"
#include "ckff/operator_core.hpp"
#include "ckff/random.hpp"
#include "ckff/transforms.hpp"

namespace ckff {

namespace {

using Runner = std::function<void(VerificationReport&, Rng&, Index, const SuiteConfig&)>;

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h = (h ^ c) * 0x100000001b3ULL;
    }
    return h;
}

ConclusionReport conclusion_from(std::string name, const PropagatedBounds& b)
{
    return {std::move(name), b.lower, b.upper, b.reference_lower, b.reference_upper, b.conclusion_holds};
}

void absorb(VerificationReport& r, const PropagatedBounds& b)
{
    r.hypotheses = b.hypotheses;
    r.conclusion = conclusion_from(std::string(to_string(b.source)), b);
    r.note = b.note;
}

ControlledFrameSpec random_rank_spec(Rng& rng, Index n)
{
    InstanceConfig cfg;
    cfg.dim = n;
    cfg.n_subspaces = rng.integer(1, n + 1);
    cfg.max_subdim = rng.integer(1, n);
    cfg.controller_condition = rng.uniform(1.0, 8.0);
    cfg.k_rank = rng.integer(1, n);
    cfg.seed = splitmix64(static_cast<std::uint64_t>(rng.integer(0, Index{1} << 40)));
    return gen_instance(cfg);
}

void run_sandwich(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const auto& tol = config.tol;
    const ControlledFrameSpec spec = random_rank_spec(rng, n);
    const auto report = classify(spec, tol);
    const double s = frame_tolerance(spec, tol);
    const Matrix sm = frame_operator(spec).matrix();
    const BlockRoot root = config.mutation == Mutation::DropBlockRoot ? BlockRoot::Omitted : BlockRoot::Principal;
    const Matrix t = synthesis_matrix(spec, tol, root);

    const double defect = spectral_norm(sm - sm.adjoint());
    const double factor = spectral_norm(sm - t * t.adjoint());
    r.hypotheses = {
        {"S_self_adjoint", s - defect, defect <= s},
        {"S_equals_TstarT", s - factor, factor <= s},
    };
    r.conclusion = {"sandwich", report.lower, report.upper, report.lower, report.upper,
                    frame_operator_sandwich(spec, report, tol)};
    r.note = "||S - S*|| = " + std::to_string(defect) + ", ||S - TT*|| = " + std::to_string(factor);
}

void run_restrict(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const ControlledFrameSpec spec = random_rank_spec(rng, n);
    const auto b = classify(spec, config.tol);
    absorb(r, restrict_to_range(spec, b.lower, b.upper, config.tol));
}

void run_transfer(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const auto inst = gen::transfer_instance(rng, n);
    const auto b = classify(inst.spec, config.tol);
    absorb(r, transfer_frame_to_T(inst.spec, b.lower, b.upper, inst.t, config.tol));
}

void run_combine(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const auto inst = gen::combine_instance(rng, n);
    const auto b1 = classify(inst.spec.with_K(inst.k1), config.tol);
    const auto b2 = classify(inst.spec.with_K(inst.k2), config.tol);
    absorb(r, combine_k(inst.spec, inst.k1, inst.k2, b1.lower, b1.upper, b2.lower, b2.upper, inst.alpha, inst.beta,
                        config.tol));
}

void run_strip(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const auto result = strip_controllers(gen::strip_instance(rng, n), config.tol);
    absorb(r, result.from_plain);
    r.extra_conclusions.push_back(conclusion_from(std::string(to_string(result.to_plain.source)), result.to_plain));
}

void run_unitary(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const auto inst = gen::transport_instance(rng, n, false);
    absorb(r, unitary_transform(inst.spec, inst.u, config.tol).bounds);
}

void run_corollary(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const auto inst = gen::transport_instance(rng, n, true);
    absorb(r, unitary_transform_corollary(inst.spec, inst.u, config.tol).bounds);
}

void run_perturb(VerificationReport& r, Rng& rng, Index n, const SuiteConfig& config)
{
    const auto inst = gen::perturb_instance(rng, n);
    const auto b = classify(inst.spec_w, config.tol);
    absorb(r, perturb_check(inst.spec_w, inst.subspaces_v, inst.radius, b.lower, b.upper, config.tol));
}

struct Entry {
    std::string name;
    std::vector<std::string> aliases;
    Runner run;
};

const std::vector<Entry>& registry()
{
    static const std::vector<Entry> entries{
        {"sandwich", {"frame_operator_sandwich"}, run_sandwich},
        {"restrict_to_range", {"restrict"}, run_restrict},
        {"transfer_frame_to_T", {"transfer", "douglas"}, run_transfer},
        {"combine_k", {"combine"}, run_combine},
        {"strip_controllers", {"strip"}, run_strip},
        {"unitary_transform", {"unitary"}, run_unitary},
        {"unitary_transform_corollary", {"corollary", "unitary_corollary"}, run_corollary},
        {"perturb_check", {"perturb", "perturbation"}, run_perturb},
    };
    return entries;
}

const Entry& lookup(const std::string& name)
{
    for (const auto& e : registry()) {
        if (e.name == name || std::find(e.aliases.begin(), e.aliases.end(), name) != e.aliases.end()) {
            return e;
        }
    }
    throw Error(ErrorKind::InvalidConfig, "unknown theorem '" + name + "'");
}

void validate(const SuiteConfig& config)
{
    if (config.max_dim < 2) {
        throw Error(ErrorKind::InvalidConfig, "max_dim must be at least 2");
    }
    for (const auto& t : config.theorems) {
        lookup(t);
    }
}

}  // namespace

const std::vector<std::string>& theorem_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& e : registry()) {
            out.push_back(e.name);
        }
        return out;
    }();
    return names;
}

std::string canonical_theorem(const std::string& name) { return lookup(name).name; }

VerificationReport verify_instance(const std::string& theorem, std::size_t instance_id, std::uint64_t seed,
                                   const SuiteConfig& config)
{
    const Entry& entry = lookup(theorem);
    VerificationReport r;
    r.instance_id = instance_id;
    r.seed = seed;
    r.theorem = entry.name;

    const auto start = std::chrono::steady_clock::now();
    Rng rng(seed);
    r.dim = rng.integer(2, config.max_dim);
    try {
        entry.run(r, rng, r.dim, config);
    } catch (const HypothesisError& e) {
        r.hypotheses = e.checked();
        r.error = e.what();
    } catch (const Error& e) {
        r.error = e.what();
    }
    r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const bool hypotheses_pass =
        std::all_of(r.hypotheses.begin(), r.hypotheses.end(), [](const Hypothesis& h) { return h.pass; });
    const bool extras_pass = std::all_of(r.extra_conclusions.begin(), r.extra_conclusions.end(),
                                         [](const ConclusionReport& c) { return c.pass; });
    r.pass = !r.error && hypotheses_pass && r.conclusion.pass && extras_pass;
    return r;
}

std::vector<VerificationReport> run_suite(const SuiteConfig& config)
{
    validate(config);
    struct Job {
        std::string theorem;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const auto& name : config.theorems) {
        const std::string canonical = canonical_theorem(name);
        const std::uint64_t base = splitmix64(config.seed ^ fnv1a(canonical));
        for (std::size_t i = 0; i < config.instances; ++i) {
            jobs.push_back({canonical, splitmix64(base + i)});
        }
    }

    std::vector<VerificationReport> reports(jobs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            reports[i] = verify_instance(jobs[i].theorem, i, jobs[i].seed, config);
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned count =
        static_cast<unsigned>(std::min<std::size_t>(config.jobs == 0 ? hw : config.jobs, std::max<std::size_t>(1, jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < count; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    return reports;
}

int suite_exit_code(const std::vector<VerificationReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; }) ? 0 : 1;
}

namespace {

Json conclusion_to_json(const ConclusionReport& c)
{
    return {
        {"name", c.name},
        {"propagated", {{"lower", c.propagated_lower}, {"upper", c.propagated_upper}}},
        {"classify", {{"lower", c.classify_lower}, {"upper", c.classify_upper}}},
        {"pass", c.pass},
    };
}

}  // namespace

Json report_to_json(const VerificationReport& r)
{
    Json hyps = Json::array();
    for (const auto& h : r.hypotheses) {
        hyps.push_back({{"name", h.name}, {"margin", h.margin}, {"pass", h.pass}});
    }
    Json extras = Json::array();
    for (const auto& c : r.extra_conclusions) {
        extras.push_back(conclusion_to_json(c));
    }
    Json j{
        {"instance_id", r.instance_id},
        {"seed", r.seed},
        {"theorem", r.theorem},
        {"dim", r.dim},
        {"hypotheses", std::move(hyps)},
        {"conclusion", conclusion_to_json(r.conclusion)},
        {"extra_conclusions", std::move(extras)},
        {"pass", r.pass},
        {"timing_ms", r.timing_ms},
    };
    if (!r.note.empty()) {
        j["note"] = r.note;
    }
    if (r.error) {
        j["error"] = *r.error;
    }
    return j;
}

}  // namespace ckff
