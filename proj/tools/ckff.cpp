// ckff: command-line front end for controlled K-fusion frames.
//
// Exit codes: 0 success / all checks pass, 1 a verification failed,
// 2 invalid input, configuration or usage.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ckff/frame.hpp"
#include "ckff/generate.hpp"
#include "ckff/spec_io.hpp"
#include "ckff/suite.hpp"
#include "ckff/transforms.hpp"

using namespace ckff;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

struct Globals {
    std::optional<double> tol_rel;
    std::optional<double> tol_abs;
    bool json = false;
};

/// Strict parse: the whole string must be a finite double.
std::optional<double> parse_double(const std::string& text)
{
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

Tolerance resolve_tolerance(const Globals& g)
{
    double rel = Tolerance::kDefaultRel;
    if (const char* env = std::getenv("CKFF_DEFAULT_TOL_REL")) {
        const auto parsed = parse_double(env);
        if (!parsed || !(*parsed > 0.0)) {
            throw Error(ErrorKind::InvalidConfig,
                        std::string("CKFF_DEFAULT_TOL_REL must be a positive finite number, got '") + env + "'");
        }
        rel = *parsed;
    }
    if (g.tol_rel) {
        rel = *g.tol_rel;
    }
    try {
        return Tolerance(rel, g.tol_abs.value_or(Tolerance::kDefaultAbs));
    } catch (const Error& e) {
        throw Error(ErrorKind::InvalidConfig, e.what());
    }
}

Json vector_to_json(const Vector& v)
{
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        out.push_back({v(i).real(), v(i).imag()});
    }
    return out;
}

Json tolerance_json(const Tolerance& t) { return {{"rel", t.rel()}, {"abs", t.abs()}}; }

Json hypotheses_json(const std::vector<Hypothesis>& hs)
{
    Json out = Json::array();
    for (const auto& h : hs) {
        out.push_back({{"name", h.name}, {"margin", h.margin}, {"pass", h.pass}});
    }
    return out;
}

Json bounds_json(const PropagatedBounds& b)
{
    return {
        {"theorem", std::string(to_string(b.source))},
        {"hypotheses", hypotheses_json(b.hypotheses)},
        {"propagated", {{"lower", b.lower}, {"upper", b.upper}}},
        {"classify", {{"lower", b.reference_lower}, {"upper", b.reference_upper}}},
        {"pass", b.conclusion_holds},
        {"note", b.note},
    };
}

void emit_document(const std::string& text, const std::string& out)
{
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

void print_bounds(const PropagatedBounds& b)
{
    std::cout << to_string(b.source) << "\n";
    for (const auto& h : b.hypotheses) {
        std::cout << "  hypothesis " << h.name << ": " << (h.pass ? "ok" : "FAILED") << " (margin " << h.margin
                  << ")\n";
    }
    std::cout << "  propagated bounds: [" << b.lower << ", " << b.upper << "]\n"
              << "  optimal bounds:    [" << b.reference_lower << ", " << b.reference_upper << "]\n"
              << "  conclusion: " << (b.conclusion_holds ? "holds" : "VIOLATED") << "\n";
    if (!b.note.empty()) {
        std::cout << "  note: " << b.note << "\n";
    }
}

int exit_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidInput:
    case ErrorKind::NotInvertible:
    case ErrorKind::NotUnitary:
    case ErrorKind::PreconditionViolated:
        return kExitInvalid;
    default:
        return kExitFail;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Laboratory for controlled K-fusion frames"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--tol-rel", g.tol_rel, "Relative tolerance (default 1e-9, or CKFF_DEFAULT_TOL_REL)")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-abs", g.tol_abs, "Absolute tolerance (default 1e-12)")->check(CLI::NonNegativeNumber);
    app.add_flag("--json", g.json, "Machine-readable report on stdout");

    // gen
    InstanceConfig gen_cfg;
    bool no_positivity = false;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen", "Generate a seeded random spec");
    gen->add_option("--dim", gen_cfg.dim, "Ambient dimension")->capture_default_str();
    gen->add_option("--subspaces", gen_cfg.n_subspaces, "Number of subspaces")->capture_default_str();
    gen->add_option("--max-subdim", gen_cfg.max_subdim, "Largest subspace dimension")->capture_default_str();
    gen->add_option("--condition", gen_cfg.controller_condition, "Controller condition number")
        ->capture_default_str();
    std::optional<Index> k_rank;
    gen->add_option("--k-rank", k_rank, "Rank of K (default: dim)");
    gen->add_option("--seed", gen_cfg.seed, "Seed")->capture_default_str();
    gen->add_flag("--no-positivity", no_positivity, "Draw C' independently of C");
    gen->add_option("--out", gen_out, "Output path (default stdout)");

    // example
    Index ex_n = 16;
    double alpha = 2.0, beta = 3.0;
    std::string ex_out;
    auto* example = app.add_subcommand("example", "Truncated diagonal example with C = alpha I, C' = beta I");
    example->add_option("--dim,-n", ex_n, "Truncation dimension")->capture_default_str();
    example->add_option("--alpha", alpha, "C = alpha I")->capture_default_str();
    example->add_option("--beta", beta, "C' = beta I")->capture_default_str();
    example->add_option("--out", ex_out, "Output path (default stdout)");

    // check
    std::string check_spec;
    std::optional<double> check_lower, check_upper;
    std::size_t trials = 10000;
    std::uint64_t check_seed = 0;
    auto* check = app.add_subcommand("check", "Randomized check of the frame inequalities");
    check->add_option("spec", check_spec, "Spec document")->required();
    check->add_option("--lower", check_lower, "Lower bound A (default: optimal)");
    check->add_option("--upper", check_upper, "Upper bound B (default: optimal)");
    check->add_option("--trials", trials, "Number of sampled unit vectors")->capture_default_str()->check(
        CLI::PositiveNumber);
    check->add_option("--seed", check_seed, "Sampling seed")->capture_default_str();

    // bounds
    std::string bounds_spec;
    auto* bounds = app.add_subcommand("bounds", "Optimal frame bounds and classification");
    bounds->add_option("spec", bounds_spec, "Spec document")->required();

    // transform
    std::string tr_spec, tr_u, tr_out;
    bool corollary = false;
    auto* transform = app.add_subcommand("transform", "Move every subspace by an invertible U");
    transform->add_option("spec", tr_spec, "Spec document")->required();
    transform->add_option("--u", tr_u, "JSON file holding U as rows of [re, im] pairs (or {\"U\": ...})")
        ->required();
    transform->add_flag("--corollary", corollary, "Use the unitary variant and its hypotheses");
    transform->add_option("--out", tr_out, "Write the transported spec here");

    // perturb
    std::string pt_spec, pt_v;
    double radius = 0.0;
    std::optional<double> pt_lower, pt_upper;
    auto* perturb = app.add_subcommand("perturb", "Bounds for a perturbed family of subspaces");
    perturb->add_option("spec", pt_spec, "Spec document for the original family")->required();
    perturb->add_option("--v", pt_v, "JSON file {\"subspaces\": [{\"basis\": ...}, ...]}")->required();
    perturb->add_option("--radius,-R", radius, "Perturbation radius R")->required();
    perturb->add_option("--lower", pt_lower, "Lower bound A (default: optimal)");
    perturb->add_option("--upper", pt_upper, "Upper bound B (default: optimal)");

    // suite
    SuiteConfig suite_cfg;
    std::vector<std::string> theorems;
    std::string mutate = "none";
    std::string suite_out;
    bool all = false;
    auto* suite = app.add_subcommand("suite", "Verify theorem conclusions on generated instances");
    suite->add_option("--theorems", theorems, "Theorem names or aliases")->delimiter(',');
    suite->add_flag("--all", all, "Run every registered theorem");
    suite->add_option("--instances", suite_cfg.instances, "Instances per theorem")->capture_default_str();
    suite->add_option("--seed", suite_cfg.seed, "Base seed")->capture_default_str();
    suite->add_option("--dim,--max-dim", suite_cfg.max_dim, "Largest instance dimension")->capture_default_str();
    suite->add_option("--jobs,-j", suite_cfg.jobs, "Worker threads (0 = hardware)")->capture_default_str();
    suite->add_option("--mutate", mutate, "Inject a defect (testing only)")
        ->check(CLI::IsMember({"none", "drop-block-root"}))
        ->group("");
    suite->add_option("--out", suite_out, "Also write JSON lines here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        const Tolerance tol = resolve_tolerance(g);

        if (*gen) {
            gen_cfg.k_rank = k_rank.value_or(gen_cfg.dim);
            gen_cfg.positivity = !no_positivity;
            const auto spec = gen_instance(gen_cfg);
            emit_document(serialize(spec, {{"generator", "gen_instance"},
                                           {"seed", std::to_string(gen_cfg.seed)},
                                           {"positivity", gen_cfg.positivity ? "true" : "false"}}),
                          gen_out);
            return 0;
        }

        if (*example) {
            std::ostringstream a, b;
            a << alpha;
            b << beta;
            const auto spec = build_paper_example(ex_n, alpha, beta);
            emit_document(serialize(spec, {{"generator", "diagonal_example"}, {"alpha", a.str()}, {"beta", b.str()}}),
                          ex_out);
            return 0;
        }

        if (*bounds) {
            const auto doc = read_spec_file(bounds_spec, tol);
            const auto r = classify(doc.spec, tol);
            if (g.json) {
                Json j{{"lower", r.lower},
                       {"upper", r.upper},
                       {"is_frame", r.is_frame},
                       {"is_parseval", r.is_parseval},
                       {"bessel_consistent", r.bessel_consistent},
                       {"lower_witness", vector_to_json(r.lower_witness)},
                       {"upper_witness", vector_to_json(r.upper_witness)},
                       {"tol", tolerance_json(tol)}};
                j["synthesis_norm"] = r.synthesis_norm ? Json(*r.synthesis_norm) : Json(nullptr);
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "lower bound A = " << r.lower << "\nupper bound B = " << r.upper
                          << "\nframe: " << (r.is_frame ? "yes" : "no")
                          << "\nParseval: " << (r.is_parseval ? "yes" : "no") << "\n";
                if (r.synthesis_norm) {
                    std::cout << "||T*|| = " << *r.synthesis_norm << " (sqrt(B) = " << std::sqrt(r.upper) << ")\n";
                } else {
                    std::cout << "analysis operator undefined: some C'* pi_W C is not positive\n";
                }
            }
            return r.bessel_consistent ? 0 : kExitFail;
        }

        if (*check) {
            const auto doc = read_spec_file(check_spec, tol);
            double lower = 0.0, upper = 0.0;
            if (!check_lower || !check_upper) {
                const auto r = classify(doc.spec, tol);
                lower = r.lower;
                upper = r.upper;
            }
            lower = check_lower.value_or(lower);
            upper = check_upper.value_or(upper);
            const auto c = verify_definition(doc.spec, lower, upper, trials, check_seed, tol);
            if (g.json) {
                std::cout << Json{{"lower", lower},
                                  {"upper", upper},
                                  {"passed", c.passed},
                                  {"trials", c.trials},
                                  {"violations", c.violations},
                                  {"worst_margin", c.worst_margin},
                                  {"worst_witness", vector_to_json(c.worst_witness)},
                                  {"tol", tolerance_json(tol)}}
                                 .dump()
                          << "\n";
            } else {
                std::cout << "bounds (" << lower << ", " << upper << "): " << (c.passed ? "pass" : "FAIL") << ", "
                          << c.violations << " of " << c.trials << " samples violate, worst margin " << c.worst_margin
                          << "\n";
            }
            return c.passed ? 0 : kExitFail;
        }

        if (*transform) {
            const auto doc = read_spec_file(tr_spec, tol);
            const Json uj = read_json_file(tr_u);
            const Json& um = uj.is_object() && uj.contains("U") ? uj["U"] : uj;
            const Operator u(matrix_from_json(um, doc.spec.dim(), doc.spec.dim()));
            const auto result = corollary ? unitary_transform_corollary(doc.spec, u, tol)
                                          : unitary_transform(doc.spec, u, tol);
            if (!tr_out.empty()) {
                write_text_file(tr_out, serialize(result.new_spec, doc.metadata));
            }
            if (g.json) {
                std::cout << bounds_json(result.bounds).dump() << "\n";
            } else {
                print_bounds(result.bounds);
            }
            return result.bounds.conclusion_holds ? 0 : kExitFail;
        }

        if (*perturb) {
            const auto doc = read_spec_file(pt_spec, tol);
            const Json vj = read_json_file(pt_v);
            if (!vj.is_object() || !vj.contains("subspaces") || !vj["subspaces"].is_array()) {
                throw Error(ErrorKind::InvalidInput, "perturbation file needs a \"subspaces\" array");
            }
            std::vector<Subspace> vs;
            for (const auto& s : vj["subspaces"]) {
                if (!s.is_object() || !s.contains("basis") || !s["basis"].is_array() || s["basis"].empty()) {
                    throw Error(ErrorKind::InvalidInput, "each subspace needs a \"basis\" of rows");
                }
                const auto k = static_cast<Index>(s["basis"][0].size());
                try {
                    vs.emplace_back(matrix_from_json(s["basis"], doc.spec.dim(), k), tol);
                } catch (const Error& e) {
                    throw Error(ErrorKind::InvalidInput, e.what());
                }
            }
            double lower = 0.0, upper = 0.0;
            if (!pt_lower || !pt_upper) {
                const auto r = classify(doc.spec, tol);
                lower = r.lower;
                upper = r.upper;
            }
            const auto b =
                perturb_check(doc.spec, vs, radius, pt_lower.value_or(lower), pt_upper.value_or(upper), tol);
            if (g.json) {
                std::cout << bounds_json(b).dump() << "\n";
            } else {
                print_bounds(b);
            }
            return b.conclusion_holds ? 0 : kExitFail;
        }

        if (*suite) {
            suite_cfg.theorems = all ? theorem_names() : theorems;
            suite_cfg.tol = tol;
            suite_cfg.mutation = mutate == "drop-block-root" ? Mutation::DropBlockRoot : Mutation::None;
            const auto reports = run_suite(suite_cfg);
            std::ostringstream lines;
            for (const auto& r : reports) {
                lines << report_to_json(r).dump() << "\n";
            }
            if (!suite_out.empty()) {
                write_text_file(suite_out, lines.str());
            }
            const int code = suite_exit_code(reports);
            if (g.json) {
                std::cout << lines.str();
            } else {
                std::size_t failed = 0;
                for (const auto& r : reports) {
                    if (!r.pass) {
                        ++failed;
                        std::cout << "FAIL " << r.theorem << " instance " << r.instance_id << " seed " << r.seed
                                  << (r.error ? " (" + *r.error + ")" : std::string()) << "\n";
                    }
                }
                std::cout << reports.size() - failed << "/" << reports.size() << " instances pass\n";
            }
            return code;
        }
    } catch (const HypothesisError& e) {
        if (g.json) {
            std::cout << Json{{"error", std::string(to_string(e.kind()))},
                              {"message", e.what()},
                              {"hypotheses", hypotheses_json(e.checked())},
                              {"pass", false}}
                             .dump()
                      << "\n";
        }
        std::cerr << "ckff: " << to_string(e.kind()) << ": hypothesis '" << e.first_failure().name
                  << "' fails (margin " << e.first_failure().margin << ")\n";
        return kExitFail;
    } catch (const Error& e) {
        std::cerr << "ckff: " << e.what() << "\n";
        return exit_for(e.kind());
    }
    return kExitInvalid;
}
