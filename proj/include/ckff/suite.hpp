#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ckff/error.hpp"
#include "ckff/spec_io.hpp"
#include "ckff/tolerance.hpp"

namespace ckff {

/// Deliberate defects for checking that the suite can fail.
enum class Mutation {
    None,
    /// Analysis/synthesis use C'* pi_i C instead of its square root.
    DropBlockRoot,
};

struct SuiteConfig {
    /// Registry names or aliases; an empty list runs nothing.
    std::vector<std::string> theorems;
    std::size_t instances = 100;
    std::uint64_t seed = 0;
    Index max_dim = 6;
    Tolerance tol;
    Mutation mutation = Mutation::None;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned jobs = 0;
};

struct ConclusionReport {
    std::string name;
    double propagated_lower = 0.0;
    double propagated_upper = 0.0;
    double classify_lower = 0.0;
    double classify_upper = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::size_t instance_id = 0;
    std::uint64_t seed = 0;
    std::string theorem;
    Index dim = 0;
    std::vector<Hypothesis> hypotheses;
    ConclusionReport conclusion;
    std::vector<ConclusionReport> extra_conclusions;
    bool pass = false;
    double timing_ms = 0.0;
    std::string note;
    std::optional<std::string> error;
};

/// Canonical names, in registry order.
const std::vector<std::string>& theorem_names();
/// Resolves a name or alias; throws InvalidConfig for unknown names.
std::string canonical_theorem(const std::string& name);

/// One generated instance of one theorem. The instance is a pure function of `seed`.
VerificationReport verify_instance(const std::string& theorem, std::size_t instance_id, std::uint64_t seed,
                                   const SuiteConfig& config);

/// Every instance of every requested theorem; order is deterministic
/// (theorem order as given, then instance index) regardless of `jobs`.
std::vector<VerificationReport> run_suite(const SuiteConfig& config);

/// 0 if every report passes, 1 otherwise.
int suite_exit_code(const std::vector<VerificationReport>& reports);

Json report_to_json(const VerificationReport& report);

}  // namespace ckff
