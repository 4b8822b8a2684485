#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>

#include "ckff/generate.hpp"
#include "ckff/operator_core.hpp"
#include "ckff/spec_io.hpp"
#include "ckff/suite.hpp"

using namespace ckff;

namespace {

bool bit_equal(const Matrix& a, const Matrix& b)
{
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), sizeof(Complex) * static_cast<std::size_t>(a.size())) == 0;
}

ErrorKind kind_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("generator is deterministic in the seed")
{
    InstanceConfig cfg;
    cfg.dim = 5;
    cfg.seed = 1234;
    const std::string a = serialize(gen_instance(cfg));
    const std::string b = serialize(gen_instance(cfg));
    CHECK(a == b);
    cfg.seed = 1235;
    CHECK(serialize(gen_instance(cfg)) != a);
}

TEST_CASE("generator honours its configuration")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        InstanceConfig cfg;
        cfg.dim = 5;
        cfg.n_subspaces = 3;
        cfg.max_subdim = 2;
        cfg.controller_condition = 10.0;
        cfg.k_rank = static_cast<Index>(seed % 6);
        cfg.seed = seed;
        const auto spec = gen_instance(cfg);
        CHECK(spec.system().size() == 3);
        for (std::size_t i = 0; i < spec.system().size(); ++i) {
            const Index d = spec.system().items()[i].subspace.dim();
            CHECK(d >= 1);
            CHECK(d <= 2);
            CHECK(is_positive(block_operator(spec, i)));
        }
        const auto cb = pos_bounds(spec.C());
        CHECK(cb.max / cb.min == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(range_basis(spec.K()).dim() == cfg.k_rank);
    }

    InstanceConfig bad;
    bad.max_subdim = 5;
    CHECK(kind_of([&] { gen_instance(bad); }) == ErrorKind::InvalidConfig);
    bad = {};
    bad.k_rank = 9;
    CHECK(kind_of([&] { gen_instance(bad); }) == ErrorKind::InvalidConfig);
    bad = {};
    bad.controller_condition = 0.5;
    CHECK(kind_of([&] { gen_instance(bad); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("single whole-space subspace with identity controllers gives S = I")
{
    InstanceConfig cfg;
    cfg.dim = 3;
    cfg.n_subspaces = 1;
    cfg.max_subdim = 3;
    cfg.k_rank = 3;
    const auto g = gen_instance(cfg);
    const ControlledFrameSpec spec(FusionSystem(3, {{g.system().items()[0].subspace, 1.0}}), Operator::identity(3),
                                   Operator::identity(3), Operator::identity(3));
    CHECK((frame_operator(spec).matrix() - Matrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("diagonal example builder")
{
    const auto one = build_paper_example(1, 2.0, 3.0);
    CHECK(frame_operator(one).matrix()(0, 0) == Complex(6.0));
    const auto b1 = classify(one);
    CHECK(b1.lower == doctest::Approx(6.0));
    CHECK(b1.upper == doctest::Approx(6.0));

    const auto ex = build_paper_example(16, 2.0, 3.0);
    CHECK(std::abs(classify(ex).lower - 6.0) < 1e-9);
    CHECK(std::abs(classify(ex.with_K(Operator::identity(16))).lower - 6.0 / 16.0) < 1e-9);

    CHECK(kind_of([] { build_paper_example(0, 2.0, 3.0); }) == ErrorKind::InvalidConfig);
    CHECK(kind_of([] { build_paper_example(3, -1.0, 3.0); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("spec documents round-trip bit-exactly")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        InstanceConfig cfg;
        cfg.dim = 2 + static_cast<Index>(seed % 5);
        cfg.max_subdim = std::min<Index>(2, cfg.dim);
        cfg.k_rank = 1;
        cfg.seed = seed;
        const auto spec = gen_instance(cfg);
        const Metadata meta{{"seed", std::to_string(seed)}, {"kind", "random"}};
        const std::string text = serialize(spec, meta);
        const auto doc = parse_spec(text);
        CHECK(doc.metadata == meta);
        CHECK(bit_equal(doc.spec.C().matrix(), spec.C().matrix()));
        CHECK(bit_equal(doc.spec.Cp().matrix(), spec.Cp().matrix()));
        CHECK(bit_equal(doc.spec.K().matrix(), spec.K().matrix()));
        REQUIRE(doc.spec.system().size() == spec.system().size());
        for (std::size_t i = 0; i < spec.system().size(); ++i) {
            CHECK(bit_equal(doc.spec.system().items()[i].subspace.basis(), spec.system().items()[i].subspace.basis()));
            CHECK(doc.spec.system().items()[i].weight == spec.system().items()[i].weight);
        }
        CHECK(serialize(doc.spec, doc.metadata) == text);
    }

    // Zero subspaces survive as rows without entries.
    Rng rng(1);
    const auto inst = gen::perturb_instance(rng, 3);
    const auto doc = parse_spec(serialize(inst.spec_w));
    CHECK(doc.spec.system().items().back().subspace.dim() == 0);
}

TEST_CASE("spec parsing rejects bad documents")
{
    const auto good = spec_to_json(build_paper_example(2, 1.0, 1.0));
    CHECK(kind_of([] { parse_spec("{not json"); }) == ErrorKind::InvalidInput);
    auto j = good;
    j["schema_version"] = 2;
    CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::InvalidInput);
    j = good;
    j["field"] = "real";
    CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::InvalidInput);
    j = good;
    j["weights"][0] = 0.0;
    CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::InvalidInput);
    j = good;
    j["C"][0][0] = Json::array({1.0});
    CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::InvalidInput);
    j = good;
    j["subspaces"][0]["basis"][0][0] = Json::array({2.0, 0.0});  // not orthonormal
    CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::InvalidInput);
    j = good;
    j.erase("K");
    CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::InvalidInput);
    j = good;
    j["metadata"] = {{"x", 1}};
    CHECK(kind_of([&] { spec_from_json(j); }) == ErrorKind::InvalidInput);
}

TEST_CASE("suite registry")
{
    CHECK(theorem_names().size() == 8);
    CHECK(canonical_theorem("unitary") == "unitary_transform");
    CHECK(canonical_theorem("perturb") == "perturb_check");
    CHECK(kind_of([] { canonical_theorem("nope"); }) == ErrorKind::InvalidConfig);

    SuiteConfig cfg;
    CHECK(run_suite(cfg).empty());
    CHECK(suite_exit_code(run_suite(cfg)) == 0);
    cfg.theorems = {"restrict", "bogus"};
    CHECK(kind_of([&] { run_suite(cfg); }) == ErrorKind::InvalidConfig);
    cfg.theorems = {"restrict"};
    cfg.max_dim = 1;
    CHECK(kind_of([&] { run_suite(cfg); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("suite passes on every theorem and is deterministic")
{
    SuiteConfig cfg;
    cfg.theorems = theorem_names();
    cfg.instances = 15;
    cfg.seed = 99;
    cfg.jobs = 4;
    const auto reports = run_suite(cfg);
    CHECK(reports.size() == 8 * 15);
    for (const auto& r : reports) {
        INFO(report_to_json(r).dump());
        CHECK(r.pass);
        CHECK(r.dim >= 2);
        CHECK(r.dim <= 6);
        for (const auto& h : r.hypotheses) {
            CHECK(std::isfinite(h.margin));
        }
    }
    CHECK(suite_exit_code(reports) == 0);

    cfg.jobs = 1;
    const auto serial = run_suite(cfg);
    REQUIRE(serial.size() == reports.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].instance_id == i);
        CHECK(serial[i].seed == reports[i].seed);
        CHECK(serial[i].theorem == reports[i].theorem);
        CHECK(serial[i].conclusion.propagated_lower == reports[i].conclusion.propagated_lower);
    }
}

TEST_CASE("dropping the block square root makes the suite fail")
{
    SuiteConfig cfg;
    cfg.theorems = {"sandwich"};
    cfg.instances = 10;
    CHECK(suite_exit_code(run_suite(cfg)) == 0);
    cfg.mutation = Mutation::DropBlockRoot;
    const auto reports = run_suite(cfg);
    CHECK(suite_exit_code(reports) == 1);
    CHECK(std::none_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; }));
}

TEST_CASE("report JSON shape")
{
    SuiteConfig cfg;
    const auto r = verify_instance("strip", 7, 42, cfg);
    const Json j = report_to_json(r);
    CHECK(j["instance_id"] == 7);
    CHECK(j["seed"] == 42);
    CHECK(j["theorem"] == "strip_controllers");
    CHECK(j["hypotheses"].is_array());
    CHECK(j["conclusion"]["propagated"].contains("lower"));
    CHECK(j["conclusion"]["classify"].contains("upper"));
    CHECK(j["extra_conclusions"].size() == 1);
    CHECK(j["pass"] == r.pass);
    CHECK(j["timing_ms"].is_number());

    // Same seed, same instance.
    const auto again = verify_instance("strip", 7, 42, cfg);
    CHECK(again.conclusion.propagated_lower == r.conclusion.propagated_lower);
}
