#include "support.hpp"

#include "gramkit/cross_gram.hpp"
#include "gramkit/random.hpp"
#include "gramkit/selftest.hpp"
#include "gramkit/stability.hpp"

using namespace gramkit;
using namespace gramkit::test;

TEST_CASE("Neumann series oracles") {
    const NeumannResult s = neumann_inverse(mat({{1}}), mat({{0.5}}));
    CHECK(std::abs(s.inverse(0, 0) - Complex(2, 0)) <= s.truncation_bound);
    const NeumannResult i = neumann_inverse(identity(2), identity(2));
    CHECK(i.terms == 0);
    CHECK(gap(i.inverse, identity(2)) == 0.0);
    Rng rng(2);
    const LinearMap u2 = identity(2) - 0.3 * random_direction(rng, 2, 2);
    CHECK(gap(neumann_inverse(identity(2), u2).inverse, inverse(u2)) < 1e-9);
    CHECK_THROWS_AS(neumann_inverse(identity(2), 3 * identity(2)), PreconditionFailed);
}

TEST_CASE("three operators") {
    const StabilityCertificate a = stability_three_ops(identity(2), identity(2), identity(2), onb(2));
    CHECK(a.holds());
    const StabilityCertificate b = stability_three_ops(identity(2), 1.05 * identity(2), identity(2), onb(2));
    CHECK(b.holds());
    REQUIRE(b.series_inverse);
    CHECK(gap(*b.series_inverse, identity(2) / 1.05) < 1e-9);
    CHECK_FALSE(stability_three_ops(identity(2), 3 * identity(2), identity(2), onb(2)).holds());
}

TEST_CASE("factor perturbation") {
    CHECK(stability_factor(identity(2), identity(2), onb(2)).holds());
    const StabilityCertificate c = stability_factor(diag({2, 1}), identity(2) + 0.05 * mat({{0, 1}, {0, 0}}), onb(2));
    CHECK(c.holds());
    CHECK_FALSE(stability_factor(identity(2), 5 * identity(2), onb(2)).holds());
}

TEST_CASE("C1 to C3") {
    const auto c1 = perturb_certificates(identity(2), 1.5 * identity(2), onb(2), onb(2), std::nullopt, std::nullopt);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].holds());
    const auto c2 = perturb_certificates(identity(2), std::nullopt, onb(2), onb(2), std::nullopt, onb(2));
    REQUIRE(c2.size() == 1);
    CHECK(c2[0].lhs == 0.0);
    CHECK(c2[0].holds());
    const auto far = perturb_certificates(identity(2), 10 * identity(2), onb(2), onb(2), std::nullopt, std::nullopt);
    CHECK_FALSE(far[0].holds());
}

TEST_CASE("C2 boundary is strict") {
    const auto base = perturb_certificates(identity(2), std::nullopt, onb(2), onb(2), std::nullopt, onb(2));
    const double threshold = base[0].rhs;
    const FrameSystem theta(identity(2) + threshold * mat({{0, 1}, {0, 0}}));
    const auto edge = perturb_certificates(identity(2), std::nullopt, onb(2), onb(2), std::nullopt, theta);
    CHECK_FALSE(edge[0].holds());
}

TEST_CASE("Riesz perturbation") {
    CHECK(riesz_perturbation(identity(2), onb(2), onb(2)).holds());
    const StabilityCertificate c = riesz_perturbation(identity(2), onb(2), frame(2, {{1, 0}, {0.5, 1}}));
    CHECK(c.lhs == doctest::Approx(0.25));
    CHECK(c.holds());
}

TEST_CASE("joint perturbation") {
    StabilityBudget zero;
    zero.mu = 0.1;
    CHECK(joint_stability(identity(2), identity(2), onb(2), onb(2), onb(2), onb(2), zero).holds());
    StabilityBudget big{0.3, 0.3, 0.3, 0.3, 0.1};
    CHECK_FALSE(joint_stability(identity(2), identity(2), onb(2), onb(2), onb(2), onb(2), big).holds());
}

TEST_CASE("convergence harness") {
    Rng rng(4);
    const ConvergenceStep limit{random_matrix(rng, 3, 3), random_frame(rng, 3, 4), random_frame(rng, 3, 4)};
    std::vector<ConvergenceStep> constant(5, limit);
    for (const auto& r : convergence_harness(constant, limit).rows) CHECK(r.deviation == 0.0);
    const LinearMap n = random_direction(rng, 3, 3);
    const LinearMap pd = random_direction(rng, 3, 4);
    std::vector<ConvergenceStep> seq;
    for (int k = 1; k <= 30; ++k)
        seq.push_back({limit.op + n / double(k), FrameSystem(limit.phi.synthesis() + pd / double(k)), limit.psi});
    const ConvergenceTable t = convergence_harness(seq, limit);
    for (const auto& r : t.rows) CHECK(r.deviation <= r.bound * (1 + 1e-12) + 1e-12);
}

TEST_CASE("property: passing certificates never leave G singular") {
    for (StabilityTheorem th : all_stability_theorems()) {
        Rng rng(kDefaultSeed);
        for (int t = 0; t < 60; ++t) CHECK_FALSE(stability_trial(th, rng, 2 + 2 * (t % 2), {}, 64).singular_after_pass);
    }
}

TEST_CASE("selftest passes and a corrupted cutoff fails") {
    CHECK(run_selftest(kDefaultSeed, {}, 2).all_passed());
    TolerancePolicy bad;
    bad.relative_rank_cutoff = 0.5;
    CHECK_FALSE(run_selftest(kDefaultSeed, bad, 2).all_passed());
}
