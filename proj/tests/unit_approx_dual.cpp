#include "support.hpp"

#include "gramkit/approx_dual.hpp"
#include "gramkit/random.hpp"

using namespace gramkit;
using namespace gramkit::test;

TEST_CASE("defect oracles") {
    CHECK(approx_dual_defect(onb(2), onb(2)) == doctest::Approx(0));
    CHECK(approx_dual_defect(onb(2), onb(2).scaled(0.9)) == doctest::Approx(0.1));
    CHECK(approx_dual_defect(onb(2), onb(2).scaled(-1)) == doctest::Approx(2));
}

TEST_CASE("sufficient conditions") {
    const ApproxDualCertificate a = sufficient_conditions(onb(2), onb(2));
    CHECK(a.conclusion);
    CHECK(a.defect == doctest::Approx(0));
    const ApproxDualCertificate b = sufficient_conditions(onb(2), onb(2).scaled(0.95));
    CHECK(b.conclusion);
    CHECK(b.defect == doctest::Approx(0.05));
    const ApproxDualCertificate c = sufficient_conditions(e1e1e2(), e1e1e2());
    REQUIRE(c.find("(1)"));
    CHECK(c.find("(1)")->threshold > 0);
    CHECK_THROWS_AS(sufficient_conditions(onb(2), onb(2), frame(2, {{2, 0}, {0, 1}})), PreconditionFailed);
}

TEST_CASE("right-inverse condition") {
    const ApproxDualCertificate a = right_inverse_condition(diag({2, 1}), diag({0.5, 1}), onb(2), onb(2).scaled(0.9));
    REQUIRE(a.find("(4)"));
    CHECK(a.conclusion);
    CHECK_THROWS_AS(right_inverse_condition(diag({2, 1}), diag({1, 1}), onb(2), onb(2)), PreconditionFailed);
}

TEST_CASE("necessary bound and corrected dual") {
    CHECK(necessary_bound(onb(2), onb(2)).holds());
    CHECK(necessary_bound(onb(2), onb(2).scaled(0.9)).holds());
    CHECK(necessary_bound(onb(2), onb(2).scaled(-1)).verdict == Verdict::Inapplicable);
    CHECK(gap(corrected_dual(onb(2), onb(2).scaled(0.9)).synthesis(), identity(2)) < 1e-12);
    CHECK_THROWS_AS(corrected_dual(onb(2), onb(2).scaled(-1)), PreconditionFailed);
}

TEST_CASE("property: certified pairs have defect below one") {
    Rng rng(kDefaultSeed);
    std::uniform_real_distribution<double> expo(-3, 0);
    for (int t = 0; t < 60; ++t) {
        const Index n = 2 + t % 3;
        const FrameSystem phi = random_frame(rng, n, n + 1);
        const FrameSystem psi(canonical_dual(phi).synthesis() + std::pow(10, expo(rng)) * random_direction(rng, n, n + 1));
        const ApproxDualCertificate c = sufficient_conditions(phi, psi);
        if (c.conclusion) CHECK(c.defect < 1);
        if (c.defect < 1) CHECK(is_dual_pair(phi, corrected_dual(phi, psi)).holds());
    }
}
