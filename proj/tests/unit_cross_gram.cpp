#include "support.hpp"

#include "gramkit/cross_gram.hpp"
#include "gramkit/random.hpp"

using namespace gramkit;
using namespace gramkit::test;

TEST_CASE("cross Gram oracles") {
    CHECK(gap(gram_matrix(identity(2), onb(2), onb(2)), identity(2)) == 0.0);
    const FrameSystem phi = frame(3, {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    const FrameSystem psi = frame(3, {{1, 0, 0}, {0, 0.5, 0}, {0, 0, 1.0 / 3}});
    CHECK(gap(gram_matrix(identity(3), phi, psi), identity(3)) < 1e-15);
    const LinearMap g = gram_matrix(identity(2), frame(2, {{1, 0}, {0, 1}, {0, 1}}), e1e1e2());
    CHECK(gap(g, mat({{1, 1, 0}, {0, 0, 1}, {0, 0, 1}})) == 0.0);
}

TEST_CASE("entries are <U psi_j, phi_i>") {
    Rng rng(7);
    const LinearMap u = random_matrix(rng, 3, 3);
    const FrameSystem phi = random_frame(rng, 3, 4), psi = random_frame(rng, 3, 5);
    const LinearMap g = gram_matrix(u, phi, psi);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 5; ++j) CHECK(std::abs(g(i, j) - phi.element(i).dot(u * psi.element(j))) < 1e-12);
}

TEST_CASE("adjoint swaps the frames") {
    const CrossGram g = cross_gram(identity(2), frame(2, {{1, 0}, {0, 1}, {0, 1}}), e1e1e2());
    const CrossGram a = adjoint(g);
    CHECK(gap(a.matrix, g.matrix.adjoint()) == 0.0);
    REQUIRE(a.provenance);
    CHECK(gap(a.provenance->left.synthesis(), e1e1e2().synthesis()) == 0.0);
    CHECK(gap(adjoint(a).matrix, g.matrix) == 0.0);
}

TEST_CASE("composition rules") {
    const CrossGram i = cross_gram(identity(2), onb(2), onb(2));
    const Composition c = compose(i, i);
    CHECK(gap(c.gram.matrix, identity(2)) == 0.0);

    const CrossGram g = cross_gram(identity(2), e1e1e2(), e1e1e2());
    const Composition sq = compose(g, g);
    CHECK(sq.rule == CompositionRule::FrameOperator);
    REQUIRE(sq.gram.provenance);
    CHECK(gap(sq.gram.provenance->op, diag({2, 1})) < 1e-12);
    CHECK(gap(sq.gram.matrix, gram_matrix(diag({2, 1}), e1e1e2(), e1e1e2())) < 1e-12);

    const CrossGram h = cross_gram(diag({3, 1}), canonical_dual(e1e1e2()), onb(2));
    const Composition d = compose(cross_gram(diag({1, 2}), onb(2), e1e1e2()), h);
    CHECK(d.rule == CompositionRule::DualPair);
    CHECK(gap(d.gram.provenance->op, diag({3, 2})) < 1e-12);

    const Composition plain = compose(CrossGram{identity(2), std::nullopt}, i);
    CHECK(plain.rule == CompositionRule::MatrixOnly);
    CHECK_THROWS(compose(CrossGram{identity(2), std::nullopt}, i, {}, ProvenanceMode::Required));
}

TEST_CASE("operator reconstruction") {
    const LinearMap swap = mat({{0, 1}, {1, 0}});
    const FrameSystem f = e1e1e2();
    const FrameSystem fd = canonical_dual(f);
    CHECK(gap(reconstruct_operator(cross_gram(swap, f, f), fd, fd), swap) < 1e-12);
    CHECK(gap(reconstruct_operator(cross_gram(identity(2), onb(2), onb(2)), onb(2), onb(2)), identity(2)) == 0.0);
}

TEST_CASE("identity Gram characterization") {
    CHECK(identity_gram_diagnosis(identity(2), onb(2), onb(2)).is_identity);
    const FrameSystem phi = frame(3, {{1, 0, 0}, {0, 2, 0}, {0, 0, 3}});
    const FrameSystem psi = frame(3, {{1, 0, 0}, {0, 0.5, 0}, {0, 0, 1.0 / 3}});
    const IdentityGramReport r = identity_gram_diagnosis(identity(3), phi, psi);
    CHECK(r.is_identity);
    CHECK(r.all_clauses_hold());
    CHECK_FALSE(identity_gram_diagnosis(identity(2), e1e1e2(), e1e1e2()).is_identity);
}

TEST_CASE("property: factorization, norm bound and composition") {
    Rng rng(kDefaultSeed);
    for (int t = 0; t < 40; ++t) {
        const Index n = 2 + t % 4;
        const LinearMap u1 = random_matrix(rng, n, n), u2 = random_matrix(rng, n, n);
        const FrameSystem phi = random_frame(rng, n, n + 1), psi = random_frame(rng, n, n + 2),
                          xi = random_frame(rng, n, n);
        const LinearMap g = gram_matrix(u1, phi, psi);
        CHECK(relative_residual(g, phi.analysis() * u1 * psi.synthesis()) <= 1e-12);
        CHECK(operator_norm(g) <= std::sqrt(phi.bessel_bound() * psi.bessel_bound()) * operator_norm(u1) * (1 + 1e-12));
        const Composition c = compose(cross_gram(u1, phi, psi), cross_gram(u2, psi, xi));
        CHECK(c.provenance_residual <= 1e-10);
        CHECK(relative_residual(c.gram.matrix, gram_matrix(u1 * psi.frame_operator() * u2, phi, xi)) <= 1e-10);
    }
}
