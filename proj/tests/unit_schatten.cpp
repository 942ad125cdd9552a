#include "support.hpp"

#include "gramkit/random.hpp"
#include "gramkit/schatten.hpp"

using namespace gramkit;
using namespace gramkit::test;

TEST_CASE("Schatten norms of diagonals") {
    CHECK(schatten_norm(diag({3, 4}), 1) == doctest::Approx(7));
    CHECK(schatten_norm(diag({3, 4}), 2) == doctest::Approx(5));
    CHECK(schatten_norm(identity(4), 3) == doctest::Approx(std::pow(4.0, 1.0 / 3)));
    CHECK_THROWS_AS(schatten_norm(identity(2), 0), InvalidInput);
}

TEST_CASE("mixed norms") {
    CHECK(mixed_norm(mat({{1, 1}, {1, 1}}), 2, 2) == doctest::Approx(2));
    CHECK(mixed_norm(identity(2), 1, 2) == doctest::Approx(2));
    CHECK(mixed_norm(mat({{3, 4}}), 1, 2) == doctest::Approx(5));
}

TEST_CASE("ONB pair functional") {
    CHECK(onb_pair_functional(diag({3, 4}), onb(2), onb(2), 1) == doctest::Approx(7));
    CHECK(onb_pair_functional(LinearMap::Zero(2, 2), onb(2), onb(2), 2) == 0.0);
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const FrameSystem e(random_unitary(rng, 2)), f(random_unitary(rng, 2));
        CHECK(onb_pair_functional(diag({3, 4}), e, f, 2) <= 5 + 1e-9);
    }
}

TEST_CASE("Gram Schatten report oracles") {
    const SchattenReport a = schatten_gram_check(identity(2), onb(2), onb(2), 2);
    CHECK(a.norm_gram == doctest::Approx(std::sqrt(2.0)));
    CHECK(a.all_hold());
    const SchattenReport b = schatten_gram_check(diag({3, 4}), onb(2), onb(2), 1);
    CHECK(b.norm_gram == doctest::Approx(7));
    CHECK(b.diagonal_sum == doctest::Approx(7));
    const SchattenReport c = schatten_gram_check(identity(2), e1e1e2(), e1e1e2(), 2);
    CHECK(c.frobenius_squared == doctest::Approx(5));
    CHECK(c.entrywise_squared == doctest::Approx(5));
}

TEST_CASE("truncation decay") {
    const auto onbs = [](Index n) { return FrameSystem::standard(n); };
    const auto decaying = [](Index n) {
        LinearMap d = LinearMap::Zero(n, n);
        for (Index k = 0; k < n; ++k) d(k, k) = 1.0 / double((k + 1) * (k + 1));
        return d;
    };
    CHECK(truncation_decay(decaying, onbs, onbs, {4, 8, 16}).decays);
    CHECK_FALSE(truncation_decay([](Index n) { return identity(n); }, onbs, onbs, {4, 8, 16}).decays);
}
