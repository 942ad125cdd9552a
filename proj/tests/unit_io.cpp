#include "support.hpp"

#include "gramkit/io.hpp"
#include "gramkit/random.hpp"

using namespace gramkit;
using namespace gramkit::test;

TEST_CASE("JSON matrix round-trip is bit-exact") {
    Rng rng(11);
    const LinearMap m = random_matrix(rng, 3, 4) * 1e-7 + random_matrix(rng, 3, 4);
    const LinearMap back = matrix_from_json(Json::parse(matrix_to_json(m).dump()));
    CHECK((back.array() == m.array()).all());
}

TEST_CASE("CSV matrix round-trip is bit-exact") {
    Rng rng(12);
    LinearMap m = random_matrix(rng, 2, 3);
    m(0, 0) = Complex(-0.0, -1e-300);
    m(1, 2) = Complex(1e22, 5e-324);
    const LinearMap back = matrix_from_csv(matrix_to_csv(m));
    CHECK((back.array() == m.array()).all());
    CHECK(matrix_to_csv(mat({{1, -2}})) == "1+0i,-2+0i\n");
}

TEST_CASE("frame round-trip") {
    Rng rng(13);
    const FrameSystem f = random_frame(rng, 3, 5);
    const FrameSystem back = frame_from_json(Json::parse(frame_to_json(f).dump()));
    CHECK((back.synthesis().array() == f.synthesis().array()).all());
}

TEST_CASE("malformed input is rejected") {
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1})")), InvalidInput);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":1,"cols":2,"data":[[1,0]]})")), InvalidInput);
    CHECK_THROWS_AS(matrix_from_json(Json::parse(R"({"rows":0,"cols":1,"data":[]})")), InvalidInput);
    CHECK_THROWS_AS(frame_from_json(Json::parse(R"({"dim":2,"vectors":[[[1,0]]]})")), InvalidInput);
    CHECK_THROWS_AS(matrix_from_csv("1+0i,2\n"), InvalidInput);
    CHECK_THROWS_AS(matrix_from_csv("1+0i,2+0i\n3+0i\n"), InvalidInput);
}
