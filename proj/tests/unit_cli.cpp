#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "gramkit/cross_gram.hpp"
#include "gramkit/io.hpp"

using namespace gramkit;
using namespace gramkit::test;

namespace {

const std::string kFixtures = GRAMKIT_FIXTURE_DIR;

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "gramkit");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return kFixtures + "/" + name; }

std::string temp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("gramkit_test_" + name)).string();
}

}  // namespace

TEST_CASE("gram of identity on ONB is the identity") {
    const Run r = invoke({"gram", "--op", fx("identity2.json"), "--left", fx("onb2.json"), "--right", fx("onb2.json")});
    REQUIRE(r.code == cli::kOk);
    CHECK(gap(matrix_from_json(Json::parse(r.out)), identity(2)) == 0.0);
}

TEST_CASE("scaled basis against its reciprocal gives the identity") {
    const Run r = invoke({"gram", "--op", fx("identity3.json"), "--left", fx("scaled_basis3.json"), "--right",
                          fx("inverse_scaled_basis3.json")});
    REQUIRE(r.code == cli::kOk);
    CHECK(gap(matrix_from_json(Json::parse(r.out)), identity(3)) < 1e-15);
}

TEST_CASE("worked example report") {
    const Run r = invoke({"pinv", "--op", fx("example4_op.json"), "--left", fx("example4_phi.json"), "--right",
                       fx("example4_psi.json"), "--dual-a", fx("example4_phi_dual_a.json"), "--dual-b",
                       fx("example4_phi_dual_b.json")});
    REQUIRE(r.code == cli::kOk);
    const Json j = Json::parse(r.out);
    LinearMap expected = identity(5);
    expected(0, 0) = expected(1, 0) = 0.5;
    expected(1, 1) = 0;
    CHECK(gap(matrix_from_json(j["op_pinv"]), expected) < 1e-12);
    CHECK(j["dual_comparison"]["op_pinv_T_a_vs_T_b"].get<double>() < 1e-12);
    CHECK(j["dual_comparison"]["duals_differ"].get<double>() > 0.1);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == cli::kUsage);
    CHECK(invoke({"gram", "--op", fx("identity2.json")}).code == cli::kUsage);
    CHECK(invoke({"classify", fx("missing.json")}).code == cli::kUsage);
    CHECK(invoke({"classify", fx("onb2.json"), "--seed", "banana"}).code == cli::kUsage);
    CHECK(invoke({"gram", "--op", fx("identity2.json"), "--left", fx("onb2.json"), "--right", fx("tight3_in_2.json")})
              .code == cli::kOk);
    CHECK(invoke({"stability", "--theorem", "c1", "--op", fx("identity2.json"), "--v", fx("identity2.json"), "--left",
               fx("onb2.json"), "--right", fx("onb2.json")})
              .code == cli::kOk);
    // V far from U: inconclusive
    write_matrix(temp("far.json"), 10 * identity(2));
    CHECK(invoke({"stability", "--theorem", "c1", "--op", fx("identity2.json"), "--v", temp("far.json"), "--left",
               fx("onb2.json"), "--right", fx("onb2.json")})
              .code == cli::kInconclusive);
    CHECK(invoke({"selftest", "--trials", "1", "--rank-cutoff", "0.5"}).code == cli::kViolation);
    CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("identical input gives identical bytes") {
    const std::vector<std::string> args{"converge", "--op", fx("identity2.json"), "--left", fx("onb2.json"),
                                        "--right", fx("tight3_in_2.json"), "--steps", "20"};
    const Run a = invoke(args), b = invoke(args);
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    std::vector<std::string> seeded = args;
    seeded.insert(seeded.end(), {"--seed", "7"});
    CHECK(invoke(seeded).out != a.out);
}

TEST_CASE("seed precedence: flag over environment over default") {
    const std::vector<std::string> args{"converge", "--op", fx("identity2.json"), "--left", fx("onb2.json"),
                                        "--right", fx("onb2.json"), "--steps", "3"};
    const std::string base = invoke(args).out;
    setenv("GRAMKIT_SEED", "7", 1);
    const std::string env = invoke(args).out;
    std::vector<std::string> flagged = args;
    flagged.insert(flagged.end(), {"--seed", "0xC0FFEE"});
    const std::string flag = invoke(flagged).out;
    unsetenv("GRAMKIT_SEED");
    std::vector<std::string> seven = args;
    seven.insert(seven.end(), {"--seed", "7"});
    CHECK(env != base);
    CHECK(env == invoke(seven).out);
    CHECK(flag == base);
}

TEST_CASE("csv output round-trips bit-exactly") {
    const std::string path = temp("gram.csv");
    REQUIRE(invoke({"gram", "--op", fx("example4_op.json"), "--left", fx("example4_phi.json"), "--right",
                 fx("example4_psi.json"), "-o", path})
                .code == cli::kOk);
    const LinearMap back = read_matrix(path);
    const LinearMap g = gram_matrix(read_matrix(fx("example4_op.json")), read_frame(fx("example4_phi.json")),
                                    read_frame(fx("example4_psi.json")));
    CHECK((back.array() == g.array()).all());
    const Run csv = invoke({"classify", fx("onb2.json"), "--format", "csv-summary"});
    CHECK(csv.out.find("kind,OrthonormalBasis") != std::string::npos);
}
