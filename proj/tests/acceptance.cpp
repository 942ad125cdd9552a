// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "gramkit/approx_dual.hpp"
#include "gramkit/cross_gram.hpp"
#include "gramkit/inversion.hpp"
#include "gramkit/io.hpp"
#include "gramkit/random.hpp"
#include "gramkit/schatten.hpp"
#include "gramkit/selftest.hpp"
#include "gramkit/stability.hpp"

using namespace gramkit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::string kFixtures = GRAMKIT_FIXTURE_DIR;

double rel(const LinearMap& a, const LinearMap& ref) {
    const double d = ref.norm();
    return (a - ref).norm() / (d > 0 ? d : 1.0);
}

double max_abs(const LinearMap& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

Outcome example_reproduction() {
    const LinearMap u = read_matrix(kFixtures + "/example4_op.json");
    const FrameSystem a = read_frame(kFixtures + "/example4_phi_dual_a.json");
    const FrameSystem b = read_frame(kFixtures + "/example4_phi_dual_b.json");
    const FrameSystem phi = read_frame(kFixtures + "/example4_phi.json");
    LinearMap expected = LinearMap::Identity(5, 5);
    expected(0, 0) = 0.5;
    expected(1, 0) = 0.5;
    expected(1, 1) = 0.0;
    const LinearMap up = pseudo_inverse(u);
    const double e1 = max_abs(up - expected);
    const double e2 = max_abs(up * a.synthesis() - up * b.synthesis());
    const bool duals = is_dual_pair(phi, a).holds() && is_dual_pair(phi, b).holds();
    const bool distinct = max_abs(a.synthesis() - b.synthesis()) > 0.1;
    return {e1 <= 1e-12 && e2 <= 1e-12 && duals && distinct,
            "U+ error " + fmt(e1) + ", U+T_a - U+T_b " + fmt(e2) + (duals ? "" : ", dual check failed")};
}

Outcome inverse_formula() {
    Rng rng(kDefaultSeed);
    const Index sizes[] = {4, 8, 16};
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Index n = sizes[t % 3];
        const LinearMap u = random_invertible(rng, n);
        const FrameSystem phi = random_frame(rng, n, n), psi = random_frame(rng, n, n);
        const LinearMap g_inv = inverse(gram_matrix(u, phi, psi));
        const LinearMap ref = gram_matrix(inverse(u), canonical_dual(psi), canonical_dual(phi));
        worst = std::max(worst, rel(g_inv, ref));
        const InversionReport r = invert_gram(u, phi, psi);
        if (!r.invertible || !r.inverse_residual) return {false, "invert_gram did not certify trial " + std::to_string(t)};
        worst = std::max(worst, *r.inverse_residual);
    }
    return {worst <= 1e-8, "worst relative residual " + fmt(worst)};
}

Outcome pinv_representation() {
    Rng rng(kDefaultSeed + 1);
    const Index sizes[] = {4, 8, 16};
    double worst = 0.0, worst_subspace = 0.0;
    for (int t = 0; t < 500; ++t) {
        const Index n = sizes[t % 3], m = n + n / 2;
        const LinearMap u = random_invertible(rng, n);
        const FrameSystem phi = random_frame(rng, n, m), psi = random_frame(rng, n, m);
        const PinvReport r = pinv_gram(u, phi, psi);
        const LinearMap ref = gram_matrix(inverse(u), canonical_dual(psi), r.phi_dual.frame);
        worst = std::max(worst, rel(ref, r.pinv.matrix));
        if (!is_dual_pair(phi, r.phi_dual.frame).holds())
            return {false, "special dual is not a dual in trial " + std::to_string(t)};
        for (const auto& s : r.subspace_identities) worst_subspace = std::max(worst_subspace, s.residual);
    }
    return {worst <= 1e-8 && worst_subspace <= 1e-8,
            "worst representation residual " + fmt(worst) + ", worst projector residual " + fmt(worst_subspace)};
}

Outcome range_equivalence() {
    Rng rng(kDefaultSeed + 2);
    const Index sizes[] = {2, 4, 8};
    int agree = 0, trues = 0;
    for (int t = 0; t < 100; ++t) {
        const Index n = sizes[t % 3];
        LinearMap u;
        FrameSystem psi;
        if (t < 50) {
            psi = random_tight_frame(rng, n, n + 1, 2.0);
            u = random_rank(rng, n, n, std::max<Index>(1, n / 2));
        } else {
            // S_Psi = Q diag(1,..,1,2) Q*, R(U*) = span{Q(e_1 + e_n)}
            const LinearMap q = random_unitary(rng, n);
            LinearMap s(n, n + 1);
            s << identity(n), identity(n).col(n - 1);
            psi = FrameSystem(q * s);
            const Vector v = q * (identity(n).col(0) + identity(n).col(n - 1));
            u = random_matrix(rng, n, 1) * v.adjoint();
        }
        const FrameSystem phi = random_frame(rng, n, n + 1);
        const bool cond = range_condition(u, psi, DualSide::Psi);
        trues += cond;
        const PinvReport r = pinv_gram(u, phi, psi);
        agree += r.find("G_{U+, Psi~, Phi^(U,Psi)}")->holds == cond;
    }
    return {agree == 100 && trues == 50,
            std::to_string(agree) + "/100 agree, " + std::to_string(trues) + " with the condition true"};
}

Outcome schatten_suite() {
    Rng rng(kDefaultSeed + 3);
    const Index sizes[] = {2, 4, 8};
    const double ps[] = {1.0, 2.0, 3.0};
    int bound_fail = 0, onb_fail = 0;
    double worst_eq = 0.0, worst_sum = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Index n = sizes[t % 3];
        const double p = ps[(t / 3) % 3];
        const LinearMap u = random_matrix(rng, n, n);
        const FrameSystem phi = random_frame(rng, n, n + 2), psi = random_frame(rng, n, n + 1);
        const LinearMap g = gram_matrix(u, phi, psi);
        const double bound = std::sqrt(phi.bessel_bound() * psi.bessel_bound()) * schatten_norm(u, p);
        if (!(schatten_norm(g, p) <= bound * (1 + 1e-12))) ++bound_fail;
        double entrywise = 0.0;
        for (Index i = 0; i < phi.count(); ++i)
            for (Index j = 0; j < psi.count(); ++j) entrywise += std::norm(psi.element(j).dot(u.adjoint() * phi.element(i)));
        const double hs = schatten_norm(g, 2.0);
        worst_sum = std::max(worst_sum, std::abs(hs * hs - entrywise) / entrywise);
    }
    for (double p : ps)
        for (int t = 0; t < 100; ++t) {
            const Index n = sizes[t % 3];
            const LinearMap u = random_matrix(rng, n, n);
            const double norm = schatten_norm(u, p);
            const FrameSystem e(random_unitary(rng, n)), f(random_unitary(rng, n));
            if (!(onb_pair_functional(u, e, f, p) <= norm * (1 + 1e-12))) ++onb_fail;
            const auto [dom, cod] = singular_bases(u);
            worst_eq = std::max(worst_eq, std::abs(onb_pair_functional(u, dom, cod, p) - norm) / norm);
        }
    return {bound_fail == 0 && onb_fail == 0 && worst_eq <= 1e-9 && worst_sum <= 1e-10,
            std::to_string(bound_fail) + " bound failures, " + std::to_string(onb_fail) +
                " ONB-pair failures, SVD-basis gap " + fmt(worst_eq) + ", entrywise-sum gap " + fmt(worst_sum)};
}

Outcome approx_duality() {
    Rng rng(kDefaultSeed + 4);
    const Index sizes[] = {2, 4, 8};
    int unsound = 0, corrected_fail = 0, certified = 0, corrected = 0;
    std::uniform_real_distribution<double> expo(-3.0, 0.0);
    for (int t = 0; t < 1000; ++t) {
        // Half square (Riesz bases, where the conditions can certify), half redundant.
        const Index n = sizes[t % 3], m = n + (t / 3) % 2;
        const FrameSystem phi = random_frame(rng, n, m);
        const FrameSystem psi(canonical_dual(phi).synthesis() +
                              std::pow(10.0, expo(rng)) * random_direction(rng, n, m));
        if (!classify(psi).is_frame()) continue;
        try {
            const ApproxDualCertificate c = sufficient_conditions(phi, psi);
            for (const auto& s : c.conditions)
                if (s.holds) unsound += !(c.defect < 1.0);
            certified += c.conclusion;
        } catch (const TheoremViolation&) {
            ++unsound;
        }
        if (approx_dual_defect(phi, psi) < 1.0) {
            ++corrected;
            try {
                corrected_fail += !is_dual_pair(phi, corrected_dual(phi, psi)).holds();
            } catch (const std::exception&) {
                ++corrected_fail;
            }
        }
    }
    return {unsound == 0 && corrected_fail == 0,
            std::to_string(certified) + " certified, " + std::to_string(unsound) + " unsound, " +
                std::to_string(corrected_fail) + "/" + std::to_string(corrected) + " corrected duals failed"};
}

constexpr int kStabilityTrials = 10000;
constexpr Index kJointSamples = 1024;

Outcome stability_soundness() {
    const Index sizes[] = {2, 4, 8};
    std::string detail;
    int bad = 0;
    for (StabilityTheorem th : all_stability_theorems()) {
        Rng rng(kDefaultSeed + 100 + static_cast<int>(th));
        int passed = 0, singular = 0, errors = 0;
        for (int t = 0; t < kStabilityTrials; ++t) {
            try {
                const StabilityTrial r = stability_trial(th, rng, sizes[t % 3], {}, kJointSamples);
                passed += r.passed;
                singular += r.singular_after_pass;
            } catch (const TheoremViolation&) {
                ++errors;
            }
        }
        bad += singular + errors;
        detail += std::string(to_string(th)) + " " + std::to_string(passed) + "/" + std::to_string(kStabilityTrials) +
                  (singular + errors ? " (" + std::to_string(singular + errors) + " unsound)" : "") + "; ";
    }
    Rng rng(kDefaultSeed + 200);
    int series_fail = 0;
    for (int t = 0; t < 1000; ++t) {
        const Index n = sizes[t % 3];
        const LinearMap u1 = random_invertible(rng, n);
        const double r = 0.9 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const LinearMap u2 = u1 - r / operator_norm(inverse(u1)) * random_direction(rng, n, n);
        const NeumannResult res = neumann_inverse(u1, u2);
        const LinearMap direct = inverse(u2);
        const double err = operator_norm(res.inverse - direct);
        // Floating-point rounding on top of the truncation bound: a few ulps of the result.
        if (!(err <= res.truncation_bound + 64 * 2.2e-16 * n * operator_norm(direct) * (res.terms + 1)))
            ++series_fail;
    }
    detail += "Neumann " + std::to_string(series_fail) + " of 1000 outside the truncation bound";
    return {bad == 0 && series_fail == 0, detail};
}

Outcome convergence() {
    Rng rng(kDefaultSeed + 5);
    const Index n = 4;
    const ConvergenceStep limit{random_matrix(rng, n, n), random_frame(rng, n, n + 2), random_frame(rng, n, n + 1)};
    const LinearMap dir = random_direction(rng, n, n);
    std::vector<ConvergenceStep> seq;
    for (int k = 1; k <= 100; ++k) seq.push_back({limit.op + dir / static_cast<double>(k), limit.phi, limit.psi});
    try {
        const ConvergenceTable table = convergence_harness(seq, limit);
        double worst = 0.0;
        for (const auto& r : table.rows) worst = std::max(worst, r.deviation / r.bound);
        const bool decays = table.decays_after(5, 1e-12);
        return {decays && worst <= 1.0, "max deviation/bound " + fmt(worst) + (decays ? ", monotone after n=5" : ", not monotone")};
    } catch (const TheoremViolation& e) {
        return {false, e.what()};
    }
}

// Each composition identity as (lhs, rhs).
double composition_identities(const LinearMap& u1, const LinearMap& u2, const FrameSystem& phi,
                              const FrameSystem& psi, const FrameSystem& theta, const FrameSystem& xi) {
    double worst = 0.0;
    auto cmp = [&](const LinearMap& a, const LinearMap& b) { worst = std::max(worst, rel(a, b)); };
    const LinearMap g1 = gram_matrix(u1, phi, psi);
    if (psi.count() == theta.count())  // the product is defined only for matching inner index sets
        cmp(g1 * gram_matrix(u2, theta, xi), gram_matrix(u1 * psi.synthesis() * theta.analysis() * u2, phi, xi));
    cmp(g1 * gram_matrix(u2, psi, xi), gram_matrix(u1 * psi.frame_operator() * u2, phi, xi));
    const FrameSystem psid = canonical_dual(psi);
    cmp(g1 * gram_matrix(u2, psid, xi), gram_matrix(u1 * u2, phi, xi));
    cmp(gram_matrix(psi.frame_operator(), psid, psi), psi.gram());
    cmp(gram_matrix(inverse(psi.frame_operator()), psi, psid), psid.gram());
    cmp(gram_matrix(phi.analysis(), FrameSystem::standard(phi.count()), psi), gram_matrix(identity(phi.dim()), phi, psi));
    cmp(adjoint(cross_gram(u1, phi, psi)).matrix, gram_matrix(u1.adjoint(), psi, phi));
    if (psi.count() == psi.dim()) {
        cmp(gram_matrix(identity(psi.dim()), psi, psid), identity(psi.count()));
        cmp(gram_matrix(inverse(psi.frame_operator()), psi, psi), identity(psi.count()));
    }
    return worst;
}

Outcome composition() {
    const std::vector<std::string> names{"onb2.json", "tight3_in_2.json", "e1e1e2.json"};
    std::vector<FrameSystem> frames;
    for (const auto& n : names) frames.push_back(read_frame(kFixtures + "/" + n));
    LinearMap d(2, 2);
    d << 2, 0, 0, 1;
    const LinearMap ops[] = {read_matrix(kFixtures + "/identity2.json"), d};
    double worst = 0.0;
    int cases = 0;
    for (const auto& u1 : ops)
        for (const auto& u2 : ops)
            for (const auto& a : frames)
                for (const auto& b : frames)
                    for (const auto& c : frames)
                        for (const auto& e : frames) {
                            worst = std::max(worst, composition_identities(u1, u2, a, b, c, e));
                            ++cases;
                        }
    Rng rng(kDefaultSeed + 6);
    const Index sizes[] = {2, 4, 8};
    for (int t = 0; t < 200; ++t) {
        const Index n = sizes[t % 3];
        const Index extra = t % 2;
        worst = std::max(worst, composition_identities(random_matrix(rng, n, n), random_matrix(rng, n, n),
                                                       random_frame(rng, n, n + 1), random_frame(rng, n, n + extra),
                                                       random_frame(rng, n, n + extra), random_frame(rng, n, n + 2)));
        ++cases;
    }
    return {worst <= 1e-10, std::to_string(cases) + " cases, worst relative gap " + fmt(worst)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;  // 0: no stated runtime limit
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"example reproduction", 0.1, example_reproduction},
        {"inverse formula", 5.0, inverse_formula},
        {"pseudo-inverse representation", 0.0, pinv_representation},
        {"range-condition equivalence", 0.0, range_equivalence},
        {"Schatten suite", 0.0, schatten_suite},
        {"approximate duality soundness", 0.0, approx_duality},
        {"stability soundness", 60.0, stability_soundness},
        {"convergence", 0.0, convergence},
        {"composition identities", 0.0, composition},
    };
    int failures = 0, k = 0;
    for (const auto& c : criteria) {
        ++k;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_s == 0.0 || secs < c.limit_s;
        if (!in_time) o.detail += ", over the " + fmt(c.limit_s) + " s limit";
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("criterion %d %s: %s (%s; %.3f s)\n", k, c.name, pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
