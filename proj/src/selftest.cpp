#include "gramkit/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gramkit/approx_dual.hpp"
#include "gramkit/cross_gram.hpp"
#include "gramkit/inversion.hpp"
#include "gramkit/schatten.hpp"
#include "gramkit/stability.hpp"

namespace gramkit {

namespace {

// Entrywise ⟨Uψ_j, φ_i⟩, kept apart from the library's factored product.
LinearMap brute_gram(const LinearMap& op, const FrameSystem& left, const FrameSystem& right) {
    LinearMap g(left.count(), right.count());
    for (Index i = 0; i < left.count(); ++i)
        for (Index j = 0; j < right.count(); ++j) {
            Complex s = 0;
            const Vector image = op * right.element(j);
            for (Index k = 0; k < left.dim(); ++k) s += image(k) * std::conj(left.synthesis()(k, i));
            g(i, j) = s;
        }
    return g;
}

bool singular(const LinearMap& g, const TolerancePolicy& pol) {
    if (g.rows() != g.cols()) return true;
    Eigen::JacobiSVD<LinearMap> svd(g);
    const auto& s = svd.singularValues();
    return s.size() == 0 ? false : s(s.size() - 1) <= pol.relative_rank_cutoff * s(0);
}

double log_uniform(Rng& rng, double lo_exp, double hi_exp) {
    std::uniform_real_distribution<double> u(lo_exp, hi_exp);
    return std::pow(10.0, u(rng));
}

bool coin(Rng& rng) { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; }

}  // namespace

std::string_view to_string(StabilityTheorem t) {
    switch (t) {
        case StabilityTheorem::ThreeOps: return "three-ops";
        case StabilityTheorem::Factor: return "factor";
        case StabilityTheorem::C1: return "c1";
        case StabilityTheorem::C2: return "c2";
        case StabilityTheorem::C3: return "c3";
        case StabilityTheorem::Riesz: return "riesz";
        case StabilityTheorem::Joint: return "joint";
    }
    return "unknown";
}

std::vector<StabilityTheorem> all_stability_theorems() {
    return {StabilityTheorem::ThreeOps, StabilityTheorem::Factor, StabilityTheorem::C1,
            StabilityTheorem::C2,       StabilityTheorem::C3,     StabilityTheorem::Riesz,
            StabilityTheorem::Joint};
}

StabilityTrial stability_trial(StabilityTheorem theorem, Rng& rng, Index n, const TolerancePolicy& pol,
                               Index joint_samples) {
    const double s = log_uniform(rng, -3.0, 0.0);
    StabilityTrial out;
    auto record = [&](const StabilityCertificate& cert, const LinearMap& perturbed) {
        out.passed = cert.holds();
        if (out.passed) out.singular_after_pass = singular(perturbed, pol);
    };
    const LinearMap id = identity(n);

    switch (theorem) {
        case StabilityTheorem::ThreeOps:
        case StabilityTheorem::Factor: {
            // Riesz basis, or a non-spanning Riesz sequence when there is room.
            const Index count = (n > 1 && coin(rng)) ? n - 1 : n;
            const FrameSystem phi = random_frame(rng, n, count);
            const LinearMap u1 = random_invertible(rng, n);
            const LinearMap u2 = id + s * random_direction(rng, n, n);
            if (theorem == StabilityTheorem::ThreeOps) {
                const LinearMap u3 = id + s * random_direction(rng, n, n);
                const auto cert = stability_three_ops(u1, u2, u3, phi, pol);
                record(cert, brute_gram(u1, phi.mapped(u2), phi.mapped(u3)));
            } else {
                const auto cert = stability_factor(u1, u2, phi, pol);
                record(cert, brute_gram(u1, phi, phi.mapped(u2)));
                if (out.passed && !out.singular_after_pass)
                    out.singular_after_pass = singular(brute_gram(u1, phi.mapped(u2), phi), pol);
            }
            break;
        }
        case StabilityTheorem::C1:
        case StabilityTheorem::C2:
        case StabilityTheorem::C3: {
            const FrameSystem phi = random_frame(rng, n, n);
            const FrameSystem psi = random_frame(rng, n, n);
            const LinearMap u = random_invertible(rng, n);
            if (theorem == StabilityTheorem::C1) {
                const LinearMap v = u + s * random_direction(rng, n, n);
                const auto certs = perturb_certificates(u, v, phi, psi, std::nullopt, std::nullopt, pol);
                record(certs.front(), brute_gram(v, phi, psi));
            } else if (theorem == StabilityTheorem::C2) {
                const FrameSystem theta(psi.synthesis() + s * random_direction(rng, n, n));
                const auto certs = perturb_certificates(u, std::nullopt, phi, psi, std::nullopt, theta, pol);
                record(certs.front(), brute_gram(u, phi, theta));
            } else {
                const FrameSystem xi(phi.synthesis() + s * random_direction(rng, n, n));
                const auto certs = perturb_certificates(u, std::nullopt, phi, psi, xi, std::nullopt, pol);
                record(certs.front(), brute_gram(u, xi, psi));
            }
            break;
        }
        case StabilityTheorem::Riesz: {
            const FrameSystem phi = random_frame(rng, n, n);
            const LinearMap u = random_invertible(rng, n);
            const FrameSystem psi(inverse(u, pol) *
                                  (phi.synthesis() + s * random_direction(rng, n, n)));
            const auto cert = riesz_perturbation(u, phi, psi, pol);
            record(cert, brute_gram(u, phi, psi));
            break;
        }
        case StabilityTheorem::Joint: {
            const FrameSystem phi = random_frame(rng, n, n, 0.8, 1.2);
            const FrameSystem psi = random_frame(rng, n, n, 0.8, 1.2);
            const LinearMap u = random_invertible(rng, n, 0.8, 1.25);
            const double t = s * 0.05;
            const LinearMap v = u + t * random_direction(rng, n, n);
            const FrameSystem xi(phi.synthesis() + t * random_direction(rng, n, n));
            const FrameSystem theta(psi.synthesis() + t * random_direction(rng, n, n));
            // Budget sized from the actual perturbation, sometimes slightly short.
            const double slack = coin(rng) ? 1.05 : 0.9;
            StabilityBudget budget;
            budget.lambda1 = slack * operator_norm(psi.synthesis() - theta.synthesis()) /
                             smallest_singular_value(psi.synthesis());
            budget.lambda2 = slack * operator_norm(phi.synthesis() - xi.synthesis()) /
                             smallest_singular_value(phi.synthesis());
            budget.mu = slack * operator_norm(u - v);
            JointOptions options;
            options.seed = rng();
            options.samples = joint_samples;
            const auto cert = joint_stability(u, v, phi, psi, xi, theta, budget, options, pol);
            record(cert, brute_gram(v, xi, theta));
            break;
        }
    }
    return out;
}

bool SelftestReport::all_passed() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.failed == 0; });
}

SelftestReport run_selftest(std::uint64_t seed, const TolerancePolicy& pol, Index trials_per_size) {
    pol.validate();
    SelftestReport report;
    report.seed = seed;
    Rng rng(seed);
    const double tol = pol.equality_tolerance;
    const std::vector<Index> sizes{2, 4, 8};

    auto suite = [&](std::string name, const std::function<bool(Index)>& trial) {
        SuiteResult r;
        r.name = std::move(name);
        for (Index n : sizes)
            for (Index t = 0; t < trials_per_size; ++t) {
                bool ok = false;
                std::string why = "check failed";
                try {
                    ok = trial(n);
                } catch (const std::exception& e) {
                    why = e.what();
                }
                if (ok) {
                    ++r.passed;
                } else {
                    ++r.failed;
                    if (r.first_failure.empty())
                        r.first_failure = "n=" + std::to_string(n) + ": " + why;
                }
            }
        report.suites.push_back(std::move(r));
    };

    suite("pseudo-inverse axioms", [&](Index n) {
        const LinearMap a = random_rank(rng, n, n + 1, n - 1);
        const LinearMap x = pseudo_inverse(a, pol);
        const LinearMap ax = a * x, xa = x * a;
        return relative_residual(a * x * a, a) <= tol && relative_residual(x * a * x, x) <= tol &&
               relative_residual(ax.adjoint(), ax) <= tol && relative_residual(xa.adjoint(), xa) <= tol &&
               numeric_rank(a, pol) == n - 1;
    });

    suite("canonical dual", [&](Index n) {
        const FrameSystem f = random_frame(rng, n, n + n / 2);
        const FrameSystem d = canonical_dual(f, pol);
        return is_dual_pair(f, d, pol).holds() &&
               relative_residual(canonical_dual(d, pol).synthesis(), f.synthesis()) <= tol;
    });

    suite("cross Gram factorization and norm bound", [&](Index n) {
        const FrameSystem phi = random_frame(rng, n, n + 1);
        const FrameSystem psi = random_frame(rng, n, n + 2);
        const LinearMap u = random_matrix(rng, n, n);
        const CrossGram g = cross_gram(u, phi, psi, pol);
        const LinearMap via_standard =
            gram_matrix(phi.analysis(), FrameSystem::standard(phi.count()), psi);
        return relative_residual(g.matrix, brute_gram(u, phi, psi)) <= tol &&
               relative_residual(via_standard, gram_matrix(identity(n), phi, psi)) <= tol;
    });

    suite("inverse as cross Gram of canonical duals", [&](Index n) {
        const LinearMap u = random_invertible(rng, n);
        const InversionReport r = invert_gram(u, random_frame(rng, n, n), random_frame(rng, n, n), pol);
        return r.invertible && r.inverse_residual && *r.inverse_residual <= tol;
    });

    suite("pseudo-inverse through the special dual", [&](Index n) {
        const LinearMap u = random_invertible(rng, n);
        const FrameSystem phi = random_frame(rng, n, n + n / 2);
        const FrameSystem psi = random_frame(rng, n, n + n / 2);
        const PinvReport r = pinv_gram(u, phi, psi, pol);
        const auto* rep = r.find("G_{U^-1, Psi~, Phi^(U,Psi)}");
        return rep && rep->holds && is_dual_pair(phi, r.phi_dual.frame, pol).holds() &&
               std::all_of(r.subspace_identities.begin(), r.subspace_identities.end(),
                           [](const SubspaceIdentity& s) { return s.holds; });
    });

    suite("range condition equivalence", [&](Index n) {
        const LinearMap q = random_unitary(rng, n);
        LinearMap u;
        FrameSystem psi;
        if (coin(rng)) {
            psi = random_tight_frame(rng, n, n + 1, 2.0);
            u = random_rank(rng, n, n, std::max<Index>(1, n / 2));
        } else {
            // S_Ψ = Q diag(1,..,1,2) Q* and R(U*) = span{Q(e_1 + e_n)}.
            LinearMap t(n, n + 1);
            t << identity(n), identity(n).col(n - 1);
            psi = FrameSystem(q * t);
            const Vector v = q * (identity(n).col(0) + identity(n).col(n - 1));
            u = random_matrix(rng, n, 1) * v.adjoint();
        }
        const FrameSystem phi = random_frame(rng, n, n + 1);
        const bool cond = range_condition(u, psi, DualSide::Psi, pol);
        const PinvReport r = pinv_gram(u, phi, psi, pol);
        return r.find("G_{U+, Psi~, Phi^(U,Psi)}")->holds == cond;
    });

    suite("Schatten inequalities", [&](Index n) {
        const std::vector<double> ps{1.0, 2.0, 3.0};
        const LinearMap u = random_matrix(rng, n, n);
        const FrameSystem phi = random_frame(rng, n, n + 1);
        const FrameSystem psi = random_frame(rng, n, n + 1);
        for (double p : ps)
            if (!schatten_gram_check(u, phi, psi, p, pol).all_hold()) return false;
        return true;
    });

    suite("approximate duality", [&](Index n) {
        const Index m = n + (coin(rng) ? 1 : 0);
        const FrameSystem phi = random_frame(rng, n, m);
        const FrameSystem psi(canonical_dual(phi, pol).synthesis() +
                              log_uniform(rng, -3.0, 0.0) * random_direction(rng, n, m));
        if (!classify(psi, pol).is_frame()) return true;
        const ApproxDualCertificate c = sufficient_conditions(phi, psi, std::nullopt, std::nullopt, pol);
        if (c.conclusion && !(c.defect < 1.0)) return false;
        if (c.defect < 1.0) return is_dual_pair(phi, corrected_dual(phi, psi, pol), pol).holds();
        return true;
    });

    for (StabilityTheorem t : all_stability_theorems()) {
        suite("stability " + std::string(to_string(t)), [&, t](Index n) {
            const StabilityTrial trial = stability_trial(t, rng, n, pol, 512);
            return !trial.singular_after_pass;
        });
    }

    suite("Neumann series", [&](Index n) {
        const LinearMap u1 = random_invertible(rng, n);
        const double r = log_uniform(rng, -3.0, -0.3);
        const LinearMap u2 = u1 - r / operator_norm(inverse(u1, pol)) * random_direction(rng, n, n);
        const NeumannResult res = neumann_inverse(u1, u2, pol);
        return relative_residual(res.inverse, inverse(u2, pol)) <= 10 * tol;
    });

    return report;
}

}  // namespace gramkit
