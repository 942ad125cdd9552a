#include "gramkit/approx_dual.hpp"

#include <cmath>

namespace gramkit {

namespace {

void require_pair(const FrameSystem& phi, const FrameSystem& psi, const char* what) {
    if (phi.dim() != psi.dim() || phi.count() != psi.count())
        throw InvalidInput(std::string(what) + ": systems differ in shape (" +
                           shape_string(phi.synthesis()) + " vs " + shape_string(psi.synthesis()) +
                           ")");
}

FrameSystem resolve_dual(const FrameSystem& f, const std::optional<FrameSystem>& given,
                         const TolerancePolicy& pol, const char* which) {
    if (!classify(f, pol).is_frame())
        throw PreconditionFailed(std::string("approximate duality: ") + which + " is not a frame");
    if (!given) return canonical_dual(f, pol);
    if (given->dim() != f.dim() || given->count() != f.count())
        throw InvalidInput(std::string("approximate duality: ") + which + " dual has the wrong shape");
    if (!is_dual_pair(f, *given, pol).holds())
        throw PreconditionFailed(std::string("approximate duality: supplied ") + which +
                                 " dual is not a dual");
    return *given;
}

// Keeps the orientation with the larger relative margin.
SufficientCondition better(SufficientCondition a, SufficientCondition b) {
    const double ma = a.threshold > 0 ? (a.threshold - a.lhs) / a.threshold : -1.0;
    const double mb = b.threshold > 0 ? (b.threshold - b.lhs) / b.threshold : -1.0;
    if (a.holds != b.holds) return a.holds ? a : b;
    return ma >= mb ? a : b;
}

SufficientCondition make(std::string name, std::string orientation, double lhs, double threshold,
                         std::string implies) {
    return {std::move(name), std::move(orientation), lhs, threshold,
            strictly_less(lhs, threshold), std::move(implies)};
}

}  // namespace

double approx_dual_defect(const FrameSystem& phi, const FrameSystem& psi) {
    require_pair(phi, psi, "approx_dual_defect");
    return operator_norm(identity(phi.dim()) - phi.synthesis() * psi.analysis());
}

const SufficientCondition* ApproxDualCertificate::find(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return &c;
    return nullptr;
}

ApproxDualCertificate sufficient_conditions(const FrameSystem& phi, const FrameSystem& psi,
                                            const std::optional<FrameSystem>& phi_dual,
                                            const std::optional<FrameSystem>& psi_dual,
                                            const TolerancePolicy& pol) {
    require_pair(phi, psi, "sufficient_conditions");
    const FrameSystem phid = resolve_dual(phi, phi_dual, pol, "Phi");
    const FrameSystem psid = resolve_dual(psi, psi_dual, pol, "Psi");

    ApproxDualCertificate c;
    c.defect = approx_dual_defect(phi, psi);
    c.dual_defect = approx_dual_defect(phid, psid);

    // ‖I − G_{Ψ,Φ}‖ = ‖I − G_{Φ,Ψ}‖, so the orientations differ only in thresholds.
    const double gap = operator_norm(identity(phi.count()) - psi.analysis() * phi.synthesis());
    const double b_phi = phi.bessel_bound(), b_psi = psi.bessel_bound();
    const double b_phid = phid.bessel_bound(), b_psid = psid.bessel_bound();
    auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };

    c.conditions.push_back(better(make("(1)", "primal", gap, inv_sqrt(b_phi * b_phid), "Phi,Psi"),
                                  make("(1)", "swapped", gap, inv_sqrt(b_psi * b_psid), "Phi,Psi")));
    c.conditions.push_back(better(make("(2)", "primal", gap, inv_sqrt(b_phid * b_psid), "Phid,Psid"),
                                  make("(2)", "swapped", gap, inv_sqrt(b_psid * b_phid), "Phid,Psid")));
    c.conditions.push_back(better(make("(3)", "primal", gap, inv_sqrt(b_phid * b_phi), "Phi,Psi"),
                                  make("(3)", "swapped", gap, inv_sqrt(b_psid * b_psi), "Phi,Psi")));

    c.conclusion = c.conditions[0].holds || c.conditions[2].holds;
    c.dual_conclusion = c.conditions[1].holds;
    if (c.conclusion && !(c.defect < 1.0))
        throw TheoremViolation("sufficient_conditions: a condition passed but defect(Phi,Psi) >= 1");
    if (c.dual_conclusion && !(c.dual_defect < 1.0))
        throw TheoremViolation("sufficient_conditions: condition (2) passed but defect(Phid,Psid) >= 1");
    return c;
}

ApproxDualCertificate right_inverse_condition(const LinearMap& op, const LinearMap& right_inverse,
                                              const FrameSystem& phi, const FrameSystem& psi,
                                              const std::optional<FrameSystem>& phi_dual,
                                              const TolerancePolicy& pol) {
    require_pair(phi, psi, "right_inverse_condition");
    if (op.rows() != phi.dim() || op.cols() != phi.dim() || right_inverse.rows() != phi.dim() ||
        right_inverse.cols() != phi.dim())
        throw InvalidInput("right_inverse_condition: U and V must be square of the frames' dimension");
    if (relative_residual(op * right_inverse, identity(phi.dim())) > pol.equality_tolerance)
        throw PreconditionFailed("right_inverse_condition: V is not a right inverse of U");
    const FrameSystem phid = resolve_dual(phi, phi_dual, pol, "Phi");

    // G_{U,Ψ,Φ} G_{V,Φd,Φ}
    const LinearMap composite =
        (psi.analysis() * op * phi.synthesis()) * (phid.analysis() * right_inverse * phi.synthesis());
    const LinearMap plain = psi.analysis() * phi.synthesis();
    if (relative_residual(composite, plain) > pol.equality_tolerance)
        throw TheoremViolation("right_inverse_condition: composite differs from G_{Psi,Phi}");

    ApproxDualCertificate c;
    c.defect = approx_dual_defect(phi, psi);
    c.dual_defect = approx_dual_defect(phid, canonical_dual(psi, pol));
    const double lhs = operator_norm(identity(phi.count()) - composite);
    c.conditions.push_back(make("(4)", "primal", lhs,
                                1.0 / std::sqrt(phi.bessel_bound() * phid.bessel_bound()), "Phi,Psi"));
    c.conclusion = c.conditions.back().holds;
    if (c.conclusion && !(c.defect < 1.0))
        throw TheoremViolation("right_inverse_condition: condition (4) passed but defect >= 1");
    return c;
}

Certificate necessary_bound(const FrameSystem& phi, const FrameSystem& psi,
                            const TolerancePolicy& pol) {
    require_pair(phi, psi, "necessary_bound");
    Certificate cert;
    cert.name = "approximate-dual-necessary-bound";
    const double defect = approx_dual_defect(phi, psi);
    cert.value("defect", defect);
    const FrameClass pc = classify(phi, pol);
    const FrameClass sc = classify(psi, pol);
    if (!pc.is_riesz_basis() || !sc.is_riesz_basis() || !(defect < 1.0)) {
        cert.verdict = Verdict::Inapplicable;
        cert.note = "certificate inapplicable: requires Riesz bases with defect < 1";
        return cert;
    }
    const double gap = operator_norm(identity(phi.count()) - phi.analysis() * psi.synthesis());
    const double bound = std::sqrt(pc.upper * sc.upper / (pc.lower * sc.lower));
    if (!cert.check("||I - G_{Phi,Psi}|| < sqrt(B_Phi B_Psi / (A_Phi A_Psi))", gap, Relation::Less,
                    bound, 0.0))
        throw TheoremViolation("necessary_bound: bound fails for approximate dual Riesz bases");
    cert.verdict = Verdict::Holds;
    cert.conclusions.push_back("necessary bound satisfied");
    return cert;
}

FrameSystem corrected_dual(const FrameSystem& phi, const FrameSystem& psi, const TolerancePolicy& pol) {
    require_pair(phi, psi, "corrected_dual");
    const double defect = approx_dual_defect(phi, psi);
    if (!(defect < 1.0))
        throw PreconditionFailed("corrected_dual: defect " + std::to_string(defect) +
                                 " is not below 1");
    const LinearMap mixed = psi.synthesis() * phi.analysis();
    if (!is_invertible(mixed, pol))
        throw PreconditionFailed("corrected_dual: T_Psi T_Phi* is numerically singular");
    FrameSystem out(inverse(mixed, pol) * psi.synthesis());
    if (!is_dual_pair(phi, out, pol).holds())
        throw TheoremViolation("corrected_dual: (T_Psi T_Phi*)^-1 Psi is not a dual of Phi");
    return out;
}

}  // namespace gramkit
