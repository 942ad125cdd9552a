#include "gramkit/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gramkit/cross_gram.hpp"

namespace gramkit {

namespace {

// ‖G⁻¹‖ for a Gram matrix the theorem assumes invertible.
double inverse_norm(const LinearMap& g, const TolerancePolicy& pol, const char* what) {
    if (!is_invertible(g, pol))
        throw PreconditionFailed(std::string(what) + ": the unperturbed Gram matrix is singular");
    return 1.0 / smallest_singular_value(g);
}

bool full_rank(const LinearMap& g, const TolerancePolicy& pol) {
    return g.rows() == g.cols() && numeric_rank(g, pol) == g.rows();
}

// On a passing certificate the perturbed Gram matrix must be invertible.
void witness(StabilityCertificate& cert, const LinearMap& perturbed, const TolerancePolicy& pol) {
    const double s = smallest_singular_value(perturbed);
    cert.witness_sigma_min = cert.witness_sigma_min ? std::min(*cert.witness_sigma_min, s) : s;
    if (!full_rank(perturbed, pol))
        throw TheoremViolation(cert.name + ": certificate passed but the perturbed Gram matrix is singular");
}

void set_main(StabilityCertificate& cert, double lhs, double rhs) {
    cert.lhs = lhs;
    cert.rhs = rhs;
    cert.margin = rhs - lhs;
}

void conclude(StabilityCertificate& cert, std::string conclusion) {
    cert.verdict = cert.all_checks_hold() ? Verdict::Holds : Verdict::Inconclusive;
    if (cert.holds())
        cert.conclusions.push_back(std::move(conclusion));
    else
        cert.note = "bound not met; no claim about invertibility";
}

double relative_gap(const LinearMap& a, const LinearMap& ref) {
    const double scale = operator_norm(ref);
    return operator_norm(a - ref) / (scale > 0 ? scale : 1.0);
}

void require_square(const LinearMap& op, Index n, const char* what) {
    if (op.rows() != n || op.cols() != n)
        throw InvalidInput(std::string(what) + ": operator " + shape_string(op) +
                           " must be square of dimension " + std::to_string(n));
}

void require_same_shape(const FrameSystem& a, const FrameSystem& b, const char* what) {
    if (a.dim() != b.dim() || a.count() != b.count())
        throw InvalidInput(std::string(what) + ": perturbed frame has shape " +
                           shape_string(b.synthesis()) + ", expected " + shape_string(a.synthesis()));
}

}  // namespace

NeumannResult neumann_inverse(const LinearMap& u1, const LinearMap& u2, const TolerancePolicy& pol) {
    if (u1.rows() != u1.cols() || u2.rows() != u1.rows() || u2.cols() != u1.cols())
        throw InvalidInput("neumann_inverse: U1 and U2 must be square of the same size");
    if (!is_invertible(u1, pol)) throw PreconditionFailed("neumann_inverse: U1 is not invertible");
    const LinearMap u1_inv = inverse(u1, pol);
    const double inv_norm = operator_norm(u1_inv);
    NeumannResult out;
    out.ratio = inv_norm * operator_norm(u1 - u2);
    if (!(out.ratio < 1.0))
        throw PreconditionFailed("neumann_inverse: series not guaranteed convergent (r = " +
                                 std::to_string(out.ratio) + ")");

    Index terms = 0;
    if (out.ratio > 0.0) {
        const double target =
            pol.equality_tolerance * (1.0 - out.ratio) / (inv_norm * std::max(operator_norm(u2), 1e-300));
        if (target < 1.0) {
            const double needed = std::ceil(std::log(target) / std::log(out.ratio)) - 1.0;
            if (needed > static_cast<double>(kNeumannTermCap))
                throw PreconditionFailed("neumann_inverse: more than " +
                                         std::to_string(kNeumannTermCap) + " terms needed");
            terms = std::max<Index>(0, static_cast<Index>(needed));
        }
    }
    out.terms = terms;
    out.inverse = neumann_partial_sum(u1, u2, terms, pol);
    out.truncation_bound = std::pow(out.ratio, static_cast<double>(terms + 1)) / (1.0 - out.ratio) * inv_norm;
    out.residual = operator_norm(u2 * out.inverse - identity(u2.rows()));
    if (out.residual > 10.0 * pol.equality_tolerance)
        throw TheoremViolation("neumann_inverse: ||U2 X - I|| exceeds 10 tol after truncation");
    return out;
}

LinearMap neumann_partial_sum(const LinearMap& u1, const LinearMap& u2, Index terms,
                              const TolerancePolicy& pol) {
    const LinearMap u1_inv = inverse(u1, pol);
    const LinearMap step = u1_inv * (u1 - u2);
    LinearMap term = u1_inv;
    LinearMap sum = term;
    for (Index k = 1; k <= terms; ++k) {
        term = step * term;
        sum += term;
    }
    return sum;
}

StabilityCertificate stability_three_ops(const LinearMap& u1, const LinearMap& u2, const LinearMap& u3,
                                         const FrameSystem& phi, const TolerancePolicy& pol) {
    const Index n = phi.dim();
    require_square(u1, n, "stability_three_ops");
    require_square(u2, n, "stability_three_ops");
    require_square(u3, n, "stability_three_ops");
    const LinearMap g = gram_matrix(u1, phi, phi);
    const double g_inv_norm = inverse_norm(g, pol, "stability_three_ops");

    StabilityCertificate cert;
    cert.name = "three-ops";
    const LinearMap combined = u2.adjoint() * u1 * u3;
    const double lhs = operator_norm(combined - u1);
    const double rhs = 1.0 / (g_inv_norm * phi.bessel_bound());
    set_main(cert, lhs, rhs);
    cert.value("||G^-1||", g_inv_norm);
    cert.value("B_Phi", phi.bessel_bound());
    cert.check("||U2* U1 U3 - U1|| < 1/(||G^-1|| B_Phi)", lhs, Relation::Less, rhs);
    conclude(cert, "G_{U1, U2 Phi, U3 Phi} is invertible");
    if (!cert.holds()) return cert;

    const LinearMap perturbed = gram_matrix(u1, phi.mapped(u2), phi.mapped(u3));
    witness(cert, perturbed, pol);

    if (classify(phi, pol).is_frame()) {
        if (!classify(phi, pol).is_riesz_basis() || !is_invertible(u1, pol))
            throw TheoremViolation("three-ops: spanning Phi with invertible G but Phi not a Riesz "
                                   "basis or U1 singular");
        const NeumannResult series = neumann_inverse(u1, combined, pol);
        const FrameSystem dual = canonical_dual(phi, pol);
        const LinearMap inv = dual.analysis() * series.inverse * dual.synthesis();
        const LinearMap direct = inverse(perturbed, pol);
        cert.series_inverse = inv;
        cert.series_residual = relative_gap(inv, direct);
        // truncation error carried through T_Φ̃* · T_Φ̃, ‖T_Φ̃‖² = 1/A_Φ
        const double carried = series.truncation_bound / classify(phi, pol).lower / operator_norm(direct);
        cert.truncation_bound = carried;
        cert.conclusions.push_back("Phi is a Riesz basis and U1 is invertible");
        if (*cert.series_residual > std::max(10.0 * pol.equality_tolerance, 2.0 * carried))
            throw TheoremViolation("three-ops: series inverse differs from the direct inverse");
    }
    return cert;
}

StabilityCertificate stability_factor(const LinearMap& u1, const LinearMap& u2, const FrameSystem& phi,
                                      const TolerancePolicy& pol) {
    const Index n = phi.dim();
    require_square(u1, n, "stability_factor");
    require_square(u2, n, "stability_factor");
    const LinearMap g = gram_matrix(u1, phi, phi);
    const double g_inv_norm = inverse_norm(g, pol, "stability_factor");

    StabilityCertificate cert;
    cert.name = "factor";
    const double lhs = operator_norm(u2 - identity(n));
    const double rhs = 1.0 / (g_inv_norm * phi.bessel_bound() * operator_norm(u1));
    set_main(cert, lhs, rhs);
    cert.value("||G^-1||", g_inv_norm);
    cert.check("||U2 - I|| < 1/(||G^-1|| B_Phi ||U1||)", lhs, Relation::Less, rhs);
    conclude(cert, "G_{U1, Phi, U2 Phi} and G_{U1, U2 Phi, Phi} are invertible");
    if (!cert.holds()) return cert;

    const FrameSystem moved = phi.mapped(u2);
    const LinearMap right_moved = gram_matrix(u1, phi, moved);
    const LinearMap left_moved = gram_matrix(u1, moved, phi);
    witness(cert, right_moved, pol);
    witness(cert, left_moved, pol);

    if (classify(phi, pol).is_frame() && is_invertible(u1, pol)) {
        const LinearMap u1_inv = inverse(u1, pol);
        const FrameSystem phi_dual = canonical_dual(phi, pol);
        const FrameSystem moved_dual = canonical_dual(moved, pol);
        const double a = relative_gap(gram_matrix(u1_inv, moved_dual, phi_dual), inverse(right_moved, pol));
        const double b = relative_gap(gram_matrix(u1_inv, phi_dual, moved_dual), inverse(left_moved, pol));
        cert.series_residual = std::max(a, b);
        cert.value("closed-form residual G_{U1,Phi,U2 Phi}", a);
        cert.value("closed-form residual G_{U1,U2 Phi,Phi}", b);
        if (*cert.series_residual > pol.equality_tolerance)
            throw TheoremViolation("factor: closed-form inverse differs from the direct inverse");
    }
    return cert;
}

std::vector<StabilityCertificate> perturb_certificates(const LinearMap& op,
                                                       const std::optional<LinearMap>& perturbed_op,
                                                       const FrameSystem& phi, const FrameSystem& psi,
                                                       const std::optional<FrameSystem>& xi,
                                                       const std::optional<FrameSystem>& theta,
                                                       const TolerancePolicy& pol) {
    const LinearMap g = gram_matrix(op, phi, psi);
    const double g_inv_norm = inverse_norm(g, pol, "perturb_certificates");
    const double b_phi = phi.bessel_bound(), b_psi = psi.bessel_bound();
    const double op_norm = operator_norm(op);
    std::vector<StabilityCertificate> out;

    if (perturbed_op) {
        if (perturbed_op->rows() != op.rows() || perturbed_op->cols() != op.cols())
            throw InvalidInput("perturb_certificates: V has shape " + shape_string(*perturbed_op) +
                               ", U has " + shape_string(op));
        StabilityCertificate c;
        c.name = "c1";
        const double lhs = operator_norm(op - *perturbed_op);
        const double rhs = 1.0 / (g_inv_norm * std::sqrt(b_phi * b_psi));
        set_main(c, lhs, rhs);
        c.check("||U - V|| < 1/(||G^-1|| sqrt(B_Phi B_Psi))", lhs, Relation::Less, rhs);
        conclude(c, "G_{V, Phi, Psi} is invertible");
        if (c.holds()) witness(c, gram_matrix(*perturbed_op, phi, psi), pol);
        out.push_back(std::move(c));
    }
    if (theta) {
        require_same_shape(psi, *theta, "perturb_certificates");
        StabilityCertificate c;
        c.name = "c2";
        const double lhs = element_distance(psi, *theta);
        const double rhs = 1.0 / (g_inv_norm * std::sqrt(b_phi) * op_norm);
        set_main(c, lhs, rhs);
        c.check("(sum ||psi_i - theta_i||^2)^(1/2) < 1/(||G^-1|| sqrt(B_Phi) ||U||)", lhs,
                Relation::Less, rhs);
        conclude(c, "G_{U, Phi, Theta} is invertible");
        if (c.holds()) witness(c, gram_matrix(op, phi, *theta), pol);
        out.push_back(std::move(c));
    }
    if (xi) {
        require_same_shape(phi, *xi, "perturb_certificates");
        StabilityCertificate c;
        c.name = "c3";
        const double lhs = element_distance(phi, *xi);
        const double rhs = 1.0 / (g_inv_norm * std::sqrt(b_psi) * op_norm);
        set_main(c, lhs, rhs);
        c.check("(sum ||phi_i - xi_i||^2)^(1/2) < 1/(||G^-1|| sqrt(B_Psi) ||U||)", lhs,
                Relation::Less, rhs);
        conclude(c, "G_{U, Xi, Psi} is invertible");
        if (c.holds()) witness(c, gram_matrix(op, *xi, psi), pol);
        out.push_back(std::move(c));
    }
    return out;
}

StabilityCertificate riesz_perturbation(const LinearMap& op, const FrameSystem& phi,
                                        const FrameSystem& psi, const TolerancePolicy& pol) {
    const FrameClass pc = classify(phi, pol);
    if (!pc.is_riesz_basis())
        throw PreconditionFailed("riesz_perturbation: Phi is not a Riesz basis");
    if (psi.count() != phi.count())
        throw InvalidInput("riesz_perturbation: Phi and Psi must have the same number of elements");
    if (op.cols() != psi.dim() || op.rows() != phi.dim())
        throw InvalidInput("riesz_perturbation: U must map Psi's space into Phi's space");
    const LinearMap image = op * psi.synthesis();

    StabilityCertificate cert;
    cert.name = "riesz";
    const double lhs = (image - phi.synthesis()).squaredNorm();
    const double rhs = pc.lower * pc.lower / pc.upper;
    set_main(cert, lhs, rhs);
    const LinearMap gram_phi = phi.gram();
    const double gram_inv_norm = operator_norm(inverse(gram_phi, pol));
    cert.value("||G_Phi^-1||", gram_inv_norm);
    cert.value("1/A_Phi", 1.0 / pc.lower);
    if (gram_inv_norm > (1.0 + pol.equality_tolerance) / pc.lower)
        throw TheoremViolation("riesz_perturbation: ||G_Phi^-1|| exceeds 1/A_Phi");
    cert.check("sum ||U psi_i - phi_i||^2 < A_Phi^2 / B_Phi", lhs, Relation::Less, rhs);
    conclude(cert, "G_{U, Phi, Psi} is invertible");
    if (!cert.holds()) return cert;

    const LinearMap g = phi.analysis() * image;
    witness(cert, g, pol);
    const NeumannResult series = neumann_inverse(gram_phi, g, pol);
    const LinearMap direct = inverse(g, pol);
    cert.series_inverse = series.inverse;
    cert.series_residual = relative_gap(series.inverse, direct);
    cert.truncation_bound = series.truncation_bound / operator_norm(direct);
    if (*cert.series_residual > std::max(10.0 * pol.equality_tolerance, 2.0 * *cert.truncation_bound))
        throw TheoremViolation("riesz_perturbation: series inverse differs from the direct inverse");
    return cert;
}

StabilityCertificate joint_stability(const LinearMap& op, const LinearMap& perturbed_op,
                                     const FrameSystem& phi, const FrameSystem& psi,
                                     const FrameSystem& xi, const FrameSystem& theta,
                                     const StabilityBudget& budget, const JointOptions& options,
                                     const TolerancePolicy& pol) {
    for (double v : {budget.lambda1, budget.lambda2, budget.lambda3, budget.lambda4, budget.mu})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidInput("joint_stability: budget entries must be finite and nonnegative");
    require_same_shape(phi, xi, "joint_stability");
    require_same_shape(psi, theta, "joint_stability");
    if (perturbed_op.rows() != op.rows() || perturbed_op.cols() != op.cols())
        throw InvalidInput("joint_stability: V and U differ in shape");
    const FrameClass phi_class = classify(phi, pol);
    const FrameClass psi_class = classify(psi, pol);
    if (!phi_class.is_frame() || !psi_class.is_frame())
        throw PreconditionFailed("joint_stability: Phi and Psi must be frames");
    const LinearMap g = gram_matrix(op, phi, psi);
    const double g_inv_norm = inverse_norm(g, pol, "joint_stability");
    if (!is_invertible(op, pol)) throw PreconditionFailed("joint_stability: U is singular");
    const double op_inv_norm = operator_norm(inverse(op, pol));
    const double op_norm = operator_norm(op);

    const double b_phi = phi.bessel_bound(), b_psi = psi.bessel_bound();
    const double b_xi = xi.bessel_bound(), b_theta = theta.bessel_bound();
    const double a_phi = phi_class.lower, a_psi = psi_class.lower;
    const double big_b = std::max({b_phi, b_psi, b_xi, b_theta});
    const double small_a = std::min(a_phi, a_psi);
    const double lambda = budget.lambda();

    StabilityCertificate cert;
    cert.name = "joint";
    cert.value("B", big_b);
    cert.value("A", small_a);
    cert.value("lambda", lambda);
    cert.value("mu", budget.mu);

    const double t_lhs = operator_norm(psi.synthesis() - theta.synthesis()) +
                         operator_norm(phi.synthesis() - xi.synthesis());
    const double t_rhs = budget.lambda1 * std::sqrt(b_psi) + budget.lambda2 * std::sqrt(b_theta) +
                         budget.lambda3 * std::sqrt(b_phi) + budget.lambda4 * std::sqrt(b_xi);
    cert.check("||T_Psi - T_Theta|| + ||T_Phi - T_Xi|| <= l1 sqrt(B_Psi) + l2 sqrt(B_Theta) + "
               "l3 sqrt(B_Phi) + l4 sqrt(B_Xi)",
               t_lhs, Relation::LessEqual, t_rhs);
    // Pointwise hypothesis certified outright through σ_min of each synthesis.
    const double pointwise_rhs = budget.lambda1 * smallest_singular_value(psi.synthesis()) +
                                 budget.lambda2 * smallest_singular_value(phi.synthesis()) +
                                 budget.lambda3 * smallest_singular_value(xi.synthesis()) +
                                 budget.lambda4 * smallest_singular_value(theta.synthesis());
    cert.value("pointwise hypothesis certified", t_lhs <= pointwise_rhs ? 1.0 : 0.0);

    const double mu_lhs = budget.mu + 2.0 * op_norm * lambda;
    const double mu_rhs = std::sqrt(a_psi * a_phi) / (op_inv_norm * big_b);
    set_main(cert, mu_lhs, mu_rhs);
    cert.check("||U - V|| < mu", operator_norm(op - perturbed_op), Relation::Less, budget.mu);
    cert.check("mu + 2||U|| lambda < sqrt(A_Psi A_Phi) / (||U^-1|| B)", mu_lhs, Relation::Less, mu_rhs);
    cert.check("lambda (1 + 3 sqrt(B/A)) < 1", lambda * (1.0 + 3.0 * std::sqrt(big_b / small_a)),
               Relation::Less, 1.0);

    const double intermediate = std::sqrt(a_psi * a_phi) / op_inv_norm;
    cert.value("sqrt(A_Psi A_Phi)/||U^-1||", intermediate);
    cert.value("1/||G^-1||", 1.0 / g_inv_norm);
    if (intermediate > (1.0 + pol.equality_tolerance) / g_inv_norm)
        throw TheoremViolation("joint_stability: sqrt(A_Psi A_Phi)/||U^-1|| exceeds 1/||G^-1||");

    if (cert.all_checks_hold() && options.samples > 0) {
        // Random coefficient vectors against the pointwise hypothesis.
        std::mt19937_64 rng(options.seed);
        std::normal_distribution<double> normal;
        const Index m = phi.count();
        const Index block = 256;
        Index tried = 0, violations = 0;
        double worst = 0.0;
        while (tried < options.samples) {
            const Index cols = std::min(block, options.samples - tried);
            LinearMap c(m, cols);
            for (Index j = 0; j < cols; ++j)
                for (Index i = 0; i < m; ++i) c(i, j) = Complex(normal(rng), normal(rng));
            const LinearMap d_psi = (psi.synthesis() - theta.synthesis()) * c;
            const LinearMap d_phi = (phi.synthesis() - xi.synthesis()) * c;
            const LinearMap s_psi = psi.synthesis() * c, s_phi = phi.synthesis() * c;
            const LinearMap s_xi = xi.synthesis() * c, s_theta = theta.synthesis() * c;
            for (Index j = 0; j < cols; ++j) {
                const double lhs = d_psi.col(j).norm() + d_phi.col(j).norm();
                const double rhs = budget.lambda1 * s_psi.col(j).norm() +
                                   budget.lambda2 * s_phi.col(j).norm() +
                                   budget.lambda3 * s_xi.col(j).norm() +
                                   budget.lambda4 * s_theta.col(j).norm();
                if (lhs > rhs * (1.0 + 1e-12)) ++violations;
                if (rhs > 0) worst = std::max(worst, lhs / rhs);
            }
            tried += cols;
        }
        cert.value("pointwise samples", static_cast<double>(tried));
        cert.value("pointwise violations", static_cast<double>(violations));
        cert.value("pointwise worst ratio", worst);
        cert.check("sampled pointwise violations", static_cast<double>(violations), Relation::Equal, 0.0);
    }

    conclude(cert, "G_{V, Xi, Theta} is invertible and Xi, Theta are Riesz bases");
    if (!cert.holds()) return cert;
    witness(cert, gram_matrix(perturbed_op, xi, theta), pol);
    if (!classify(xi, pol).is_riesz_basis() || !classify(theta, pol).is_riesz_basis())
        throw TheoremViolation("joint_stability: certificate passed but Xi or Theta is not a Riesz basis");
    return cert;
}

bool ConvergenceTable::decays_after(Index from, double slack) const {
    for (std::size_t k = 1; k < rows.size(); ++k)
        if (rows[k].step > from && rows[k].deviation > rows[k - 1].deviation + slack) return false;
    return true;
}

ConvergenceTable convergence_harness(const std::vector<ConvergenceStep>& sequence,
                                     const ConvergenceStep& limit, const TolerancePolicy&) {
    const LinearMap g = gram_matrix(limit.op, limit.phi, limit.psi);
    const double phi_norm = operator_norm(limit.phi.synthesis());
    const double psi_norm = operator_norm(limit.psi.synthesis());
    ConvergenceTable table;
    Index step = 0;
    for (const auto& s : sequence) {
        ++step;
        if (s.op.rows() != limit.op.rows() || s.op.cols() != limit.op.cols() ||
            s.phi.dim() != limit.phi.dim() || s.phi.count() != limit.phi.count() ||
            s.psi.dim() != limit.psi.dim() || s.psi.count() != limit.psi.count())
            throw InvalidInput("convergence_harness: step " + std::to_string(step) +
                               " has shapes inconsistent with the limit");
        ConvergenceRow row;
        row.step = step;
        row.deviation = operator_norm(gram_matrix(s.op, s.phi, s.psi) - g);
        row.bound = operator_norm(s.phi.analysis() * s.op) *
                        operator_norm(s.psi.synthesis() - limit.psi.synthesis()) +
                    (operator_norm(s.phi.synthesis() - limit.phi.synthesis()) * operator_norm(s.op) +
                     phi_norm * operator_norm(s.op - limit.op)) *
                        psi_norm;
        const double slack = 1e-12 * std::max(1.0, operator_norm(g));
        if (row.deviation > row.bound + slack)
            throw TheoremViolation("convergence_harness: deviation exceeds the bound at step " +
                                   std::to_string(step));
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace gramkit
