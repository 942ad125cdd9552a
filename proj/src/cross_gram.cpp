#include "gramkit/cross_gram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gramkit {

namespace {

void require_maps(const LinearMap& op, const FrameSystem& left, const FrameSystem& right) {
    if (op.rows() != left.dim() || op.cols() != right.dim())
        throw InvalidInput("operator of shape " + shape_string(op) + " does not map dimension " +
                           std::to_string(right.dim()) + " into dimension " +
                           std::to_string(left.dim()));
}

// Tolerance for comparing two evaluation orders of the same product.
constexpr double kFormulaTolerance = 1e-12;

}  // namespace

LinearMap gram_matrix(const LinearMap& op, const FrameSystem& left, const FrameSystem& right) {
    require_maps(op, left, right);
    return left.synthesis().adjoint() * op * right.synthesis();
}

CrossGram cross_gram(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                     const TolerancePolicy& pol) {
    require_maps(op, left, right);
    require_finite(op, "cross_gram");

    LinearMap entrywise(left.count(), right.count());
    for (Index j = 0; j < right.count(); ++j) {
        const Vector image = op * right.synthesis().col(j);
        for (Index i = 0; i < left.count(); ++i)
            entrywise(i, j) = left.synthesis().col(i).dot(image);  // ⟨Uψ_j, φ_i⟩
    }
    const LinearMap factored = left.synthesis().adjoint() * op * right.synthesis();

    const double scale = std::max(1.0, std::sqrt(left.bessel_bound() * right.bessel_bound()) *
                                           operator_norm(op));
    if (operator_norm(entrywise - factored) > kFormulaTolerance * scale)
        throw TheoremViolation("cross_gram: entrywise formula and T_Phi* U T_Psi disagree");

    const double norm = operator_norm(factored);
    const double bound = std::sqrt(left.bessel_bound() * right.bessel_bound()) * operator_norm(op);
    if (norm > bound + pol.equality_tolerance * std::max(1.0, bound))
        throw TheoremViolation("cross_gram: norm bound sqrt(B_Phi B_Psi)||U|| violated");

    return {factored, Provenance{op, left, right}};
}

CrossGram adjoint(const CrossGram& g) {
    CrossGram out{g.matrix.adjoint(), std::nullopt};
    if (g.provenance)
        out.provenance = Provenance{g.provenance->op.adjoint(), g.provenance->right,
                                    g.provenance->left};
    return out;
}

std::string_view to_string(CompositionRule rule) {
    switch (rule) {
        case CompositionRule::General: return "general";
        case CompositionRule::FrameOperator: return "frame-operator";
        case CompositionRule::DualPair: return "dual-pair";
        case CompositionRule::MatrixOnly: return "matrix-only";
    }
    return "unknown";
}

Composition compose(const CrossGram& first, const CrossGram& second, const TolerancePolicy& pol,
                    ProvenanceMode mode) {
    if (first.cols() != second.rows())
        throw InvalidInput("compose: inner dimensions differ (" + shape_string(first.matrix) +
                           " * " + shape_string(second.matrix) + ")");
    Composition out;
    const LinearMap product = first.matrix * second.matrix;
    if (!first.provenance || !second.provenance) {
        if (mode == ProvenanceMode::Required)
            throw InvalidInput("compose: missing provenance");
        out.gram = {product, std::nullopt};
        out.rule = CompositionRule::MatrixOnly;
        return out;
    }

    const auto& [u1, phi, psi] = *first.provenance;
    const auto& [u2, theta, xi] = *second.provenance;
    if (psi.dim() != theta.dim())
        throw InvalidInput("compose: inner frames live in different dimensions");

    LinearMap op;
    const double frame_gap = operator_norm(psi.synthesis() - theta.synthesis());
    if (frame_gap <= pol.equality_tolerance * std::max(1.0, operator_norm(psi.synthesis()))) {
        out.rule = CompositionRule::FrameOperator;
        op = u1 * psi.frame_operator() * u2;
    } else if (is_dual_pair(psi, theta, pol).holds()) {
        out.rule = CompositionRule::DualPair;
        op = u1 * u2;
    } else {
        out.rule = CompositionRule::General;
        op = u1 * psi.synthesis() * theta.analysis() * u2;
    }

    const LinearMap recorded = gram_matrix(op, phi, xi);
    out.provenance_residual = relative_residual(recorded, product);
    if (out.provenance_residual > pol.equality_tolerance)
        throw TheoremViolation("compose: recorded provenance does not reproduce the product");
    out.gram = {product, Provenance{op, phi, xi}};
    return out;
}

LinearMap reconstruct_operator(const CrossGram& g, const FrameSystem& left_dual,
                               const FrameSystem& right_dual, const TolerancePolicy& pol) {
    if (!g.provenance)
        throw PreconditionFailed("reconstruct_operator: duality cannot be verified without provenance");
    const auto& [op, phi, psi] = *g.provenance;
    if (!is_dual_pair(phi, left_dual, pol).holds())
        throw PreconditionFailed("reconstruct_operator: left dual is not a dual of the left frame");
    if (!is_dual_pair(psi, right_dual, pol).holds())
        throw PreconditionFailed("reconstruct_operator: right dual is not a dual of the right frame");

    LinearMap rebuilt = left_dual.synthesis() * g.matrix * right_dual.analysis();
    if (relative_residual(rebuilt, op) > pol.equality_tolerance)
        throw TheoremViolation("reconstruct_operator: T_Phid G T_Psid* does not recover U");
    return rebuilt;
}

bool IdentityGramReport::all_clauses_hold() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.holds; });
}

IdentityGramReport identity_gram_diagnosis(const LinearMap& op, const FrameSystem& left,
                                           const FrameSystem& right, const TolerancePolicy& pol) {
    IdentityGramReport report;
    const LinearMap g = gram_matrix(op, left, right);
    if (g.rows() != g.cols()) {
        report.deviation = std::numeric_limits<double>::infinity();
        return report;
    }
    report.deviation = operator_norm(g - identity(g.rows()));
    report.is_identity = report.deviation <= pol.equality_tolerance;
    if (!report.is_identity) return report;

    const double tol = pol.equality_tolerance;
    auto add = [&](std::string name, double residual) {
        report.clauses.push_back({std::move(name), residual <= tol, residual});
    };
    auto add_flag = [&](std::string name, bool holds) {
        report.clauses.push_back({std::move(name), holds, holds ? 0.0 : 1.0});
    };

    add_flag("left is a Riesz basis", classify(left, pol).is_riesz_basis());
    add_flag("right is a Riesz basis", classify(right, pol).is_riesz_basis());
    if (op.rows() != op.cols() || left.dim() != right.dim()) {
        add_flag("operator is square", false);
        return report;
    }
    add("Phi = S_Phi U Psi",
        relative_residual(left.synthesis(), left.frame_operator() * op * right.synthesis()));
    add("Psi = S_Psi U* Phi",
        relative_residual(right.synthesis(), right.frame_operator() * op.adjoint() * left.synthesis()));
    const FrameSystem left_dual = canonical_dual(left, pol);
    const FrameSystem right_dual = canonical_dual(right, pol);
    add("U = T_Phi~ T_Psi~*", relative_residual(op, left_dual.synthesis() * right_dual.analysis()));
    add_flag("U is invertible", is_invertible(op, pol));
    return report;
}

}  // namespace gramkit
