#include "gramkit/inversion.hpp"

#include <algorithm>
#include <cmath>

namespace gramkit {

namespace {

void require_frames(const FrameSystem& left, const FrameSystem& right, const TolerancePolicy& pol,
                    const char* what) {
    if (!classify(left, pol).is_frame() || !classify(right, pol).is_frame())
        throw PreconditionFailed(std::string(what) + ": both systems must be frames (spanning)");
}

// ‖a − ref‖ / ‖ref‖, absolute when ref vanishes.
double relative_to(const LinearMap& a, const LinearMap& ref) {
    const double scale = operator_norm(ref);
    const double diff = operator_norm(a - ref);
    return scale > 0.0 ? diff / scale : diff;
}

// Canonical dual that degrades to the zero system instead of throwing.
FrameSystem dual_or_zero(const FrameSystem& f, const TolerancePolicy& pol) {
    if (f.count() == 0 || numeric_rank(f.synthesis(), pol) == 0)
        return FrameSystem(LinearMap::Zero(f.dim(), f.count()));
    return canonical_dual(f, pol);
}

}  // namespace

InversionReport invert_gram(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                            const TolerancePolicy& pol) {
    const LinearMap g = gram_matrix(op, left, right);
    if (g.rows() != g.cols())
        throw InvalidInput("invert_gram: G is " + shape_string(g) + ", not square");

    InversionReport r;
    const FrameClass lc = classify(left, pol);
    const FrameClass rc = classify(right, pol);
    r.left_riesz = lc.is_riesz_sequence();
    r.right_riesz = rc.is_riesz_sequence();
    r.left_spanning = lc.spanning;
    r.right_spanning = rc.spanning;
    // For Riesz sequences σ_min(T)² is the lower frame bound.
    r.left_sigma_min = r.left_riesz ? std::sqrt(lc.lower) : smallest_singular_value(left.synthesis());
    r.right_sigma_min = r.right_riesz ? std::sqrt(rc.lower) : smallest_singular_value(right.synthesis());
    const auto fu = svd(op, pol);
    r.op_invertible = is_invertible(fu, op.rows(), op.cols(), pol);

    const auto f = svd(g, pol);
    r.invertible = is_invertible(f, g.rows(), g.cols(), pol);
    if (!r.invertible) return r;

    const double sigma_min = g.rows() ? f.singular(g.rows() - 1) : 1.0;
    r.condition = g.rows() ? f.largest() / sigma_min : 1.0;
    r.inverse = pseudo_inverse(f);

    const double op_norm = fu.largest();
    // ‖G⁻¹‖ = 1/σ_min(G)
    r.left_lower_bound = sigma_min / (std::sqrt(right.bessel_bound()) * op_norm);
    r.right_lower_bound = sigma_min / (std::sqrt(left.bessel_bound()) * op_norm);
    const double slack = 1.0 - pol.equality_tolerance;
    if (!r.left_riesz || !r.right_riesz)
        throw TheoremViolation("invert_gram: G invertible but a system is not a Riesz sequence");
    if (r.left_sigma_min < r.left_lower_bound * slack ||
        r.right_sigma_min < r.right_lower_bound * slack)
        throw TheoremViolation("invert_gram: lower Riesz bound from ||G^-1|| violated");

    if (r.left_spanning && r.right_spanning) {
        if (!r.op_invertible)
            throw TheoremViolation("invert_gram: spanning systems with invertible G but U singular");
        const LinearMap formula =
            gram_matrix(pseudo_inverse(fu), canonical_dual(right, pol), canonical_dual(left, pol));
        r.inverse_residual = relative_to(formula, *r.inverse);
        if (*r.inverse_residual > pol.equality_tolerance)
            throw TheoremViolation("invert_gram: G^-1 differs from G_{U^-1, Psi~, Phi~}");
    }
    return r;
}

bool OneSidedReport::all_clauses_hold() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const Clause& c) { return c.holds; });
}

OneSidedReport one_sided_diagnosis(const LinearMap& op, const FrameSystem& left,
                                   const FrameSystem& right, const TolerancePolicy& pol) {
    const LinearMap g = gram_matrix(op, left, right);
    const Index rank = numeric_rank(g, pol);
    OneSidedReport r;
    r.right_invertible = g.rows() > 0 && rank == g.rows();
    r.left_invertible = g.cols() > 0 && rank == g.cols();

    auto flag = [&](std::string name, bool holds) {
        r.clauses.push_back({std::move(name), holds, holds ? 0.0 : 1.0});
    };
    if (r.right_invertible) {
        const FrameClass lc = classify(left, pol);
        flag("Phi is a Riesz sequence", lc.is_riesz_sequence());
        flag("U* Phi is a Riesz sequence", classify(left.mapped(op.adjoint()), pol).is_riesz_sequence());
        if (lc.spanning) {
            flag("Phi is a Riesz basis", lc.is_riesz_basis());
            flag("U Psi is a frame", classify(right.mapped(op), pol).is_frame());
        }
    }
    if (r.left_invertible) {
        const FrameClass rc = classify(right, pol);
        flag("Psi is a Riesz sequence", rc.is_riesz_sequence());
        flag("U Psi is a Riesz sequence", classify(right.mapped(op), pol).is_riesz_sequence());
        if (rc.spanning) {
            flag("Psi is a Riesz basis", rc.is_riesz_basis());
            flag("U* Phi is a frame", classify(left.mapped(op.adjoint()), pol).is_frame());
        }
    }
    return r;
}

SpecialDual special_dual(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                         DualSide side, const TolerancePolicy& pol) {
    require_frames(left, right, pol, "special_dual");
    const LinearMap g = gram_matrix(op, left, right);
    const auto pinv = pseudo_inverse_checked(g, pol);

    SpecialDual d;
    d.side = side;
    d.gram_pinv = pinv.matrix;
    d.rank_ambiguous = pinv.rank_ambiguous || svd(op, pol).rank_ambiguous();

    LinearMap synthesis;
    const FrameSystem* primal = nullptr;
    if (side == DualSide::Phi) {
        synthesis = op * right.synthesis() * pinv.matrix;
        d.projector = range_projector(op, pol);
        primal = &left;
        d.kernel_residual = kernel_distance(pseudo_inverse(op, pol) * synthesis,
                                            op.adjoint() * left.synthesis(), pol);
    } else {
        synthesis = op.adjoint() * left.synthesis() * pinv.matrix.adjoint();
        d.projector = range_projector(op.adjoint(), pol);
        primal = &right;
        d.kernel_residual = kernel_distance(pseudo_inverse(op.adjoint(), pol) * synthesis,
                                            op * right.synthesis(), pol);
    }
    d.frame = FrameSystem(std::move(synthesis));
    d.duality_residual =
        operator_norm(d.frame.synthesis() * primal->analysis() * d.projector - d.projector);

    if (!d.rank_ambiguous && d.duality_residual > pol.equality_tolerance) {
        const bool cond = range_condition(op, *primal, side, pol);
        throw TheoremViolation(std::string("special_dual: duality residual on the range exceeds "
                                           "tolerance (range condition ") +
                               (cond ? "holds" : "fails") + ")");
    }
    if (!d.rank_ambiguous && d.kernel_residual > pol.equality_tolerance)
        throw TheoremViolation("special_dual: kernel identity of the special dual fails");
    return d;
}

bool range_condition(const LinearMap& op, const FrameSystem& frame, DualSide side,
                     const TolerancePolicy& pol) {
    if (side == DualSide::Psi) {
        const LinearMap adj = op.adjoint();
        if (frame.dim() != adj.rows())
            throw InvalidInput("range_condition: frame dimension does not match U*");
        return range_equal(adj, frame.frame_operator() * adj, pol);
    }
    if (frame.dim() != op.rows())
        throw InvalidInput("range_condition: frame dimension does not match U");
    return range_equal(op, frame.frame_operator() * op, pol);
}

const Representation* PinvReport::find(const std::string& name) const {
    for (const auto& r : representations)
        if (r.name == name) return &r;
    return nullptr;
}

PinvReport pinv_gram(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                     const TolerancePolicy& pol) {
    require_frames(left, right, pol, "pinv_gram");
    PinvReport r;
    r.gram = gram_matrix(op, left, right);
    const auto pinv = pseudo_inverse_checked(r.gram, pol);
    const LinearMap& gp = pinv.matrix;
    r.closed_range_unreliable = pinv.rank_ambiguous || svd(op, pol).rank_ambiguous();
    r.op_invertible = is_invertible(op, pol);
    r.psi_range_condition = range_condition(op, right, DualSide::Psi, pol);
    r.phi_range_condition = range_condition(op, left, DualSide::Phi, pol);
    r.phi_dual = special_dual(op, left, right, DualSide::Phi, pol);
    r.psi_dual = special_dual(op, left, right, DualSide::Psi, pol);

    const FrameSystem left_dual = canonical_dual(left, pol);
    const FrameSystem right_dual = canonical_dual(right, pol);
    const LinearMap op_pinv = pseudo_inverse(op, pol);
    const double tol = pol.equality_tolerance;

    auto add = [&](std::string name, const LinearMap& candidate, bool guaranteed) {
        Representation rep{std::move(name), relative_to(candidate, gp), false, guaranteed};
        rep.holds = rep.residual <= tol;
        if (rep.guaranteed && !rep.holds && !r.closed_range_unreliable)
            throw TheoremViolation("pinv_gram: guaranteed representation " + rep.name + " fails");
        r.representations.push_back(std::move(rep));
    };

    if (r.op_invertible) {
        const LinearMap op_inv = inverse(op, pol);
        add("G_{U^-1, Psi~, Phi^(U,Psi)}", gram_matrix(op_inv, right_dual, r.phi_dual.frame), true);
        add("G_{U^-1, Psi^(U,Phi), Phi~}", gram_matrix(op_inv, r.psi_dual.frame, left_dual), true);
    }

    const FrameSystem projected_left = left.mapped(op * op_pinv);    // UU†Φ
    const FrameSystem projected_right = right.mapped(op_pinv * op);  // U†UΨ
    add("G_{U+, Psi~, Phi^(U,Psi)}", gram_matrix(op_pinv, right_dual, r.phi_dual.frame),
        r.psi_range_condition);
    add("G_{U+, Psi~, (UU+Phi)~}", gram_matrix(op_pinv, right_dual, dual_or_zero(projected_left, pol)),
        r.psi_range_condition);
    add("G_{U+, Psi^(U,Phi), Phi~}", gram_matrix(op_pinv, r.psi_dual.frame, left_dual),
        r.phi_range_condition);
    add("G_{U+, (U+U Psi)~, Phi~}", gram_matrix(op_pinv, dual_or_zero(projected_right, pol), left_dual),
        r.phi_range_condition);

    auto identity_check = [&](std::string name, double residual) {
        SubspaceIdentity s{std::move(name), residual, residual <= tol};
        if (!s.holds && !r.closed_range_unreliable)
            throw TheoremViolation("pinv_gram: subspace identity " + s.name + " fails");
        r.subspace_identities.push_back(std::move(s));
    };
    if (r.op_invertible) {
        identity_check("ker G+ = ker T_Phi", kernel_distance(gp, left.synthesis(), pol));
        identity_check("ran G+ = ran T_Psi*", range_distance(gp, right.analysis(), pol));
    }
    identity_check("ker G+ = ker U* T_Phi", kernel_distance(gp, op.adjoint() * left.synthesis(), pol));
    identity_check("ran G+ = ran T_Psi* U*", range_distance(gp, right.analysis() * op.adjoint(), pol));

    r.pinv.matrix = gp;
    if (r.psi_range_condition)
        r.pinv.provenance = Provenance{op_pinv, right_dual, r.phi_dual.frame};
    else if (r.phi_range_condition)
        r.pinv.provenance = Provenance{op_pinv, r.psi_dual.frame, left_dual};
    return r;
}

ImageFrameInverse image_frame_inverse(const LinearMap& op, const FrameSystem& frame,
                                      const TolerancePolicy& pol) {
    if (!classify(frame, pol).is_frame())
        throw PreconditionFailed("image_frame_inverse: the system must be a frame");
    if (op.cols() != frame.dim())
        throw InvalidInput("image_frame_inverse: operator " + shape_string(op) +
                           " does not act on the frame's space");
    ImageFrameInverse r;
    const LinearMap op_pinv = pseudo_inverse(op, pol);
    r.formula = op_pinv.adjoint() * inverse(frame.frame_operator(), pol) * op_pinv;
    const LinearMap image_operator = op * frame.frame_operator() * op.adjoint();
    r.exact = pseudo_inverse(image_operator, pol);
    r.range_residual = operator_norm(image_operator * r.formula - range_projector(op, pol));
    r.invariant_subspace = range_condition(op, frame, DualSide::Psi, pol);
    r.formula_valid = r.range_residual <= pol.equality_tolerance &&
                      relative_to(r.formula, r.exact) <= pol.equality_tolerance;
    if (r.invariant_subspace && !r.formula_valid)
        throw TheoremViolation("image_frame_inverse: formula fails although S_Psi R(U*) = R(U*)");

    const auto s = svd(op, pol);
    if (s.rank() > 0) {
        const FrameBounds fb = frame_bounds(frame, pol);
        const FrameBounds image = frame_bounds(frame.mapped(op), pol);
        r.lower = image.lower;
        r.upper = image.upper;
        r.lower_limit = s.smallest_nonzero() * s.smallest_nonzero() * fb.lower;
        r.upper_limit = s.largest() * s.largest() * fb.upper;
        const double slack = pol.equality_tolerance;
        if (r.lower < r.lower_limit * (1.0 - slack) || r.upper > r.upper_limit * (1.0 + slack))
            throw TheoremViolation("image_frame_inverse: frame bounds of U Psi outside [m A, M B]");
    }
    return r;
}

TildeReport pinv_via_tilde(const LinearMap& op, const FrameSystem& left, const FrameSystem& right,
                           const TolerancePolicy& pol) {
    if (!classify(right, pol).is_frame())
        throw PreconditionFailed("pinv_via_tilde: the right system must be a frame");
    if (left.count() == 0 || numeric_rank(left.synthesis(), pol) == 0)
        throw PreconditionFailed("pinv_via_tilde: the left system must be a nonzero frame sequence");

    TildeReport r;
    const LinearMap g = gram_matrix(op, left, right);
    const auto pinv = pseudo_inverse_checked(g, pol);
    r.pinv = pinv.matrix;
    const FrameSystem image_dual = dual_or_zero(right.mapped(op), pol);
    const FrameSystem left_dual = canonical_dual(left, pol);
    r.candidate = {image_dual.analysis() * left_dual.synthesis(),
                   Provenance{identity(left.dim()), image_dual, left_dual}};
    r.sufficient_condition = range_equal(left.analysis(), left.analysis() * op, pol);
    // GXG = G and ran X = ran G* always hold, so X = G+ exactly when the kernels agree.
    r.range_condition =
        kernel_distance(op.adjoint() * left.synthesis(), op.adjoint() * left_dual.synthesis(), pol) <=
        pol.equality_tolerance;
    r.residual = relative_to(r.candidate.matrix, r.pinv);
    r.candidate_is_pinv = r.residual <= pol.equality_tolerance;
    const bool unreliable = pinv.rank_ambiguous || svd(op, pol).rank_ambiguous();
    if (!unreliable && r.range_condition != r.candidate_is_pinv)
        throw TheoremViolation(std::string("pinv_via_tilde: kernel condition ") +
                               (r.range_condition ? "holds" : "fails") + " but the candidate " +
                               (r.candidate_is_pinv ? "is" : "is not") + " the pseudo-inverse");
    if (!unreliable && r.sufficient_condition && !r.candidate_is_pinv)
        throw TheoremViolation("pinv_via_tilde: R(T_Phi*) = R(T_Phi* U) but the candidate is not the pseudo-inverse");
    return r;
}

TransportedReport pinv_transported(const LinearMap& op, const FrameSystem& left,
                                   const FrameSystem& right, const TolerancePolicy& pol) {
    require_frames(left, right, pol, "pinv_transported");
    if (op.cols() != left.dim() || op.rows() != right.dim())
        throw InvalidInput("pinv_transported: U must act on the left frame's space and map into "
                           "the right frame's space");
    const auto f = svd(op, pol);
    TransportedReport r;
    r.rank = f.rank();
    const LinearMap corange = f.right.leftCols(r.rank);  // orthonormal basis of R(U*)
    const LinearMap range = f.left.leftCols(r.rank);     // orthonormal basis of R(U)
    r.restricted = range.adjoint() * op * corange;

    const FrameSystem left_coords(corange.adjoint() * left.synthesis());
    const FrameSystem right_coords(range.adjoint() * right.synthesis());
    r.gram = cross_gram(r.restricted, left_coords.mapped(r.restricted),
                        right_coords.mapped(r.restricted.adjoint()), pol);
    r.pinv = pseudo_inverse(r.gram.matrix, pol);

    if (r.rank == 0) {
        r.formula = {LinearMap::Zero(right.count(), left.count()), std::nullopt};
    } else {
        const LinearMap cube = r.restricted.adjoint() * r.restricted * r.restricted.adjoint();
        r.formula = cross_gram(inverse(cube, pol), canonical_dual(right_coords, pol),
                               canonical_dual(left_coords, pol), pol);
    }
    r.residual = relative_to(r.formula.matrix, r.pinv);
    if (r.residual > pol.equality_tolerance)
        throw TheoremViolation("pinv_transported: G_{U1,U1 Phi,U1* Psi}+ differs from the formula");
    return r;
}

RangeWitness gram_range_witness(const LinearMap& op, const FrameSystem& left,
                                const FrameSystem& right, const TolerancePolicy& pol) {
    if (!classify(right, pol).is_frame())
        throw PreconditionFailed("gram_range_witness: the right system must be a frame");
    const LinearMap g = gram_matrix(op, left, right);
    const LinearMap op_pinv = pseudo_inverse(op, pol);
    RangeWitness w;
    w.range_residual = range_distance(g, left.analysis() * op, pol);
    const LinearMap via_range =
        (op * op_pinv * left.synthesis()).adjoint() * (op * right.synthesis());
    const LinearMap via_corange =
        (op.adjoint() * left.synthesis()).adjoint() * (op_pinv * op * right.synthesis());
    w.factor_range_residual = relative_residual(via_range, g);
    w.factor_corange_residual = relative_residual(via_corange, g);
    const double tol = pol.equality_tolerance;
    w.holds = w.range_residual <= tol && w.factor_range_residual <= tol &&
              w.factor_corange_residual <= tol;
    if (!w.holds) throw TheoremViolation("gram_range_witness: range identity or factorization fails");
    return w;
}

}  // namespace gramkit
