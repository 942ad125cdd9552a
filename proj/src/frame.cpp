#include "gramkit/frame.hpp"

namespace gramkit {

FrameSystem::FrameSystem(LinearMap synthesis) : synthesis_(std::move(synthesis)) {
    require_finite(synthesis_, "FrameSystem");
    frame_operator_ = synthesis_ * synthesis_.adjoint();
    squared_singular_ = squared_singular_values_of(synthesis_);
}

FrameSystem FrameSystem::from_vectors(Index dim, const std::vector<Vector>& vectors) {
    LinearMap t(dim, static_cast<Index>(vectors.size()));
    for (Index j = 0; j < t.cols(); ++j) {
        const auto& v = vectors[static_cast<std::size_t>(j)];
        if (v.size() != dim)
            throw InvalidInput("frame vector " + std::to_string(j) + " has length " +
                               std::to_string(v.size()) + ", expected " + std::to_string(dim));
        t.col(j) = v;
    }
    return FrameSystem(std::move(t));
}

FrameSystem FrameSystem::standard(Index m) { return FrameSystem(identity(m)); }

Vector FrameSystem::synthesize(const Vector& coefficients) const {
    if (coefficients.size() != count())
        throw InvalidInput("synthesize: " + std::to_string(coefficients.size()) +
                           " coefficients for " + std::to_string(count()) + " elements");
    return synthesis_ * coefficients;
}

Vector FrameSystem::analyze(const Vector& f) const {
    if (f.size() != dim())
        throw InvalidInput("analyze: vector of length " + std::to_string(f.size()) +
                           " in a space of dimension " + std::to_string(dim()));
    return synthesis_.adjoint() * f;
}

double FrameSystem::bessel_bound() const {
    return squared_singular_.size() ? squared_singular_(0) : 0.0;
}

FrameSystem FrameSystem::mapped(const LinearMap& op) const {
    if (op.cols() != dim())
        throw InvalidInput("cannot map a frame in dimension " + std::to_string(dim()) +
                           " by an operator of shape " + shape_string(op));
    return FrameSystem(op * synthesis_);
}

std::string_view to_string(FrameKind kind) {
    switch (kind) {
        case FrameKind::BesselOnly: return "BesselOnly";
        case FrameKind::FrameSequence: return "FrameSequence";
        case FrameKind::Frame: return "Frame";
        case FrameKind::RieszSequence: return "RieszSequence";
        case FrameKind::RieszBasis: return "RieszBasis";
        case FrameKind::OrthonormalBasis: return "OrthonormalBasis";
    }
    return "unknown";
}

bool FrameClass::is_frame() const {
    return kind == FrameKind::Frame || kind == FrameKind::RieszBasis ||
           kind == FrameKind::OrthonormalBasis;
}

bool FrameClass::is_riesz_sequence() const {
    return kind == FrameKind::RieszSequence || kind == FrameKind::RieszBasis ||
           kind == FrameKind::OrthonormalBasis;
}

bool FrameClass::is_riesz_basis() const {
    return kind == FrameKind::RieszBasis || kind == FrameKind::OrthonormalBasis;
}

Vector synthesize(const FrameSystem& f, const Vector& c) { return f.synthesize(c); }
Vector analyze(const FrameSystem& f, const Vector& x) { return f.analyze(x); }
LinearMap frame_operator(const FrameSystem& f) { return f.frame_operator(); }

FrameBounds frame_bounds(const FrameSystem& f, const TolerancePolicy& pol) {
    if (f.count() == 0) throw InvalidInput("frame_bounds: empty system");
    const auto s = singular_values(f.synthesis(), pol);
    const Index r = s.rank();
    if (r == 0) throw PreconditionFailed("frame_bounds: all elements are zero");
    const double lo = s.singular(r - 1);
    const double hi = s.singular(0);
    return {lo * lo, hi * hi, r == f.dim()};
}

FrameClass classify(const FrameSystem& f, const TolerancePolicy& pol) {
    FrameClass c;
    const auto s = singular_values(f.synthesis(), pol);
    c.rank = s.rank();
    c.spanning = c.rank == f.dim();
    if (f.count() == 0 || c.rank == 0) {
        c.kind = FrameKind::BesselOnly;
        c.upper = f.bessel_bound();
        return c;
    }
    const double lo = s.singular(c.rank - 1);
    c.lower = lo * lo;
    c.upper = s.singular(0) * s.singular(0);

    const bool spans = c.rank == f.dim();
    const bool injective = c.rank == f.count();
    if (spans && injective) {
        const double dev = operator_norm(f.gram() - identity(f.count()));
        c.kind = dev <= pol.equality_tolerance ? FrameKind::OrthonormalBasis : FrameKind::RieszBasis;
    } else if (spans) {
        c.kind = FrameKind::Frame;
    } else if (injective) {
        c.kind = FrameKind::RieszSequence;
    } else {
        c.kind = FrameKind::FrameSequence;
    }
    return c;
}

FrameSystem canonical_dual(const FrameSystem& f, const TolerancePolicy& pol) {
    if (f.count() > 0 && f.synthesis().isZero(0.0))
        throw PreconditionFailed("canonical_dual: all elements are zero");
    return FrameSystem(hermitian_pseudo_inverse(f.frame_operator(), pol) * f.synthesis());
}

namespace {

void require_same_shape(const FrameSystem& f, const FrameSystem& g, const char* what) {
    if (f.dim() != g.dim() || f.count() != g.count())
        throw InvalidInput(std::string(what) + ": systems differ in shape (" +
                           shape_string(f.synthesis()) + " vs " + shape_string(g.synthesis()) + ")");
}

}  // namespace

Certificate is_dual_pair(const FrameSystem& f, const FrameSystem& g, const TolerancePolicy& pol) {
    require_same_shape(f, g, "is_dual_pair");
    Certificate cert;
    cert.name = "dual-pair";
    const double residual =
        operator_norm(f.synthesis() * g.analysis() - identity(f.dim()));
    cert.check("reconstruction residual", residual, Relation::LessEqual, pol.equality_tolerance);
    cert.verdict = cert.all_checks_hold() ? Verdict::Holds : Verdict::Inconclusive;
    if (cert.holds()) cert.conclusions.push_back("x = sum <x, g_i> f_i for every x");
    return cert;
}

Certificate is_dual_pair_on(const FrameSystem& f, const FrameSystem& g, const LinearMap& projector,
                            const TolerancePolicy& pol) {
    require_same_shape(f, g, "is_dual_pair_on");
    if (projector.rows() != f.dim() || projector.cols() != f.dim())
        throw InvalidInput("is_dual_pair_on: projector shape " + shape_string(projector));
    Certificate cert;
    cert.name = "dual-pair-on-subspace";
    const double residual = operator_norm(f.synthesis() * g.analysis() * projector - projector);
    cert.check("reconstruction residual on subspace", residual, Relation::LessEqual,
               pol.equality_tolerance);
    cert.verdict = cert.all_checks_hold() ? Verdict::Holds : Verdict::Inconclusive;
    if (cert.holds()) cert.conclusions.push_back("x = sum <x, g_i> f_i for every x in the subspace");
    return cert;
}

double element_distance(const FrameSystem& a, const FrameSystem& b) {
    require_same_shape(a, b, "element_distance");
    return (a.synthesis() - b.synthesis()).norm();
}

}  // namespace gramkit
