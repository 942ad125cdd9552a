#include "gramkit/schatten.hpp"

#include <algorithm>
#include <cmath>

#include "gramkit/cross_gram.hpp"

namespace gramkit {

namespace {

void require_positive_exponent(double p, const char* what) {
    if (!(p > 0.0) || !std::isfinite(p))
        throw InvalidInput(std::string(what) + ": exponent must be positive and finite");
}

double lp_sum(const RealVector& v, double p) {
    double s = 0.0;
    for (Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), p);
    return std::pow(s, 1.0 / p);
}

void push_check(std::vector<Check>& checks, std::string name, double lhs, double rhs, double slack) {
    checks.push_back({std::move(name), lhs, rhs, Relation::LessEqual, lhs <= rhs + slack});
}

}  // namespace

double schatten_norm(const LinearMap& a, double p) {
    require_positive_exponent(p, "schatten_norm");
    if (a.size() == 0) return 0.0;
    require_finite(a, "schatten_norm");
    Eigen::JacobiSVD<LinearMap> solver(a);
    return lp_sum(solver.singularValues(), p);
}

double mixed_norm(const LinearMap& m, double p, double q) {
    require_positive_exponent(p, "mixed_norm");
    require_positive_exponent(q, "mixed_norm");
    RealVector rows(m.rows());
    for (Index k = 0; k < m.rows(); ++k) {
        RealVector row(m.cols());
        for (Index l = 0; l < m.cols(); ++l) row(l) = std::abs(m(k, l));
        rows(k) = lp_sum(row, q);
    }
    return lp_sum(rows, p);
}

double onb_pair_functional(const LinearMap& op, const FrameSystem& domain_basis,
                           const FrameSystem& codomain_basis, double p, const TolerancePolicy& pol) {
    require_positive_exponent(p, "onb_pair_functional");
    if (domain_basis.dim() != op.cols() || codomain_basis.dim() != op.rows())
        throw InvalidInput("onb_pair_functional: bases do not match operator shape " +
                           shape_string(op));
    if (classify(domain_basis, pol).kind != FrameKind::OrthonormalBasis ||
        classify(codomain_basis, pol).kind != FrameKind::OrthonormalBasis)
        throw InvalidInput("onb_pair_functional: both systems must be orthonormal bases");
    const Index n = std::min(domain_basis.count(), codomain_basis.count());
    RealVector terms(n);
    for (Index i = 0; i < n; ++i)
        terms(i) = std::abs(codomain_basis.element(i).dot(op * domain_basis.element(i)));
    return lp_sum(terms, p);
}

std::pair<FrameSystem, FrameSystem> singular_bases(const LinearMap& op) {
    const auto f = svd(op);
    return {FrameSystem(f.right), FrameSystem(f.left)};
}

bool SchattenReport::all_hold() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.holds; });
}

SchattenReport schatten_gram_check(const LinearMap& op, const FrameSystem& left,
                                   const FrameSystem& right, double p, const TolerancePolicy& pol) {
    require_positive_exponent(p, "schatten_gram_check");
    const LinearMap g = cross_gram(op, left, right, pol).matrix;
    const double tol = pol.equality_tolerance;

    SchattenReport r;
    r.p = p;
    r.norm_op = schatten_norm(op, p);
    r.norm_gram = schatten_norm(g, p);
    r.bound = std::sqrt(left.bessel_bound() * right.bessel_bound()) * r.norm_op;
    const Index diag = std::min(g.rows(), g.cols());
    RealVector d(diag);
    for (Index i = 0; i < diag; ++i) d(i) = std::abs(g(i, i));
    r.diagonal_sum = lp_sum(d, p);
    r.mixed_p2 = mixed_norm(g, p, 2.0);
    const double hs = schatten_norm(g, 2.0);
    r.frobenius_squared = hs * hs;
    r.entrywise_squared = 0.0;
    for (Index j = 0; j < g.cols(); ++j)
        for (Index i = 0; i < g.rows(); ++i) r.entrywise_squared += std::norm(g(i, j));

    push_check(r.checks, "||G||_p <= sqrt(B_Phi B_Psi) ||U||_p", r.norm_gram, r.bound,
               tol * std::max(1.0, r.bound));
    const double hs_gap = std::abs(r.frobenius_squared - r.entrywise_squared);
    r.checks.push_back({"||G||_2^2 == sum |<U psi_i, phi_l>|^2", hs_gap,
                        tol * std::max(1.0, r.entrywise_squared), Relation::LessEqual,
                        hs_gap <= tol * std::max(1.0, r.entrywise_squared)});
    if (p >= 1.0) {
        push_check(r.checks, p == 1.0 ? "trace-class diagonal sum <= ||G||_1" : "diagonal p-sum <= ||G||_p",
                   r.diagonal_sum, r.norm_gram, tol * std::max(1.0, r.norm_gram));
        if (p >= 2.0)
            push_check(r.checks, "||G||_{p,2} <= ||G||_p", r.mixed_p2, r.norm_gram,
                       tol * std::max(1.0, r.norm_gram));
        if (p <= 2.0)
            push_check(r.checks, "||G||_p <= ||G||_{p,2}", r.norm_gram, r.mixed_p2,
                       tol * std::max(1.0, r.mixed_p2));
    }
    const FrameClass lc = classify(left, pol);
    const FrameClass rc = classify(right, pol);
    if (lc.is_frame() && rc.is_frame()) {
        // U = T_Φ̃ G T_Ψ̃* and ‖T_Φ̃‖ = A_Φ^{-1/2}.
        const double reverse = r.norm_gram / std::sqrt(lc.lower * rc.lower);
        push_check(r.checks, "||U||_p <= ||G||_p / sqrt(A_Phi A_Psi)", r.norm_op, reverse,
                   tol * std::max(1.0, reverse));
    }
    return r;
}

DecayTable truncation_decay(const OperatorGenerator& op, const FrameGenerator& left,
                            const FrameGenerator& right, const std::vector<Index>& sizes,
                            const TolerancePolicy& pol) {
    DecayTable table;
    for (Index n : sizes) {
        const LinearMap g = gram_matrix(op(n), left(n), right(n));
        double tail = 0.0;
        for (Index i = g.cols() / 2; i < g.cols(); ++i) tail = std::max(tail, g.col(i).squaredNorm());
        table.rows.push_back({n, tail});
    }
    const double tol = pol.equality_tolerance;
    table.monotone = true;
    for (std::size_t k = 1; k < table.rows.size(); ++k)
        if (table.rows[k].tail > table.rows[k - 1].tail + tol * std::max(1.0, table.rows[k - 1].tail))
            table.monotone = false;
    if (!table.rows.empty()) {
        const double first = table.rows.front().tail;
        const double last = table.rows.back().tail;
        table.decays = table.monotone && (last <= tol || last < first * (1.0 - 1e-9));
    }
    return table;
}

}  // namespace gramkit
