#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gramkit/approx_dual.hpp"
#include "gramkit/cross_gram.hpp"
#include "gramkit/inversion.hpp"
#include "gramkit/schatten.hpp"
#include "gramkit/selftest.hpp"
#include "gramkit/stability.hpp"

namespace py = pybind11;
using namespace gramkit;

namespace {

// Frames cross the boundary as synthesis matrices (elements are columns).
FrameSystem frame(const LinearMap& t) { return FrameSystem(t); }

py::dict certificate_dict(const Certificate& c) {
    py::list checks;
    for (const auto& k : c.checks)
        checks.append(py::dict(py::arg("name") = k.name, py::arg("lhs") = k.lhs,
                               py::arg("relation") = std::string(to_string(k.relation)), py::arg("rhs") = k.rhs,
                               py::arg("holds") = k.holds));
    py::dict values;
    for (const auto& [k, v] : c.values) values[py::str(k)] = v;
    return py::dict(py::arg("name") = c.name, py::arg("verdict") = std::string(to_string(c.verdict)),
                    py::arg("holds") = c.holds(), py::arg("checks") = checks, py::arg("values") = values,
                    py::arg("conclusions") = c.conclusions);
}

py::dict stability_dict(const StabilityCertificate& c) {
    py::dict d = certificate_dict(c);
    d["lhs"] = c.lhs;
    d["rhs"] = c.rhs;
    d["margin"] = c.margin;
    if (c.series_inverse) d["series_inverse"] = *c.series_inverse;
    return d;
}

}  // namespace

PYBIND11_MODULE(_gramkit, m) {
    m.doc() = "U-cross Gram matrices, dual frames and their certificates";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<PreconditionFailed>(m, "PreconditionFailed", PyExc_ArithmeticError);
    py::register_exception<TheoremViolation>(m, "TheoremViolation", PyExc_AssertionError);

    py::class_<TolerancePolicy>(m, "TolerancePolicy")
        .def(py::init<>())
        .def_readwrite("relative_rank_cutoff", &TolerancePolicy::relative_rank_cutoff)
        .def_readwrite("equality_tolerance", &TolerancePolicy::equality_tolerance)
        .def_readwrite("condition_limit", &TolerancePolicy::condition_limit);

    m.def("pseudo_inverse", [](const LinearMap& a, const TolerancePolicy& p) { return pseudo_inverse(a, p); },
          py::arg("a"), py::arg("pol") = TolerancePolicy{});
    m.def("classify", [](const LinearMap& t, const TolerancePolicy& p) {
        const FrameClass c = classify(frame(t), p);
        return py::dict(py::arg("kind") = std::string(to_string(c.kind)), py::arg("lower") = c.lower,
                        py::arg("upper") = c.upper, py::arg("spanning") = c.spanning, py::arg("rank") = c.rank);
    }, py::arg("frame"), py::arg("pol") = TolerancePolicy{});
    m.def("canonical_dual", [](const LinearMap& t, const TolerancePolicy& p) {
        return canonical_dual(frame(t), p).synthesis();
    }, py::arg("frame"), py::arg("pol") = TolerancePolicy{});
    m.def("is_dual_pair", [](const LinearMap& f, const LinearMap& g, const TolerancePolicy& p) {
        return is_dual_pair(frame(f), frame(g), p).holds();
    }, py::arg("frame"), py::arg("dual"), py::arg("pol") = TolerancePolicy{});

    m.def("gram", [](const LinearMap& u, const LinearMap& phi, const LinearMap& psi) {
        return gram_matrix(u, frame(phi), frame(psi));
    }, py::arg("op"), py::arg("left"), py::arg("right"));
    m.def("reconstruct", [](const LinearMap& g, const LinearMap& phid, const LinearMap& psid, const TolerancePolicy& p) {
        return reconstruct_operator(CrossGram{g, std::nullopt}, frame(phid), frame(psid), p);
    }, py::arg("gram"), py::arg("left_dual"), py::arg("right_dual"), py::arg("pol") = TolerancePolicy{});

    m.def("invert_gram", [](const LinearMap& u, const LinearMap& phi, const LinearMap& psi, const TolerancePolicy& p) {
        const InversionReport r = invert_gram(u, frame(phi), frame(psi), p);
        py::dict d(py::arg("invertible") = r.invertible, py::arg("condition") = r.condition,
                   py::arg("left_riesz") = r.left_riesz, py::arg("right_riesz") = r.right_riesz);
        if (r.inverse) d["inverse"] = *r.inverse;
        if (r.inverse_residual) d["inverse_residual"] = *r.inverse_residual;
        return d;
    }, py::arg("op"), py::arg("left"), py::arg("right"), py::arg("pol") = TolerancePolicy{});
    m.def("special_dual", [](const LinearMap& u, const LinearMap& phi, const LinearMap& psi, const std::string& side,
                             const TolerancePolicy& p) {
        if (side != "phi" && side != "psi") throw InvalidInput("side must be \"phi\" or \"psi\"");
        return special_dual(u, frame(phi), frame(psi), side == "phi" ? DualSide::Phi : DualSide::Psi, p)
            .frame.synthesis();
    }, py::arg("op"), py::arg("left"), py::arg("right"), py::arg("side") = "phi", py::arg("pol") = TolerancePolicy{});
    m.def("pinv_gram", [](const LinearMap& u, const LinearMap& phi, const LinearMap& psi, const TolerancePolicy& p) {
        const PinvReport r = pinv_gram(u, frame(phi), frame(psi), p);
        py::dict reps;
        for (const auto& rep : r.representations)
            reps[py::str(rep.name)] = py::dict(py::arg("residual") = rep.residual, py::arg("holds") = rep.holds,
                                               py::arg("guaranteed") = rep.guaranteed);
        return py::dict(py::arg("pinv") = r.pinv.matrix, py::arg("psi_range_condition") = r.psi_range_condition,
                        py::arg("phi_range_condition") = r.phi_range_condition, py::arg("representations") = reps);
    }, py::arg("op"), py::arg("left"), py::arg("right"), py::arg("pol") = TolerancePolicy{});

    m.def("schatten_norm", &schatten_norm, py::arg("a"), py::arg("p"));
    m.def("schatten_check", [](const LinearMap& u, const LinearMap& phi, const LinearMap& psi, double p) {
        const SchattenReport r = schatten_gram_check(u, frame(phi), frame(psi), p);
        return py::dict(py::arg("norm_gram") = r.norm_gram, py::arg("bound") = r.bound,
                        py::arg("all_hold") = r.all_hold());
    }, py::arg("op"), py::arg("left"), py::arg("right"), py::arg("p"));

    m.def("approx_dual_defect", [](const LinearMap& phi, const LinearMap& psi) {
        return approx_dual_defect(frame(phi), frame(psi));
    }, py::arg("left"), py::arg("right"));
    m.def("corrected_dual", [](const LinearMap& phi, const LinearMap& psi, const TolerancePolicy& p) {
        return corrected_dual(frame(phi), frame(psi), p).synthesis();
    }, py::arg("left"), py::arg("right"), py::arg("pol") = TolerancePolicy{});

    m.def("neumann_inverse", [](const LinearMap& u1, const LinearMap& u2, const TolerancePolicy& p) {
        const NeumannResult r = neumann_inverse(u1, u2, p);
        return py::dict(py::arg("inverse") = r.inverse, py::arg("terms") = r.terms,
                        py::arg("truncation_bound") = r.truncation_bound, py::arg("residual") = r.residual);
    }, py::arg("u1"), py::arg("u2"), py::arg("pol") = TolerancePolicy{});
    m.def("stability_three_ops", [](const LinearMap& u1, const LinearMap& u2, const LinearMap& u3, const LinearMap& phi,
                                    const TolerancePolicy& p) {
        return stability_dict(stability_three_ops(u1, u2, u3, frame(phi), p));
    }, py::arg("u1"), py::arg("u2"), py::arg("u3"), py::arg("frame"), py::arg("pol") = TolerancePolicy{});
    m.def("riesz_perturbation", [](const LinearMap& u, const LinearMap& phi, const LinearMap& psi,
                                   const TolerancePolicy& p) {
        return stability_dict(riesz_perturbation(u, frame(phi), frame(psi), p));
    }, py::arg("op"), py::arg("left"), py::arg("right"), py::arg("pol") = TolerancePolicy{});

    m.def("selftest", [](std::uint64_t seed, Index trials) {
        const SelftestReport r = run_selftest(seed, {}, trials);
        py::dict suites;
        for (const auto& s : r.suites) suites[py::str(s.name)] = py::make_tuple(s.passed, s.failed);
        return py::dict(py::arg("all_passed") = r.all_passed(), py::arg("suites") = suites);
    }, py::arg("seed") = kDefaultSeed, py::arg("trials") = 2);
}
