#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "gramkit/approx_dual.hpp"
#include "gramkit/cross_gram.hpp"
#include "gramkit/inversion.hpp"
#include "gramkit/io.hpp"
#include "gramkit/random.hpp"
#include "gramkit/schatten.hpp"
#include "gramkit/selftest.hpp"
#include "gramkit/stability.hpp"

namespace gramkit::cli {

namespace {

struct RunConfig {
    std::string output;
    std::string format = "json";
    std::uint64_t seed = kDefaultSeed;
    TolerancePolicy pol;
};

// What a command produced: a JSON document, optionally backed by a matrix so a
// ".csv" output path can receive the matrix itself.
struct Result {
    Json doc;
    int status = kOk;
    std::optional<LinearMap> matrix;
};

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json frame_class_json(const FrameSystem& f, const FrameClass& c) {
    return {{"dim", f.dim()},       {"count", f.count()},     {"kind", std::string(to_string(c.kind))},
            {"lower", num(c.lower)}, {"upper", num(c.upper)}, {"spanning", c.spanning},
            {"rank", c.rank},
            {"tight", c.spanning && c.upper - c.lower <= 1e-9 * std::max(1.0, c.upper)}};
}

Json stability_json(const StabilityCertificate& c) {
    Json j = certificate_to_json(c);
    j["lhs"] = num(c.lhs);
    j["rhs"] = num(c.rhs);
    j["margin"] = num(c.margin);
    if (c.witness_sigma_min) j["witness_sigma_min"] = num(*c.witness_sigma_min);
    if (c.series_residual) j["series_residual"] = num(*c.series_residual);
    if (c.truncation_bound) j["truncation_bound"] = num(*c.truncation_bound);
    if (c.series_inverse) j["series_inverse"] = matrix_to_json(*c.series_inverse);
    return j;
}

Json approx_json(const ApproxDualCertificate& c) {
    Json conditions = Json::array();
    for (const auto& s : c.conditions)
        conditions.push_back({{"name", s.name},
                              {"orientation", s.orientation},
                              {"lhs", num(s.lhs)},
                              {"threshold", num(s.threshold)},
                              {"holds", s.holds},
                              {"implies", s.implies}});
    return {{"defect", num(c.defect)},
            {"dual_defect", num(c.dual_defect)},
            {"conditions", std::move(conditions)},
            {"conclusion", c.conclusion},
            {"dual_conclusion", c.dual_conclusion}};
}

Json special_dual_json(const SpecialDual& d) {
    return {{"side", d.side == DualSide::Phi ? "phi" : "psi"},
            {"frame", frame_to_json(d.frame)},
            {"duality_residual", num(d.duality_residual)},
            {"kernel_residual", num(d.kernel_residual)},
            {"rank_ambiguous", d.rank_ambiguous}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// key,value lines for every scalar leaf; matrices and frames collapse to their shape.
void flatten(const Json& j, const std::string& path, std::string& out) {
    auto line = [&](const std::string& value) { out += csv_field(path) + "," + csv_field(value) + "\n"; };
    if (j.is_object()) {
        if (j.contains("rows") && j.contains("cols") && j.contains("data")) {
            line(std::to_string(j["rows"].get<long long>()) + "x" +
                 std::to_string(j["cols"].get<long long>()));
            return;
        }
        if (j.contains("dim") && j.contains("vectors")) {
            line("frame " + std::to_string(j["dim"].get<long long>()) + "x" +
                 std::to_string(j["vectors"].size()));
            return;
        }
        for (const auto& [k, v] : j.items()) flatten(v, path == "result" ? k : path + "." + k, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
    } else if (j.is_number_float()) {
        line(format_double(j.get<double>()));
    } else if (j.is_string()) {
        line(j.get<std::string>());
    } else {
        line(j.dump());
    }
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const RunConfig& cfg, const Result& r, std::ostream& out) {
    std::string text;
    if (cfg.format == "csv-summary") {
        flatten(r.doc, "result", text);
    } else if (r.matrix && ends_with(cfg.output, ".csv")) {
        text = matrix_to_csv(*r.matrix);
    } else {
        text = r.doc.dump(2) + "\n";
    }
    if (cfg.output.empty())
        out << text;
    else
        write_text(cfg.output, text);
}

std::optional<FrameSystem> maybe_frame(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return read_frame(path);
}

std::uint64_t parse_seed(const std::string& text) {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw InvalidInput("seed \"" + text + "\" is not an integer");
    return v;
}

Result matrix_result(const LinearMap& m) { return {matrix_to_json(m), kOk, m}; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"gramkit: U-cross Gram matrices, dual frames and their certificates"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string seed_text;
    std::function<Result()> action;

    auto common = [&](CLI::App* sub) {
        sub->add_option("-o,--output", cfg.output, "Write the result here instead of stdout");
        sub->add_option("--format", cfg.format, "json or csv-summary")
            ->check(CLI::IsMember({"json", "csv-summary"}));
        sub->add_option("--seed", seed_text, "Random seed (overrides GRAMKIT_SEED)");
        sub->add_option("--rank-cutoff", cfg.pol.relative_rank_cutoff, "Relative rank cutoff");
        sub->add_option("--tol", cfg.pol.equality_tolerance, "Relative equality tolerance");
        sub->add_option("--condition-limit", cfg.pol.condition_limit, "Largest accepted condition number");
    };
    std::string op, left, right, gram_file;
    auto triple = [&](CLI::App* sub) {
        sub->add_option("--op", op, "Operator U (matrix file)")->required();
        sub->add_option("--left", left, "Left frame Phi")->required();
        sub->add_option("--right", right, "Right frame Psi")->required();
    };

    // classify
    std::string frame_path;
    auto* classify_cmd = app.add_subcommand("classify", "Frame class and bounds of a system");
    classify_cmd->add_option("frame", frame_path, "Frame file")->required();
    common(classify_cmd);
    classify_cmd->callback([&] {
        action = [&] {
            const FrameSystem f = read_frame(frame_path);
            return Result{frame_class_json(f, classify(f, cfg.pol))};
        };
    });

    // gram
    auto* gram_cmd = app.add_subcommand("gram", "G_{U,Phi,Psi}");
    triple(gram_cmd);
    common(gram_cmd);
    gram_cmd->callback([&] {
        action = [&] {
            return matrix_result(cross_gram(read_matrix(op), read_frame(left), read_frame(right), cfg.pol).matrix);
        };
    });

    // adjoint
    std::string adj_op, adj_left, adj_right;
    auto* adjoint_cmd = app.add_subcommand("adjoint", "Adjoint of a cross Gram matrix");
    adjoint_cmd->add_option("gram", gram_file, "Gram matrix file (no provenance)");
    adjoint_cmd->add_option("--op", adj_op, "Operator U");
    adjoint_cmd->add_option("--left", adj_left, "Left frame Phi");
    adjoint_cmd->add_option("--right", adj_right, "Right frame Psi");
    common(adjoint_cmd);
    adjoint_cmd->callback([&] {
        action = [&]() -> Result {
            if (!gram_file.empty()) return matrix_result(read_matrix(gram_file).adjoint());
            if (adj_op.empty() || adj_left.empty() || adj_right.empty())
                throw InvalidInput("adjoint: give a Gram matrix file or --op, --left and --right");
            const FrameSystem phi = read_frame(adj_left), psi = read_frame(adj_right);
            const LinearMap u = read_matrix(adj_op);
            const CrossGram g = adjoint(cross_gram(u, phi, psi, cfg.pol));
            if (relative_residual(g.matrix, gram_matrix(u.adjoint(), psi, phi)) > cfg.pol.equality_tolerance)
                throw TheoremViolation("adjoint: G* differs from G_{U*, Psi, Phi}");
            return matrix_result(g.matrix);
        };
    });

    // compose
    std::string g1, g2, op1, left1, right1, op2, left2, right2;
    auto* compose_cmd = app.add_subcommand("compose", "Product of two cross Gram matrices");
    compose_cmd->add_option("--first", g1, "First Gram matrix file");
    compose_cmd->add_option("--second", g2, "Second Gram matrix file");
    compose_cmd->add_option("--op1", op1, "Operator of the first factor");
    compose_cmd->add_option("--left1", left1, "Left frame of the first factor");
    compose_cmd->add_option("--right1", right1, "Right frame of the first factor");
    compose_cmd->add_option("--op2", op2, "Operator of the second factor");
    compose_cmd->add_option("--left2", left2, "Left frame of the second factor");
    compose_cmd->add_option("--right2", right2, "Right frame of the second factor");
    common(compose_cmd);
    compose_cmd->callback([&] {
        action = [&] {
            auto load = [&](const std::string& file, const std::string& o, const std::string& l,
                            const std::string& r) -> CrossGram {
                if (!file.empty()) return {read_matrix(file), std::nullopt};
                if (o.empty() || l.empty() || r.empty())
                    throw InvalidInput("compose: each factor needs a matrix file or --opN, --leftN, --rightN");
                return cross_gram(read_matrix(o), read_frame(l), read_frame(r), cfg.pol);
            };
            const Composition c = compose(load(g1, op1, left1, right1), load(g2, op2, left2, right2), cfg.pol);
            Json doc{{"rule", std::string(to_string(c.rule))},
                     {"provenance_residual", num(c.provenance_residual)},
                     {"matrix", matrix_to_json(c.gram.matrix)}};
            if (c.gram.provenance) doc["operator"] = matrix_to_json(c.gram.provenance->op);
            return Result{doc, kOk, c.gram.matrix};
        };
    });

    // reconstruct
    std::string left_dual, right_dual;
    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Recover U from G and duals");
    triple(reconstruct_cmd);
    reconstruct_cmd->add_option("--left-dual", left_dual, "Dual of Phi (canonical if omitted)");
    reconstruct_cmd->add_option("--right-dual", right_dual, "Dual of Psi (canonical if omitted)");
    common(reconstruct_cmd);
    reconstruct_cmd->callback([&] {
        action = [&] {
            const FrameSystem phi = read_frame(left), psi = read_frame(right);
            const CrossGram g = cross_gram(read_matrix(op), phi, psi, cfg.pol);
            const FrameSystem phid = left_dual.empty() ? canonical_dual(phi, cfg.pol) : read_frame(left_dual);
            const FrameSystem psid = right_dual.empty() ? canonical_dual(psi, cfg.pol) : read_frame(right_dual);
            return matrix_result(reconstruct_operator(g, phid, psid, cfg.pol));
        };
    });

    // dual
    std::string other;
    auto* dual_cmd = app.add_subcommand("dual", "Canonical dual, or a dual-pair check with --check");
    dual_cmd->add_option("frame", frame_path, "Frame file")->required();
    dual_cmd->add_option("--check", other, "Candidate dual to verify instead");
    common(dual_cmd);
    dual_cmd->callback([&] {
        action = [&]() -> Result {
            const FrameSystem f = read_frame(frame_path);
            if (!other.empty()) {
                const Certificate c = is_dual_pair(f, read_frame(other), cfg.pol);
                return {certificate_to_json(c), c.holds() ? kOk : kInconclusive};
            }
            return {frame_to_json(canonical_dual(f, cfg.pol))};
        };
    });

    // special-dual
    std::string side = "phi";
    auto* special_cmd = app.add_subcommand("special-dual", "Special dual {U T_Psi G+ delta_i} or its psi analogue");
    triple(special_cmd);
    special_cmd->add_option("--side", side, "phi or psi")->check(CLI::IsMember({"phi", "psi"}));
    common(special_cmd);
    special_cmd->callback([&] {
        action = [&] {
            const SpecialDual d = special_dual(read_matrix(op), read_frame(left), read_frame(right),
                                               side == "phi" ? DualSide::Phi : DualSide::Psi, cfg.pol);
            return Result{special_dual_json(d)};
        };
    });

    // pinv
    std::string report_path, dual_a, dual_b;
    auto* pinv_cmd = app.add_subcommand("pinv", "Pseudo-inverse of G and its representations");
    triple(pinv_cmd);
    pinv_cmd->add_option("--report", report_path, "Also write the report here");
    pinv_cmd->add_option("--dual-a", dual_a, "A dual of Phi, compared with --dual-b");
    pinv_cmd->add_option("--dual-b", dual_b, "A second dual of Phi");
    common(pinv_cmd);
    pinv_cmd->callback([&] {
        action = [&] {
            const LinearMap u = read_matrix(op);
            const FrameSystem phi = read_frame(left), psi = read_frame(right);
            const PinvReport r = pinv_gram(u, phi, psi, cfg.pol);
            const LinearMap u_pinv = pseudo_inverse(u, cfg.pol);
            Json reps = Json::array();
            for (const auto& rep : r.representations)
                reps.push_back({{"name", rep.name},
                                {"residual", num(rep.residual)},
                                {"holds", rep.holds},
                                {"guaranteed", rep.guaranteed}});
            Json ids = Json::array();
            for (const auto& s : r.subspace_identities)
                ids.push_back({{"name", s.name}, {"residual", num(s.residual)}, {"holds", s.holds}});
            Json doc{{"pinv", matrix_to_json(r.pinv.matrix)},
                     {"op_pinv", matrix_to_json(u_pinv)},
                     {"op_invertible", r.op_invertible},
                     {"closed_range_unreliable", r.closed_range_unreliable},
                     {"psi_range_condition", r.psi_range_condition},
                     {"phi_range_condition", r.phi_range_condition},
                     {"phi_dual", special_dual_json(r.phi_dual)},
                     {"psi_dual", special_dual_json(r.psi_dual)},
                     {"representations", std::move(reps)},
                     {"subspace_identities", std::move(ids)}};
            if (!dual_a.empty() || !dual_b.empty()) {
                if (dual_a.empty() || dual_b.empty())
                    throw InvalidInput("pinv: --dual-a and --dual-b go together");
                const FrameSystem a = read_frame(dual_a), b = read_frame(dual_b);
                const FrameSystem psi_dual = canonical_dual(psi, cfg.pol);
                const LinearMap ta = u_pinv * a.synthesis(), tb = u_pinv * b.synthesis();
                doc["dual_comparison"] = {
                    {"a_is_dual", is_dual_pair(phi, a, cfg.pol).holds()},
                    {"b_is_dual", is_dual_pair(phi, b, cfg.pol).holds()},
                    {"duals_differ", (a.synthesis() - b.synthesis()).cwiseAbs().maxCoeff()},
                    {"op_pinv_T_a_vs_T_b", (ta - tb).cwiseAbs().maxCoeff()},
                    {"gram_a_vs_gram_b", (gram_matrix(u_pinv, psi_dual, a) - gram_matrix(u_pinv, psi_dual, b))
                                             .cwiseAbs()
                                             .maxCoeff()}};
            }
            if (!report_path.empty()) write_text(report_path, doc.dump(2) + "\n");
            return Result{doc, kOk, r.pinv.matrix};
        };
    });

    // pinv-tilde
    auto* tilde_cmd = app.add_subcommand("pinv-tilde", "Candidate T_{(U Psi)~}* T_{Phi~} for G+");
    triple(tilde_cmd);
    common(tilde_cmd);
    tilde_cmd->callback([&] {
        action = [&] {
            const TildeReport r = pinv_via_tilde(read_matrix(op), read_frame(left), read_frame(right), cfg.pol);
            return Result{{{"candidate", matrix_to_json(r.candidate.matrix)},
                           {"pinv", matrix_to_json(r.pinv)},
                           {"sufficient_condition", r.sufficient_condition},
                           {"range_condition", r.range_condition},
                           {"residual", num(r.residual)},
                           {"candidate_is_pinv", r.candidate_is_pinv}}};
        };
    });

    // pinv-transported
    auto* transported_cmd = app.add_subcommand("pinv-transported", "G_{U1, U1 Phi, U1* Psi}+ on (ker U)-perp");
    triple(transported_cmd);
    common(transported_cmd);
    transported_cmd->callback([&] {
        action = [&] {
            const TransportedReport r =
                pinv_transported(read_matrix(op), read_frame(left), read_frame(right), cfg.pol);
            return Result{{{"rank", r.rank},
                           {"restricted", matrix_to_json(r.restricted)},
                           {"gram", matrix_to_json(r.gram.matrix)},
                           {"pinv", matrix_to_json(r.pinv)},
                           {"formula", matrix_to_json(r.formula.matrix)},
                           {"residual", num(r.residual)}}};
        };
    });

    // schatten
    double p = 2.0;
    auto* schatten_cmd = app.add_subcommand("schatten", "Schatten-norm inequalities for G");
    triple(schatten_cmd);
    schatten_cmd->add_option("--p", p, "Exponent p > 0");
    common(schatten_cmd);
    schatten_cmd->callback([&] {
        action = [&] {
            const SchattenReport r =
                schatten_gram_check(read_matrix(op), read_frame(left), read_frame(right), p, cfg.pol);
            Json checks = Json::array();
            for (const auto& c : r.checks)
                checks.push_back({{"name", c.name}, {"lhs", num(c.lhs)}, {"rhs", num(c.rhs)}, {"holds", c.holds}});
            Json doc{{"p", r.p},
                     {"norm_op", num(r.norm_op)},
                     {"norm_gram", num(r.norm_gram)},
                     {"bound", num(r.bound)},
                     {"diagonal_sum", num(r.diagonal_sum)},
                     {"mixed_p2", num(r.mixed_p2)},
                     {"frobenius_squared", num(r.frobenius_squared)},
                     {"entrywise_squared", num(r.entrywise_squared)},
                     {"checks", std::move(checks)}};
            return Result{doc, r.all_hold() ? kOk : kViolation};
        };
    });

    // approx-dual
    std::string approx_op, approx_v;
    auto* approx_cmd = app.add_subcommand("approx-dual", "Approximate-duality certificate");
    approx_cmd->add_option("--left", left, "Frame Phi")->required();
    approx_cmd->add_option("--right", right, "Frame Psi")->required();
    approx_cmd->add_option("--left-dual", left_dual, "Dual of Phi (canonical if omitted)");
    approx_cmd->add_option("--right-dual", right_dual, "Dual of Psi (canonical if omitted)");
    approx_cmd->add_option("--op", approx_op, "U for condition (4)");
    approx_cmd->add_option("--right-inverse", approx_v, "V with UV = I for condition (4)");
    common(approx_cmd);
    approx_cmd->callback([&] {
        action = [&] {
            const FrameSystem phi = read_frame(left), psi = read_frame(right);
            const auto phid = maybe_frame(left_dual);
            ApproxDualCertificate c = sufficient_conditions(phi, psi, phid, maybe_frame(right_dual), cfg.pol);
            if (!approx_op.empty() || !approx_v.empty()) {
                if (approx_op.empty() || approx_v.empty())
                    throw InvalidInput("approx-dual: --op and --right-inverse go together");
                const ApproxDualCertificate four =
                    right_inverse_condition(read_matrix(approx_op), read_matrix(approx_v), phi, psi, phid, cfg.pol);
                c.conditions.push_back(four.conditions.front());
                c.conclusion = c.conclusion || four.conclusion;
            }
            Json doc = approx_json(c);
            doc["necessary_bound"] = certificate_to_json(necessary_bound(phi, psi, cfg.pol));
            return Result{doc, c.conclusion ? kOk : kInconclusive};
        };
    });

    // corrected-dual
    auto* corrected_cmd = app.add_subcommand("corrected-dual", "(T_Psi T_Phi*)^-1 Psi, an exact dual of Phi");
    corrected_cmd->add_option("--left", left, "Frame Phi")->required();
    corrected_cmd->add_option("--right", right, "Approximate dual Psi")->required();
    common(corrected_cmd);
    corrected_cmd->callback([&] {
        action = [&] { return Result{frame_to_json(corrected_dual(read_frame(left), read_frame(right), cfg.pol))}; };
    });

    // stability
    std::string theorem, u1, u2, u3, v, xi_path, theta_path, lambda_text = "0,0,0,0";
    double mu = 0.0;
    Index samples = 10000;
    auto* stability_cmd = app.add_subcommand("stability", "Perturbation certificate for invertibility of G");
    stability_cmd->add_option("--theorem", theorem, "three-ops|factor|c1|c2|c3|riesz|joint")
        ->required()
        ->check(CLI::IsMember({"three-ops", "factor", "c1", "c2", "c3", "riesz", "joint"}));
    stability_cmd->add_option("--u1", u1, "U1, the unperturbed operator");
    stability_cmd->add_option("--u2", u2, "U2: left factor for three-ops, near-identity factor for factor");
    stability_cmd->add_option("--u3", u3, "U3: right factor for three-ops");
    stability_cmd->add_option("--frame", frame_path, "Phi for three-ops and factor");
    stability_cmd->add_option("--op", op, "Operator U");
    stability_cmd->add_option("--v", v, "Perturbed operator V");
    stability_cmd->add_option("--left", left, "Left frame Phi");
    stability_cmd->add_option("--right", right, "Right frame Psi");
    stability_cmd->add_option("--perturbed-left", xi_path, "Xi, replacing Phi");
    stability_cmd->add_option("--perturbed-right", theta_path, "Theta, replacing Psi");
    stability_cmd->add_option("--lambda", lambda_text, "l1,l2,l3,l4 for joint");
    stability_cmd->add_option("--mu", mu, "mu for joint");
    stability_cmd->add_option("--samples", samples, "Random coefficient vectors for joint");
    common(stability_cmd);
    stability_cmd->callback([&] {
        action = [&] {
            auto need = [&](const std::string& value, const char* flag) {
                if (value.empty())
                    throw InvalidInput("stability --theorem " + theorem + " needs " + flag);
                return value;
            };
            StabilityCertificate c;
            if (theorem == "three-ops") {
                c = stability_three_ops(read_matrix(need(u1, "--u1")), read_matrix(need(u2, "--u2")),
                                        read_matrix(need(u3, "--u3")), read_frame(need(frame_path, "--frame")),
                                        cfg.pol);
            } else if (theorem == "factor") {
                c = stability_factor(read_matrix(need(u1, "--u1")), read_matrix(need(u2, "--u2")),
                                     read_frame(need(frame_path, "--frame")), cfg.pol);
            } else if (theorem == "riesz") {
                c = riesz_perturbation(read_matrix(need(op, "--op")), read_frame(need(left, "--left")),
                                       read_frame(need(right, "--right")), cfg.pol);
            } else if (theorem == "joint") {
                StabilityBudget b;
                char sep = 0;
                std::istringstream in(lambda_text);
                if (!(in >> b.lambda1 >> sep >> b.lambda2 >> sep >> b.lambda3 >> sep >> b.lambda4))
                    throw InvalidInput("--lambda expects four comma-separated numbers");
                b.mu = mu;
                JointOptions options;
                options.seed = cfg.seed;
                options.samples = samples;
                c = joint_stability(read_matrix(need(op, "--op")), read_matrix(need(v, "--v")),
                                    read_frame(need(left, "--left")), read_frame(need(right, "--right")),
                                    read_frame(need(xi_path, "--perturbed-left")),
                                    read_frame(need(theta_path, "--perturbed-right")), b, options, cfg.pol);
            } else {
                const LinearMap u = read_matrix(need(op, "--op"));
                const FrameSystem phi = read_frame(need(left, "--left"));
                const FrameSystem psi = read_frame(need(right, "--right"));
                std::vector<StabilityCertificate> certs;
                if (theorem == "c1")
                    certs = perturb_certificates(u, read_matrix(need(v, "--v")), phi, psi, std::nullopt,
                                                 std::nullopt, cfg.pol);
                else if (theorem == "c2")
                    certs = perturb_certificates(u, std::nullopt, phi, psi, std::nullopt,
                                                 read_frame(need(theta_path, "--perturbed-right")), cfg.pol);
                else
                    certs = perturb_certificates(u, std::nullopt, phi, psi,
                                                 read_frame(need(xi_path, "--perturbed-left")), std::nullopt,
                                                 cfg.pol);
                c = certs.front();
            }
            return Result{stability_json(c), c.holds() ? kOk : kInconclusive};
        };
    });

    // neumann
    Index terms = -1;
    auto* neumann_cmd = app.add_subcommand("neumann", "Neumann-series inverse of U2 around U1");
    neumann_cmd->add_option("--u1", u1, "U1, invertible")->required();
    neumann_cmd->add_option("--u2", u2, "U2, inverted as a series around U1")->required();
    neumann_cmd->add_option("--terms", terms, "Fixed number of terms instead of the stopping rule");
    common(neumann_cmd);
    neumann_cmd->callback([&] {
        action = [&] {
            const LinearMap a = read_matrix(u1), b = read_matrix(u2);
            if (terms >= 0) {
                const LinearMap s = neumann_partial_sum(a, b, terms, cfg.pol);
                return Result{{{"inverse", matrix_to_json(s)}, {"terms", terms}}, kOk, s};
            }
            const NeumannResult r = neumann_inverse(a, b, cfg.pol);
            return Result{{{"inverse", matrix_to_json(r.inverse)},
                           {"terms", r.terms},
                           {"ratio", num(r.ratio)},
                           {"truncation_bound", num(r.truncation_bound)},
                           {"residual", num(r.residual)}},
                          kOk,
                          r.inverse};
        };
    });

    // converge
    std::string direction;
    Index steps = 100;
    bool perturb_frames = false;
    auto* converge_cmd = app.add_subcommand("converge", "Deviation table for U_n = U + N/n");
    triple(converge_cmd);
    converge_cmd->add_option("--direction", direction, "N (random unit-norm if omitted)");
    converge_cmd->add_option("--steps", steps, "Sequence length");
    converge_cmd->add_flag("--perturb-frames", perturb_frames, "Also move every frame element by O(1/n)");
    common(converge_cmd);
    converge_cmd->callback([&] {
        action = [&] {
            if (steps < 1) throw InvalidInput("converge: --steps must be positive");
            const ConvergenceStep limit{read_matrix(op), read_frame(left), read_frame(right)};
            Rng rng(cfg.seed);
            const LinearMap n_dir = direction.empty() ? random_direction(rng, limit.op.rows(), limit.op.cols())
                                                      : read_matrix(direction);
            const LinearMap phi_dir = random_direction(rng, limit.phi.dim(), limit.phi.count());
            const LinearMap psi_dir = random_direction(rng, limit.psi.dim(), limit.psi.count());
            std::vector<ConvergenceStep> seq;
            for (Index k = 1; k <= steps; ++k) {
                const double t = 1.0 / static_cast<double>(k);
                seq.push_back({limit.op + t * n_dir,
                               perturb_frames ? FrameSystem(limit.phi.synthesis() + t * phi_dir) : limit.phi,
                               perturb_frames ? FrameSystem(limit.psi.synthesis() + t * psi_dir) : limit.psi});
            }
            const ConvergenceTable table = convergence_harness(seq, limit, cfg.pol);
            Json rows = Json::array();
            for (const auto& r : table.rows)
                rows.push_back({{"n", r.step}, {"deviation", num(r.deviation)}, {"bound", num(r.bound)}});
            return Result{{{"rows", std::move(rows)}, {"decays_after_5", table.decays_after(5, 1e-12)}}};
        };
    });

    // selftest
    Index trials = 8;
    auto* selftest_cmd = app.add_subcommand("selftest", "Invariant suite at n = 2, 4, 8");
    selftest_cmd->add_option("--trials", trials, "Trials per suite and size");
    common(selftest_cmd);
    selftest_cmd->callback([&] {
        action = [&] {
            const SelftestReport r = run_selftest(cfg.seed, cfg.pol, trials);
            Json suites = Json::array();
            for (const auto& s : r.suites) {
                Json j{{"name", s.name}, {"passed", s.passed}, {"failed", s.failed}};
                if (!s.first_failure.empty()) j["first_failure"] = s.first_failure;
                suites.push_back(std::move(j));
            }
            return Result{{{"seed", r.seed}, {"suites", std::move(suites)}, {"all_passed", r.all_passed()}},
                          r.all_passed() ? kOk : kViolation};
        };
    });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (const char* env = std::getenv("GRAMKIT_SEED"); env && *env) cfg.seed = parse_seed(env);
        if (!seed_text.empty()) cfg.seed = parse_seed(seed_text);
        cfg.pol.validate();
        const Result r = action();
        emit(cfg, r, out);
        return r.status;
    } catch (const TheoremViolation& e) {
        err << "theorem violation: " << e.what() << "\n";
        return kViolation;
    } catch (const PreconditionFailed& e) {
        err << "precondition failed: " << e.what() << "\n";
        return kInconclusive;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const Json::exception& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    }
}

}  // namespace gramkit::cli
