// Command-line front end: every check group in the library behind one binary.
// Exit codes: 0 = all checks pass, 1 = at least one check failed,
// 2 = usage or input error.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dilat/audit.hpp"
#include "dilat/calculus.hpp"
#include "dilat/curve_calculus.hpp"
#include "dilat/lookdown.hpp"
#include "dilat/report_io.hpp"
#include "dilat/suite.hpp"
#include "dilat/tangent.hpp"

namespace {

using namespace dilat;

Point parse_point(const std::string& s) {
    Point p;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) p.push_back(std::stod(cell));
    if (p.empty()) throw std::invalid_argument("empty point literal");
    return p;
}

std::string resolve_out(const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    if (const char* dir = std::getenv("DILAT_OUT_DIR"))
        return std::string(dir) + "/" + path;
    return path;
}

struct CommonOpts {
    std::string structure = "euclidean:2";
    std::string out;
    std::string csv;
    int samples = 20;
    double radius = 1.0;
    std::uint64_t seed = 7;
    double eps0 = 0.5;
    double ratio = 0.5;
    int steps = 20;
    double tol = 1e-6;
    int jobs = 1;

    EpsSchedule schedule() const { return {eps0, ratio, steps}; }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_structure = true) {
    cmd->set_config("--config", "", "read defaults from a key=value file");
    if (with_structure)
        cmd->add_option("--structure", o.structure,
                        "structure name (euclidean:<dim>, rotating:<theta>, heisenberg, ...)");
    cmd->add_option("--out", o.out, "write the JSON report here");
    cmd->add_option("--csv", o.csv, "write the CSV trace here");
    cmd->add_option("--samples", o.samples, "sample count");
    cmd->add_option("--radius", o.radius, "sampling radius");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--eps0", o.eps0, "schedule start scale");
    cmd->add_option("--ratio", o.ratio, "schedule ratio in (0,1)");
    cmd->add_option("--steps", o.steps, "schedule length");
    cmd->add_option("--tol", o.tol, "limit tolerance");
    cmd->add_option("--jobs", o.jobs, "worker pool size for independent checks");
}

int finish(RunReport& rr, const CommonOpts& o, double wall_ms) {
    rr.wall_ms = wall_ms;
    const std::string text = to_json(rr).dump(2) + "\n";
    if (!o.out.empty())
        write_text_file(resolve_out(o.out), text);
    else
        std::cout << text;
    return rr.all_pass() ? 0 : 1;
}

int run_audit(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    auto S = make_structure(o.structure);
    AuditConfig cfg;
    cfg.sample_count = o.samples;
    cfg.radius = o.radius;
    cfg.seed = o.seed;
    cfg.schedule = {o.eps0, o.ratio, o.steps};
    cfg.limit_tol = o.tol;
    cfg.jobs = o.jobs;
    RunReport rr;
    rr.command = "audit";
    rr.config["structure"] = o.structure;
    rr.sections.push_back(audit_axioms(*S, cfg));
    return finish(rr, o,
                  std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count());
}

int run_tangent(const CommonOpts& o) {
    const auto t0 = std::chrono::steady_clock::now();
    auto S = make_structure(o.structure);
    const std::size_t d = S->dim();
    std::vector<std::string> header;
    for (std::size_t k = 0; k < d; ++k) header.push_back("x" + std::to_string(k));
    for (std::size_t k = 0; k < d; ++k) header.push_back("u" + std::to_string(k));
    for (std::size_t k = 0; k < d; ++k) header.push_back("v" + std::to_string(k));
    header.push_back("eps");
    for (std::size_t k = 0; k < d; ++k) header.push_back("value" + std::to_string(k));
    header.insert(header.end(), {"residual", "status"});
    CsvTable csv(header);

    RunReport rr;
    rr.command = "tangent";
    rr.config["structure"] = o.structure;
    Report rep;
    rep.title = "tangent-sum:" + o.structure;
    SeededRng rng(o.seed);
    const Point zero(d, 0.0);
    for (int i = 0; i < o.samples; ++i) {
        const Point x = rng.point_in_box(zero, o.radius);
        const Point u = rng.point_in_box(x, o.radius);
        const Point v = rng.point_in_box(x, o.radius);
        auto est = tangent_sum(*S, x, u, v, o.schedule(), LimitOptions{o.tol});
        const Point* prev = nullptr;
        for (const auto& [eps, val] : est.samples) {
            std::vector<std::string> row;
            for (double c : x) row.push_back(format_sig17(c));
            for (double c : u) row.push_back(format_sig17(c));
            for (double c : v) row.push_back(format_sig17(c));
            row.push_back(format_sig17(eps));
            for (double c : val) row.push_back(format_sig17(c));
            row.push_back(format_sig17(prev ? S->distance(*prev, val) : 0.0));
            row.push_back(to_string(est.status));
            csv.add_row(row);
            prev = &val;
        }
        rep.merge_worst("tangent-sum.converged",
                        est.converged() ? CheckStatus::pass : CheckStatus::fail, est.residual,
                        "sample " + std::to_string(i) + " status " + to_string(est.status));
    }
    rr.sections.push_back(rep);
    if (!o.csv.empty()) csv.write(resolve_out(o.csv));
    return finish(rr, o,
                  std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count());
}

int run_curve(const CommonOpts& o, const std::string& curve_name, const std::string& op,
              double t_param, double mesh, int quad_points) {
    const auto t0 = std::chrono::steady_clock::now();
    auto S = make_structure(o.structure);
    Curve c = make_curve(curve_name, S->dim());

    RunReport rr;
    rr.command = "curve";
    rr.config["structure"] = o.structure;
    rr.config["curve"] = curve_name;
    rr.config["op"] = op;
    Report rep;
    rep.title = "curve:" + op + ":" + curve_name;
    CsvTable csv({"col0", "col1"});

    if (op == "var") {
        auto res = variation(c, *S, o.tol > 0 ? std::max(o.tol, 1e-9) : 1e-5);
        rep.config["variation"] = format_sig17(res.value);
        rep.add("variation.converged", res.converged ? CheckStatus::pass : CheckStatus::fail,
                0.0, res.converged ? "" : "refinement hit max depth; value is a lower bound");
    } else if (op == "lip") {
        const double v = upper_dilatation(c, t_param, *S);
        rep.config["upper_dilatation"] = format_sig17(v);
        rep.add("lip.finite", std::isfinite(v) ? CheckStatus::pass : CheckStatus::fail, 0.0,
                std::isfinite(v) ? "" : "unbounded dilatation");
    } else if (op == "md") {
        auto est = metric_derivative(c, t_param, *S, o.schedule());
        csv = CsvTable({"eps", "ratio"});
        for (auto& [e, v] : est.samples) csv.add_row_values({e, v});
        rep.config["metric_derivative"] = format_sig17(est.value);
        rep.add("md.converged", est.converged() ? CheckStatus::pass : CheckStatus::fail,
                est.residual, to_string(est.status));
    } else if (op == "length") {
        auto res = length_via_dilatation(c, *S, quad_points);
        rep.config["length"] = format_sig17(res.value);
        rep.add("length.computed", CheckStatus::pass, 0.0,
                res.variation_fallback ? "upper dilatation unbounded at t=" +
                                             format_sig17(res.lip_failure_t) +
                                             "; returned Var(c)"
                                       : "");
    } else if (op == "hlen") {
        const double v = hausdorff_length_estimate(c, *S, mesh);
        rep.config["hausdorff_length"] = format_sig17(v);
        rep.add("hlen.computed", CheckStatus::pass, 0.0, "");
    } else if (op == "reparam") {
        Curve rc = reparametrize_arclength(c, *S);
        csv = CsvTable({"s", "t_speed_check"});
        const int n = 64;
        for (int i = 1; i < n; ++i) {
            const double s = rc.a + (rc.b - rc.a) * i / n;
            csv.add_row_values({s, upper_dilatation(rc, s, *S, 0.02)});
        }
        rep.config["arc_length"] = format_sig17(rc.b);
        rep.add("reparam.computed", CheckStatus::pass, 0.0, "");
    } else if (op == "derive") {
        auto res = derivative_at(c, t_param, *S, o.schedule());
        std::vector<std::string> header{"eps"};
        for (std::size_t k = 0; k < S->dim(); ++k) header.push_back("fwd" + std::to_string(k));
        for (std::size_t k = 0; k < S->dim(); ++k) header.push_back("bwd" + std::to_string(k));
        csv = CsvTable(header);
        for (std::size_t i = 0; i < res.forward.samples.size(); ++i) {
            std::vector<double> row{res.forward.samples[i].first};
            for (double v : res.forward.samples[i].second) row.push_back(v);
            for (double v : res.backward.samples[i].second) row.push_back(v);
            csv.add_row_values(row);
        }
        rep.add("derive.derivable", res.derivable ? CheckStatus::pass : CheckStatus::fail,
                res.inv_residual,
                std::string("forward ") + to_string(res.forward.status) + ", backward " +
                    to_string(res.backward.status));
    } else if (op == "rn") {
        auto res = rn_probe(*S, c, o.samples, o.schedule(), o.seed);
        rep = res.report;
    } else if (op == "lenformula") {
        auto res = length_formula_check(*S, c, quad_points, o.schedule());
        rep = res.report;
        rep.config["lhs"] = format_sig17(res.lhs);
        rep.config["rhs"] = format_sig17(res.rhs);
        rep.config["rel_err"] = format_sig17(res.rel_err);
    } else {
        throw std::invalid_argument("unknown curve op '" + op + "'");
    }

    rr.sections.push_back(rep);
    if (!o.csv.empty()) csv.write(resolve_out(o.csv));
    return finish(rr, o,
                  std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count());
}

int run_diff(const CommonOpts& o, const std::string& map_name, const std::string& map2_name,
             const std::string& structure2, const std::string& op, const std::string& x_lit) {
    const auto t0 = std::chrono::steady_clock::now();
    auto S = make_structure(o.structure);
    const Point x = x_lit.empty() ? Point(S->dim(), 0.0) : parse_point(x_lit);

    RunReport rr;
    rr.command = "diff";
    rr.config["structure"] = o.structure;
    rr.config["op"] = op;
    Report rep;
    rep.title = "diff:" + op;
    CsvTable csv({"eps", "value0"});

    if (op == "derive" || op == "morphism") {
        auto F = make_map(map_name, S, S);
        DerivativeEstimate D = make_derivative(F, x, o.schedule());
        SeededRng rng(o.seed);
        std::vector<std::string> header{"probe", "eps"};
        for (std::size_t k = 0; k < S->dim(); ++k) header.push_back("value" + std::to_string(k));
        csv = CsvTable(header);
        for (int i = 0; i < o.samples; ++i) {
            const Point u = rng.point_in_box(x, o.radius);
            auto est = D.apply(u);
            for (auto& [e, v] : est.samples) {
                std::vector<std::string> row{std::to_string(i), format_sig17(e)};
                for (double cd : v) row.push_back(format_sig17(cd));
                csv.add_row(row);
            }
            rep.merge_worst("pansu.converged",
                            est.converged() ? CheckStatus::pass : CheckStatus::fail,
                            est.residual, "u=" + format_point(u) + " " + to_string(est.status));
        }
        if (op == "morphism") {
            auto Q = [&](const Point& u) {
                auto est = D.apply(u);
                return est.converged() ? est.value : Point(S->dim(), NAN);
            };
            Report morph = check_conical_morphism(Q, *S, x, *S, F.eval(x), o.samples, o.radius,
                                                  o.seed, o.schedule());
            for (const auto& r : morph.records) rep.add(r);
        }
    } else if (op == "chain") {
        auto F = make_map(map_name, S, S);
        auto G = make_map(map2_name, S, S);
        rep = chain_rule_check(F, G, x, o.samples, o.radius, o.seed, o.schedule());
    } else if (op == "equiv") {
        auto S2 = make_structure(structure2);
        auto res = equivalence_check(*S, *S2, o.samples, o.radius, o.seed, o.schedule());
        rep = res.report;
        rep.config["equivalent"] = res.equivalent ? "true" : "false";
    } else if (op == "transport") {
        auto F = make_map(map_name, S, S);
        auto T = transport_structure(S, F);
        AuditConfig cfg;
        cfg.sample_count = o.samples;
        cfg.radius = o.radius;
        cfg.seed = o.seed;
        rep = audit_axioms(*T, cfg);
    } else {
        throw std::invalid_argument("unknown diff op '" + op + "'");
    }

    rr.sections.push_back(rep);
    if (!o.csv.empty()) csv.write(resolve_out(o.csv));
    return finish(rr, o,
                  std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count());
}

int run_lookdown(const CommonOpts& o, const std::string& pair_name, const std::string& op,
                 const std::string& x_lit, const std::string& z_lit, double eps,
                 const std::string& curve_name) {
    const auto t0 = std::chrono::steady_clock::now();
    auto P = make_lookdown_pair(pair_name);
    const Point x = x_lit.empty() ? Point(3, 0.0) : parse_point(x_lit);

    RunReport rr;
    rr.command = "lookdown";
    rr.config["pair"] = pair_name;
    rr.config["op"] = op;
    Report rep;
    rep.title = "lookdown:" + op;
    CsvTable csv({"eps", "gap", "vertical"});

    if (op == "audit") {
        LookdownAuditConfig cfg;
        cfg.samples = o.samples;
        cfg.ball_radius = o.radius;
        cfg.seed = o.seed;
        rep = lookdown_audit(P, cfg);
    } else if (op == "qeps") {
        const Point z = parse_point(z_lit);
        const Point q = q_eps(P, x, Scale(eps), z);
        rep.config["q_eps"] = format_point(q);
        rep.add("qeps.computed", CheckStatus::pass, 0.0, "");
    } else if (op == "gap") {
        const Point z = parse_point(z_lit);
        // Trace of (eps, gap, vertical part) for the constant probe z.
        for (double e : o.schedule().points()) {
            const double g = distribution_gap(P, x, Scale(e), z);
            const Point qz = q_eps(P, x, Scale(e), z);
            const double vert = tangent_distance(*P.upper, x, qz, z, {0.5, 0.5, 16}).value;
            csv.add_row_values({e, g, vert});
        }
        rep.add("gap.computed", CheckStatus::pass, 0.0, "");
    } else if (op == "did") {
        const Point z = parse_point(z_lit);
        auto est = identity_derivative(P, x, z, o.schedule());
        rep.config["D_id"] = format_point(est.value);
        rep.add("did.converged", est.converged() ? CheckStatus::pass : CheckStatus::fail,
                est.residual, to_string(est.status));
    } else if (op == "projector") {
        rep = check_projector(P, x, o.samples, o.radius, o.seed, o.schedule());
    } else if (op == "transfer") {
        Curve c = make_curve(curve_name, 3);
        auto res = transfer_probe(P, c, o.samples, o.schedule(), o.seed);
        rep = res.report;
    } else {
        throw std::invalid_argument("unknown lookdown op '" + op + "'");
    }

    rr.sections.push_back(rep);
    if (!o.csv.empty()) csv.write(resolve_out(o.csv));
    return finish(rr, o,
                  std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count());
}

int run_suite(const CommonOpts& o, bool skip_determinism) {
    SuiteConfig cfg;
    cfg.seed = o.seed;
    cfg.check_determinism = !skip_determinism;
    cfg.jobs = o.jobs;
    SuiteResult res = run_acceptance_suite(cfg);
    print_criteria(std::cout, res);
    if (!o.out.empty()) write_text_file(resolve_out(o.out), to_json(res.report).dump(2) + "\n");
    return res.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dilat: numerical laboratory for dilatation structures"};
    app.require_subcommand(1);

    CommonOpts audit_o, tangent_o, curve_o, diff_o, look_o, suite_o;
    // Schedule depths follow the per-operation roundoff analysis: graded
    // rescales want shallow tails, plain derivative blow-ups allow deeper.
    audit_o.steps = 14;
    tangent_o.steps = 14;
    tangent_o.tol = 2e-4;
    curve_o.steps = 14;
    look_o.steps = 14;
    diff_o.steps = 18;
    std::string curve_name = "segment", curve_op = "var";
    double t_param = 0.0, mesh = 1e-3;
    int quad_points = 1024;
    std::string map_name = "identity", map2_name = "identity", structure2 = "euclidean:2";
    std::string diff_op = "derive", x_lit, z_lit;
    std::string pair_name = "heisenberg-euclidean", look_op = "audit", look_curve = "hline";
    double look_eps = 0.5;
    bool skip_determinism = false;

    auto* audit_cmd = app.add_subcommand("audit", "audit the axioms on a structure");
    add_common(audit_cmd, audit_o);

    auto* tangent_cmd = app.add_subcommand("tangent", "tangent-group operation traces");
    add_common(tangent_cmd, tangent_o);

    auto* curve_cmd = app.add_subcommand("curve", "curve calculus operations");
    add_common(curve_cmd, curve_o);
    curve_cmd->add_option("--curve", curve_name, "curve fixture or file:<path>");
    curve_cmd->add_option("--op", curve_op,
                          "var|lip|md|length|reparam|derive|rn|lenformula|hlen");
    curve_cmd->add_option("--t", t_param, "parameter value for pointwise ops");
    curve_cmd->add_option("--mesh", mesh, "covering mesh for hlen");
    curve_cmd->add_option("--quad-points", quad_points, "quadrature intervals");

    auto* diff_cmd = app.add_subcommand("diff", "differentiability between structures");
    add_common(diff_cmd, diff_o);
    diff_cmd->add_option("--map", map_name, "map name");
    diff_cmd->add_option("--map2", map2_name, "outer map for chain");
    diff_cmd->add_option("--structure2", structure2, "second structure for equiv");
    diff_cmd->add_option("--op", diff_op, "derive|morphism|chain|equiv|transport");
    diff_cmd->add_option("--x", x_lit, "base point, comma separated");

    auto* look_cmd = app.add_subcommand("lookdown", "the looking-down relation");
    add_common(look_cmd, look_o, false);
    look_cmd->add_option("--pair", pair_name, "lookdown pair name");
    look_cmd->add_option("--op", look_op, "audit|qeps|gap|did|projector|transfer");
    look_cmd->add_option("--x", x_lit, "base point");
    look_cmd->add_option("--z", z_lit, "probe point");
    look_cmd->add_option("--eps", look_eps, "scale for qeps");
    look_cmd->add_option("--curve", look_curve, "curve fixture for transfer");

    auto* suite_cmd = app.add_subcommand("suite", "run the full acceptance battery");
    add_common(suite_cmd, suite_o, false);
    suite_cmd->add_flag("--skip-determinism", skip_determinism,
                        "skip the double-run determinism criterion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (audit_cmd->parsed()) return run_audit(audit_o);
        if (tangent_cmd->parsed()) return run_tangent(tangent_o);
        if (curve_cmd->parsed())
            return run_curve(curve_o, curve_name, curve_op, t_param, mesh, quad_points);
        if (diff_cmd->parsed())
            return run_diff(diff_o, map_name, map2_name, structure2, diff_op, x_lit);
        if (look_cmd->parsed())
            return run_lookdown(look_o, pair_name, look_op, x_lit, z_lit, look_eps, look_curve);
        if (suite_cmd->parsed()) return run_suite(suite_o, skip_determinism);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
