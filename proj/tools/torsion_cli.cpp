// Command-line front end: closed-form radial evaluation, threshold
// certification, parallel-coordinates lower bounds, single FEM solves, the
// theorem/lemma verification sweeps, and report format conversion.
//
// Exit codes: 0 all pass, 1 any fail, 2 indeterminate without fails,
// 3 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "torsion/fem.hpp"
#include "torsion/geometry.hpp"
#include "torsion/harness.hpp"
#include "torsion/parallel_coordinates.hpp"
#include "torsion/radial.hpp"
#include "torsion/report.hpp"
#include "torsion/thresholds.hpp"

namespace {

using namespace torsion;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output path: " + path);
    return out;
}

int cmd_radial(int dim, double radius, std::optional<double> alpha,
               std::optional<double> inner) {
    if (inner) {
        const ShellGeometry shell(dim, *inner, radius);
        std::printf("shell d=%d R1=%.12g R2=%.12g t=%.12g\n", dim, shell.inner_radius,
                    shell.outer_radius, shell.ratio());
        std::printf("tau_DN = %.15g\n", dn_torsion_shell(shell));
        std::printf("u_M    = %.15g\n", shell_solution_max(shell));
        return 0;
    }
    const BallGeometry ball(dim, radius);
    std::printf("ball d=%d R=%.12g\n", dim, radius);
    std::printf("tau_D        = %.15g\n", dirichlet_torsion_ball(ball));
    std::printf("alpha_*      = %.15g\n", critical_alpha(ball));
    std::printf("sigma_1      = %.15g\n", steklov_ball(ball, 1));
    if (alpha) {
        std::printf("tau_alpha    = %.15g  (alpha = %.12g)\n", robin_torsion_ball(ball, *alpha),
                    *alpha);
        std::printf("resonant     = %s\n", steklov_resonant(ball, *alpha) ? "yes" : "no");
        const char* sign = "sign-changing";
        switch (ball_solution_sign(ball, *alpha)) {
            case SolutionSign::all_positive: sign = "all-positive"; break;
            case SolutionSign::all_negative: sign = "all-negative"; break;
            default: break;
        }
        std::printf("solution     = %s\n", sign);
    }
    return 0;
}

int cmd_thresholds(const std::vector<int>& dims, int grid, const std::string& out_path,
                   int curve_samples, double tolerance) {
    const auto suite = run_threshold_suite(dims, grid, 4096, tolerance);
    for (const auto& c : suite.minima)
        std::printf("[%s] %-17s d=%-2d  grid min %.12f (bound %g, margin %.3e)\n",
                    c.pass ? "PASS" : "FAIL", to_string(c.kind), c.d, c.grid_min, c.bound,
                    c.grid_min - c.bound);
    for (const auto& s : suite.structures)
        std::printf("[%s] structure %s d=%-2d  roots=%zu crit=%zu  %s\n",
                    s.structure_ok ? "PASS" : "FAIL", to_string(s.id), s.d, s.roots.size(),
                    s.critical_points.size(), s.note.c_str());
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        out << "kind,d,t,value,bound,margin\n";
        char buf[160];
        for (const auto& c : suite.minima) {
            for (int i = 0; i < curve_samples; ++i) {
                const double t = 1e-4 + (1.0 - 2e-4) * i / (curve_samples - 1);
                const double v = threshold(c.kind, c.d, t);
                std::snprintf(buf, sizeof(buf), "%s,%d,%.17g,%.17g,%.17g,%.17g\n",
                              to_string(c.kind), c.d, t, v, c.bound, v - c.bound);
                out << buf;
            }
        }
    }
    return suite.all_pass ? 0 : 1;
}

int cmd_lowerbound(const std::string& poly_path, ExperimentConfig cfg, double tolerance) {
    std::vector<SandwichRecord> recs;
    if (!poly_path.empty()) {
        const auto poly = read_polygon_file(poly_path);
        const auto rep = dirichlet_lower_bound(poly);
        const std::vector<double> h_seq = {cfg.mesh_h, cfg.mesh_h / 2, cfg.mesh_h / 4};
        const auto tau = torsion_budget(poly, std::nullopt, h_seq);
        recs.push_back({poly_path, rep.shell_torsion, rep.lower_bound, tau.value,
                        tau.error_bar,
                        rep.lower_bound >= rep.shell_torsion * (1.0 - tolerance) &&
                            rep.lower_bound <= tau.value + tau.error_bar});
    } else {
        recs = run_parallel_coordinates_suite(cfg);
    }
    bool all_ok = true;
    for (const auto& r : recs) {
        std::printf("[%s] %-12s tau_DN %.10g <= LB %.10g <= tau_D %.10g (+/- %.2e)\n",
                    r.ok ? "PASS" : "FAIL", r.domain_id.c_str(), r.shell_torsion,
                    r.lower_bound, r.tau_dirichlet, r.tau_dirichlet_budget);
        all_ok = all_ok && r.ok;
    }
    return all_ok ? 0 : 1;
}

int cmd_fem(const std::string& poly_path, double mesh_h, std::optional<double> alpha,
            bool dirichlet, int steklov_count, const std::string& mesh_dump) {
    const auto poly = read_polygon_file(poly_path);
    const auto mesh = triangulate(poly, mesh_h);
    std::printf("mesh: %zu nodes, %zu triangles, %zu boundary edges, h = %.6g\n",
                mesh.nodes.size(), mesh.triangles.size(), mesh.boundary_edges.size(),
                mesh.mesh_size);
    if (!mesh_dump.empty()) {
        auto out = open_out(mesh_dump);
        dump_mesh(mesh, out);
    }
    const auto sys = assemble(mesh);
    if (dirichlet) {
        const auto res = solve_dirichlet_torsion(sys);
        std::printf("tau_D,h = %.12g  (energy residual %.3e)\n", res.torsion,
                    res.energy_residual);
    }
    if (alpha) {
        const auto spectrum = steklov_spectrum(sys, std::max(steklov_count, 2));
        const auto res = solve_robin_torsion(sys, *alpha, spectrum.eigenvalues);
        std::printf("tau_%g,h = %.12g  (energy residual %.3e)\n", *alpha, res.torsion,
                    res.energy_residual);
    }
    if (steklov_count > 0) {
        const auto spectrum = steklov_spectrum(sys, steklov_count);
        for (int i = 0; i < steklov_count; ++i)
            std::printf("sigma_%d,h = %.12g\n", i, spectrum.eigenvalues[i]);
    }
    return 0;
}

int cmd_verify(const ExperimentConfig& cfg, const std::string& out_path,
               const std::string& format) {
    const auto sweep = verify_sweep(cfg);
    std::vector<VerificationRecord> all;
    for (const auto& r : sweep.theorem_records) {
        auto rr = r;
        rr.note = rr.note.empty() ? "theorem" : rr.note + "; theorem";
        all.push_back(std::move(rr));
    }
    for (const auto& r : sweep.lemma_records) {
        auto rr = r;
        rr.note = rr.note.empty() ? "lemma-core" : rr.note + "; lemma-core";
        all.push_back(std::move(rr));
    }
    int n_pass = 0, n_fail = 0, n_indet = 0, n_skip = 0;
    for (const auto& r : all) {
        switch (r.status) {
            case RecordStatus::pass: ++n_pass; break;
            case RecordStatus::fail: ++n_fail; break;
            case RecordStatus::indeterminate: ++n_indet; break;
            case RecordStatus::skipped: ++n_skip; break;
        }
    }
    std::printf("verify: %d pass, %d fail, %d indeterminate, %d skipped (%zu records)\n",
                n_pass, n_fail, n_indet, n_skip, all.size());
    for (const auto& r : all)
        if (r.status == RecordStatus::fail)
            std::printf("  FAIL %s %s alpha=%.6g theorem_margin=%.3e lemma_margin=%.3e\n",
                        r.domain_id.c_str(), r.note.c_str(), r.alpha, r.theorem_margin,
                        r.lemma_margin);
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        if (format == "json") {
            RunMeta meta{cfg.seed, cfg.mesh_h, kToolVersion, utc_timestamp()};
            write_json(all, meta, out);
        } else {
            write_csv(all, out);
        }
    }
    return exit_code_for(all);
}

int cmd_report(const std::string& in_path, const std::string& out_path,
               const std::string& format) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open input: " + in_path);
    std::vector<VerificationRecord> records;
    RunMeta meta;
    if (in_path.size() > 5 && in_path.substr(in_path.size() - 5) == ".json") {
        auto rep = read_json(in);
        records = std::move(rep.records);
        meta = rep.meta;
    } else {
        records = read_csv(in);
        meta = RunMeta{0, 0.0, kToolVersion, utc_timestamp()};
    }
    auto out = open_out(out_path);
    if (format == "json")
        write_json(records, meta, out);
    else
        write_csv(records, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robin torsion estimates: radial formulas, thresholds, and FEM checks"};
    app.require_subcommand(1);

    // radial
    auto* radial = app.add_subcommand("radial", "evaluate closed-form radial quantities");
    int dim = 2;
    double radius = 1.0;
    std::optional<double> alpha_opt;
    std::optional<double> inner_opt;
    radial->add_option("--dim", dim, "space dimension");
    radial->add_option("--radius", radius, "ball radius / shell outer radius");
    radial->add_option("--alpha", alpha_opt, "Robin parameter");
    radial->add_option("--inner", inner_opt, "inner radius (selects the shell problem)");

    // thresholds
    auto* thr = app.add_subcommand("thresholds", "run the threshold certification suite");
    std::vector<int> dims{3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    int grid = 10000;
    int curve_samples = 512;
    double tolerance = 1e-9;
    std::string out_path, format = "csv";
    thr->add_option("--dim", dims, "dimensions for the general kinds");
    thr->add_option("--grid", grid, "certification grid size");
    thr->add_option("--out", out_path, "write threshold curves as CSV");
    thr->add_option("--curve-samples", curve_samples, "samples per exported curve");
    thr->add_option("--tolerance", tolerance, "slack below the proven bound");

    // shared experiment options
    ExperimentConfig cfg;
    std::string constraint = "perimeter", family = "mixed", config_path;
    auto add_experiment_options = [&](CLI::App* cmd) {
        cmd->add_option("--seed", cfg.seed, "RNG seed for the domain family");
        cmd->add_option("--count", cfg.count, "number of domains");
        cmd->add_option("--mesh-h", cfg.mesh_h, "base mesh size of the {h, h/2, h/4} study");
        cmd->add_option("--constraint", constraint, "perimeter or volume")
            ->check(CLI::IsMember({"perimeter", "volume"}));
        cmd->add_option("--family", family,
                        "regular-ngon | random-convex | stretched-hexagon | mixed");
        cmd->add_option("--normalization", cfg.normalization_value,
                        "constraint value (perimeter or area of every domain)");
        cmd->add_option("--alpha-fractions", cfg.alpha_fractions,
                        "alpha grid as fractions of the measured sigma_1");
        cmd->add_option("--config", config_path, "JSON config file (same notation as reports)");
    };

    // lowerbound
    auto* lb = app.add_subcommand("lowerbound", "parallel-coordinates lower-bound suite");
    std::string poly_path;
    double lb_tolerance = 1e-8;
    lb->add_option("--poly", poly_path, "single polygon file instead of a family");
    lb->add_option("--tolerance", lb_tolerance, "relative slack in the sandwich check");
    add_experiment_options(lb);

    // fem
    auto* fem = app.add_subcommand("fem", "single FEM solve on a polygon file");
    std::string fem_poly, mesh_dump;
    double mesh_h = 0.1;
    std::optional<double> fem_alpha;
    bool dirichlet = false;
    int steklov_count = 0;
    fem->add_option("--poly", fem_poly, "polygon file")->required();
    fem->add_option("--mesh-h", mesh_h, "target mesh size");
    fem->add_option("--alpha", fem_alpha, "Robin parameter");
    fem->add_flag("--dirichlet", dirichlet, "solve the Dirichlet torsion problem");
    fem->add_option("--steklov", steklov_count, "number of Steklov eigenvalues to print");
    fem->add_option("--dump-mesh", mesh_dump, "write the mesh as a text file");

    // verify
    auto* verify = app.add_subcommand("verify", "theorem + core-lemma verification sweeps");
    std::string verify_out, verify_format = "csv";
    add_experiment_options(verify);
    verify->add_option("--out", verify_out, "report path");
    verify->add_option("--format", verify_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // report
    auto* rep = app.add_subcommand("report", "convert a report between csv and json");
    std::string rep_in, rep_out, rep_format = "json";
    rep->add_option("--in", rep_in, "input report (.csv or .json)")->required();
    rep->add_option("--out", rep_out, "output path")->required();
    rep->add_option("--format", rep_format, "target format")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.constraint = constraint == "volume" ? Constraint::volume : Constraint::perimeter;
        cfg.family = domain_family_from(family);
        CLI::App* exp_cmd = lb->parsed() ? lb : verify->parsed() ? verify : nullptr;
        bool norm_explicit = exp_cmd && exp_cmd->count("--normalization") > 0;
        if (!config_path.empty() && exp_cmd) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
            nlohmann::json j;
            in >> j;
            const ExperimentConfig file_cfg = config_from_json(j);
            // explicit flags win over config-file values
            if (!exp_cmd->count("--seed")) cfg.seed = file_cfg.seed;
            if (!exp_cmd->count("--count")) cfg.count = file_cfg.count;
            if (!exp_cmd->count("--mesh-h")) cfg.mesh_h = file_cfg.mesh_h;
            if (!exp_cmd->count("--normalization") && j.contains("normalization_value")) {
                cfg.normalization_value = file_cfg.normalization_value;
                norm_explicit = true;
            }
            if (!exp_cmd->count("--alpha-fractions"))
                cfg.alpha_fractions = file_cfg.alpha_fractions;
            if (!exp_cmd->count("--constraint")) cfg.constraint = file_cfg.constraint;
            if (!exp_cmd->count("--family")) cfg.family = file_cfg.family;
        }
        // default normalization: perimeter = 2 pi, or area = pi
        if (cfg.constraint == Constraint::volume && !norm_explicit)
            cfg.normalization_value = std::numbers::pi;

        if (*radial) return cmd_radial(dim, radius, alpha_opt, inner_opt);
        if (*thr) return cmd_thresholds(dims, grid, out_path, curve_samples, tolerance);
        if (*lb) return cmd_lowerbound(poly_path, cfg, lb_tolerance);
        if (*fem) return cmd_fem(fem_poly, mesh_h, fem_alpha, dirichlet, steklov_count, mesh_dump);
        if (*verify) return cmd_verify(cfg, verify_out, verify_format);
        if (*rep) return cmd_report(rep_in, rep_out, rep_format);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 3;
}
