// Command-line front end: solve closed-form minimizers, run the numerical
// minimizer, certify maps against the lower bound, evaluate energies, and
// render grid-image figures.
//
// Exit codes: 0 ok, 2 bad input, 3 optimizer did not converge,
// 4 certificate violated beyond tolerance.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "annuli/annuli.hpp"

namespace fs = std::filesystem;
using namespace annuli;

namespace {

struct CommonOpts {
    double a = 1.0, b = 0.0, c = 1.0, d = 0.0;
    int j = 1;
    std::string problem_file;
    int nr = 128, nt = 256;
    int iters = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string format = "json";
    std::string map_name;
    std::string init = "radial_interp";
    int rings = 0, rays = 0;
};

void add_problem_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--a", o.a, "inner radius of the domain annulus");
    cmd->add_option("--b", o.b, "outer radius of the domain annulus");
    cmd->add_option("--c", o.c, "inner radius of the target annulus");
    cmd->add_option("--d", o.d, "outer radius of the target annulus");
    cmd->add_option("--j", o.j, "topological degree");
    cmd->add_option("--problem", o.problem_file, "problem JSON file {a,b,c,d,j}");
}

void add_grid_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--nr", o.nr, "radial grid nodes");
    cmd->add_option("--nt", o.nt, "angular grid nodes");
}

ProblemSpec make_problem(const CommonOpts& o) {
    if (!o.problem_file.empty()) return read_problem_file(o.problem_file);
    if (o.b <= 0.0 || o.d <= 0.0) {
        throw InvalidAnnulus("specify --b and --d (or --problem FILE)");
    }
    return normalize_problem(o.a, o.b, o.c, o.d, o.j);
}

PolarGrid make_grid(const ProblemSpec& s, const CommonOpts& o) {
    const DomainBand band = domain_band(s);
    return PolarGrid(band.lo, band.hi, o.nr, o.nt);
}

std::string out_path(const CommonOpts& o, const std::string& name) {
    fs::create_directories(o.out_dir);
    return (fs::path(o.out_dir) / name).string();
}

/// Analytic maps by name, or a stored map from a .csv / binary file.
DiscreteMap load_or_sample_map(const CommonOpts& o, const ProblemSpec& s) {
    const PolarGrid grid = make_grid(s, o);
    if (o.map_name == "g_circ") return sample_g_circ(s, grid);
    if (o.map_name == "g_diamond") return sample_g_diamond(s, grid);
    if (o.map_name == "power") return sample_power(s, grid);
    if (o.map_name.empty()) {
        throw InvalidAnnulus("--map {g_circ,g_diamond,power,FILE} is required");
    }
    if (o.map_name.size() > 4 && o.map_name.substr(o.map_name.size() - 4) == ".csv") {
        return read_map_csv(o.map_name, s.R, s.j);
    }
    return read_map_binary(o.map_name);
}

json solve_report(const ProblemSpec& s) {
    const auto energy = energy_closed(s);
    json doc;
    doc["problem"] = problem_to_json(s);
    doc["normalized"] = {{"r", s.r}, {"R", s.R}, {"j", s.j}};
    doc["nitsche_rhs"] = nitsche_rhs(s.r, s.j);
    doc["above_bound"] = is_above_bound(s);
    doc["energy"] = energy.value;
    doc["energy_original_annuli"] = energy.value * s.target_scale * s.target_scale;
    if (is_above_bound(s)) {
        const RadialProfile p = solve_radial(s);
        const char* regime = p.regime == Regime::Conformal ? "conformal"
                             : p.regime == Regime::Elastic ? "elastic"
                                                           : "non-elastic";
        doc["kind"] = "harmonic";
        doc["regime"] = regime;
        doc["profile"] = {{"A", p.A}, {"B", p.B}, {"c1", p.c1}};
    } else {
        const double rc = critical_radius(s.R, s.j);
        const RadialProfile p = critical_profile(s.j);
        doc["kind"] = "hybrid";
        doc["regime"] = "below-bound";
        doc["profile"] = {{"A", p.A}, {"B", p.B}, {"c1", p.c1}};
        doc["r_crit"] = rc;
        doc["rho"] = rc / s.r;
    }
    return doc;
}

int cmd_solve(const CommonOpts& o) {
    const ProblemSpec s = make_problem(o);
    const json doc = solve_report(s);
    write_json_file(out_path(o, "solve.json"), doc);
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int cmd_minimize(const CommonOpts& o) {
    const ProblemSpec s = make_problem(o);
    const PolarGrid grid = make_grid(s, o);
    OptimizerConfig cfg;
    cfg.seed = o.seed;
    if (o.iters > 0) cfg.max_iters = o.iters;
    if (o.tol > 0.0) cfg.tol_grad = o.tol;
    InitMode mode = InitMode::RadialInterp;
    if (o.init == "power_map") mode = InitMode::PowerMap;
    else if (o.init == "perturbed") mode = InitMode::Perturbed;
    else if (o.init != "radial_interp") throw InvalidAnnulus("unknown --init mode: " + o.init);

    auto [m, rep] = minimize(s, grid, cfg, mode);
    write_json_file(out_path(o, "convergence.json"), report_to_json(rep));
    if (o.format == "csv" || o.format == "json") {
        write_map_csv(out_path(o, "map.csv"), m);
    } else {
        write_map_binary(out_path(o, "map.bin"), m);
    }
    std::cout << "energy " << rep.energy << ", oracle " << rep.oracle_energy << ", gap_rel "
              << rep.gap_rel << ", iterations " << rep.iterations << '\n';
    return rep.converged ? 0 : 3;
}

int cmd_certify(const CommonOpts& o) {
    const ProblemSpec s = make_problem(o);
    const DiscreteMap m = load_or_sample_map(o, s);
    const CertificateReport rep = certify(m, s);
    write_json_file(out_path(o, "certificate.json"), report_to_json(rep));
    std::cout << "energy " << rep.energy << ", certified " << rep.certified_value << ", slack "
              << rep.slack << '\n';
    const double tol = (o.tol > 0.0 ? o.tol : 1e-3) * std::abs(rep.certified_value);
    return rep.energy >= rep.certified_value - tol ? 0 : 4;
}

int cmd_energy(const CommonOpts& o) {
    const ProblemSpec s = make_problem(o);
    const DiscreteMap m = load_or_sample_map(o, s);
    const double e = dirichlet_energy(m);
    json doc{{"energy", e}};
    write_json_file(out_path(o, "energy.json"), doc);
    std::cout << doc.dump() << '\n';
    return 0;
}

int cmd_figure(const CommonOpts& o) {
    const ProblemSpec s = make_problem(o);
    const DiscreteMap m = load_or_sample_map(o, s);
    FigureOptions fig;
    fig.rings = o.rings;
    fig.rays = o.rays;
    write_figure_svg(out_path(o, "figure.svg"), m, fig);
    write_map_csv(out_path(o, "figure.csv"), m);
    std::cout << "wrote " << out_path(o, "figure.svg") << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) try {
    CLI::App app{"Dirichlet-energy minimizers of degree-j mappings between annuli"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* solve = app.add_subcommand("solve", "closed-form minimizer and energy");
    auto* minimize_cmd = app.add_subcommand("minimize", "numerical energy minimization");
    auto* certify_cmd = app.add_subcommand("certify", "lower-bound certificate for a map");
    auto* energy_cmd = app.add_subcommand("energy", "discrete Dirichlet energy of a map");
    auto* figure_cmd = app.add_subcommand("figure", "SVG image of the mapped polar grid");

    for (CLI::App* cmd : {solve, minimize_cmd, certify_cmd, energy_cmd, figure_cmd}) {
        add_problem_flags(cmd, o);
        cmd->add_option("--out", o.out_dir, "output directory");
        cmd->add_option("--format", o.format, "output format: json, csv, svg, bin");
    }
    for (CLI::App* cmd : {minimize_cmd, certify_cmd, energy_cmd, figure_cmd}) {
        add_grid_flags(cmd, o);
    }
    minimize_cmd->add_option("--iters", o.iters, "maximum outer iterations");
    minimize_cmd->add_option("--tol", o.tol, "projected-gradient tolerance");
    minimize_cmd->add_option("--seed", o.seed, "seed for perturbed initialization");
    minimize_cmd->add_option("--init", o.init, "radial_interp, power_map, or perturbed");
    certify_cmd->add_option("--tol", o.tol, "relative certificate tolerance (default 1e-3)");
    for (CLI::App* cmd : {certify_cmd, energy_cmd, figure_cmd}) {
        cmd->add_option("--map", o.map_name, "g_circ, g_diamond, power, or a map file");
    }
    figure_cmd->add_option("--rings", o.rings, "number of image rings to draw");
    figure_cmd->add_option("--rays", o.rays, "number of image rays to draw");

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return cmd_solve(o);
    if (minimize_cmd->parsed()) return cmd_minimize(o);
    if (certify_cmd->parsed()) return cmd_certify(o);
    if (energy_cmd->parsed()) return cmd_energy(o);
    if (figure_cmd->parsed()) return cmd_figure(o);
    return 2;
} catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
}
