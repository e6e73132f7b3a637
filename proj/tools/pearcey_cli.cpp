// Command-line front end: scenario loading, batch computation, CSV/SVG output.
//
// Subcommands: fn, kernel, gap, converge, pde-check, roots, simulate, selftest.
// Exit codes: 0 success, 2 validation/usage error, 3 numeric non-convergence.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pearcey/errors.hpp"
#include "pearcey/finite_n.hpp"
#include "pearcey/fredholm.hpp"
#include "pearcey/higher_order.hpp"
#include "pearcey/kernels.hpp"
#include "pearcey/parallel.hpp"
#include "pearcey/pde_system.hpp"
#include "pearcey/simulator.hpp"
#include "pearcey/special_functions.hpp"
#include "svg_plot.hpp"

using nlohmann::json;
using namespace pearcey;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Output is buffered and flushed only on success, so a failing run leaves
// no partial file behind.
struct CsvBuffer {
    std::string path;  // empty = stdout
    std::ostringstream body;

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) body << ',';
            body << cells[i];
        }
        body << '\n';
    }

    void flush() {
        if (path.empty()) {
            std::cout << body.str();
            return;
        }
        std::ofstream out(path);
        if (!out) throw std::invalid_argument("cannot open output file: " + path);
        out << body.str();
    }
};

struct Scenario {
    KernelSpec spec;
    RegionFamily regions;
    int nodes_per_interval = 32;
};

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    json j = json::parse(in);  // parse errors map to exit code 2

    Scenario sc;
    if (!j.contains("kernel") || !j["kernel"].contains("taus"))
        throw std::invalid_argument("scenario: kernel.taus is required");
    sc.spec.tau_grid = TauGrid(j["kernel"]["taus"].get<std::vector<double>>());
    sc.spec.order_R = j["kernel"].value("order_R", 1);
    std::string form = j["kernel"].value("form", "canonical");
    if (form == "canonical")
        sc.spec.form = KernelForm::CanonicalQuartic;
    else if (form == "higher-order")
        sc.spec.form = KernelForm::HigherOrder;
    else
        throw std::invalid_argument("scenario: kernel.form must be canonical or higher-order");
    if (j["kernel"].contains("quadrature")) {
        const json& q = j["kernel"]["quadrature"];
        sc.spec.quad.radius = q.value("radius", 0.0);
        sc.spec.quad.panels = q.value("panels", sc.spec.quad.panels);
        sc.spec.quad.nodes_per_panel = q.value("nodes_per_panel", sc.spec.quad.nodes_per_panel);
        sc.spec.quad.grading = q.value("grading", sc.spec.quad.grading);
    }
    sc.spec.validate();

    if (!j.contains("regions")) throw std::invalid_argument("scenario: regions is required");
    for (const json& slice : j["regions"]) {
        std::vector<Interval> list;
        for (const json& iv : slice) {
            if (!iv.is_array() || iv.size() != 2)
                throw std::invalid_argument("scenario: each interval must be [lo, hi]");
            list.push_back({iv[0].get<double>(), iv[1].get<double>()});
        }
        sc.regions.slices.push_back(std::move(list));
    }
    sc.regions.validate(sc.spec.tau_grid.size());
    sc.nodes_per_interval = j.value("nodes_per_interval", 32);
    return sc;
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 2 || !(hi > lo)) throw std::invalid_argument("bad grid range");
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) out[i] = lo + (hi - lo) * i / (points - 1);
    return out;
}

int run_fn(double tau, int order, bool higher, double lo, double hi, int points, int derivs,
           const std::string& out_path, const std::string& svg_path) {
    if (derivs < 0 || derivs > 4) throw std::invalid_argument("--derivs must be in 0..4");
    PearceyParams params(tau, order);
    if (higher) params.higher_order_form = true;
    CsvBuffer csv;
    csv.path = out_path;
    std::vector<std::string> header = {"x"};
    for (int d = 0; d <= derivs; ++d) header.push_back("phi" + std::to_string(d));
    for (int d = 0; d <= derivs; ++d) header.push_back("psi" + std::to_string(d));
    csv.row(header);

    std::vector<double> xs = linspace(lo, hi, points), phi0(points), psi0(points);
    for (int i = 0; i < points; ++i) {
        std::vector<std::string> cells = {fmt17(xs[i])};
        for (int d = 0; d <= derivs; ++d) {
            double v = phi(xs[i], params, d);
            if (d == 0) phi0[i] = v;
            cells.push_back(fmt17(v));
        }
        for (int d = 0; d <= derivs; ++d) {
            double v = psi(xs[i], params, d);
            if (d == 0) psi0[i] = v;
            cells.push_back(fmt17(v));
        }
        csv.row(cells);
    }
    csv.flush();
    if (!svg_path.empty()) {
        pearcey_cli::SvgPlot plot("Pearcey functions");
        plot.add_series("phi", xs, phi0);
        plot.add_series("psi", xs, psi0);
        if (!plot.write(svg_path)) throw std::invalid_argument("cannot write svg: " + svg_path);
    }
    return 0;
}

int run_kernel(const std::string& scenario_path, std::vector<double> taus, int i, int j,
               double lo, double hi, int points, bool diagonal, const std::string& out_path,
               const std::string& svg_path) {
    KernelSpec spec;
    if (!scenario_path.empty()) {
        spec = load_scenario(scenario_path).spec;
    } else {
        if (taus.empty()) throw std::invalid_argument("kernel: give --scenario or --taus");
        spec.tau_grid = TauGrid(std::move(taus));
    }
    ExtendedPearceyKernel kernel(spec);
    if (i < 0 || i >= kernel.slices() || j < 0 || j >= kernel.slices())
        throw std::invalid_argument("kernel: slice index out of range");

    CsvBuffer csv;
    csv.path = out_path;
    std::vector<double> xs = linspace(lo, hi, points);
    if (diagonal) {
        csv.row({"x", "k"});
        std::vector<double> density(points);
        for (int a = 0; a < points; ++a) {
            density[a] = kernel.entry(i, j, xs[a], xs[a]);
            csv.row({fmt17(xs[a]), fmt17(density[a])});
        }
        csv.flush();
        if (!svg_path.empty()) {
            pearcey_cli::SvgPlot plot("one-point density K(x,x)");
            plot.add_series("K(x,x)", xs, density);
            if (!plot.write(svg_path))
                throw std::invalid_argument("cannot write svg: " + svg_path);
        }
        return 0;
    }
    csv.row({"x", "y", "h", "e", "k"});
    std::vector<Eigen::MatrixXd> hvals;
    kernel.eval_block_h(i, j, xs, xs, {{0, 0}}, hvals);
    for (int a = 0; a < points; ++a)
        for (int b = 0; b < points; ++b) {
            double e = kernel.e(i, j, xs[a], xs[b]);
            csv.row({fmt17(xs[a]), fmt17(xs[b]), fmt17(hvals[0](a, b)), fmt17(e),
                     fmt17(hvals[0](a, b) - e)});
        }
    csv.flush();
    if (!svg_path.empty()) throw std::invalid_argument("kernel: --svg requires --diagonal");
    return 0;
}

int run_gap(const std::string& scenario_path, const std::string& out_path) {
    Scenario sc = load_scenario(scenario_path);
    ExtendedPearceyKernel kernel(sc.spec);
    NystromSystem system(kernel, sc.regions, sc.nodes_per_interval);
    double det = gap_probability(system);
    CsvBuffer csv;
    csv.path = out_path;
    csv.row({"det"});
    csv.row({fmt17(det)});
    csv.flush();
    return 0;
}

int run_converge(std::vector<int> ns, double lo, double hi, int grid,
                 std::vector<double> taus, const std::string& out_path,
                 const std::string& svg_path) {
    if (ns.empty()) throw std::invalid_argument("converge: --n list required");
    if (taus.empty()) taus = {0.0};
    ConvergenceScan scan = convergence_scan(ns, lo, hi, grid, TauGrid(std::move(taus)));
    CsvBuffer csv;
    csv.path = out_path;
    csv.row({"n", "sup_err", "sup_err_dx", "slope", "slope_dx"});
    for (std::size_t q = 0; q < scan.ns.size(); ++q)
        csv.row({std::to_string(scan.ns[q]), fmt17(scan.sup_err[q]), fmt17(scan.sup_err_dx[q]),
                 fmt17(scan.slope), fmt17(scan.slope_dx)});
    csv.flush();
    if (!svg_path.empty()) {
        pearcey_cli::SvgPlot plot("scaling-limit convergence", true, true);
        std::vector<double> nd(scan.ns.begin(), scan.ns.end());
        plot.add_series("sup err", nd, scan.sup_err);
        plot.add_series("sup err d/dx", nd, scan.sup_err_dx);
        if (!plot.write(svg_path)) throw std::invalid_argument("cannot write svg: " + svg_path);
    }
    return 0;
}

int run_pde_check(const std::string& scenario_path, double h, const std::string& out_path) {
    Scenario sc = load_scenario(scenario_path);
    ExtendedPearceyKernel kernel(sc.spec);
    DifferentialReport diff = differential_residuals(kernel, sc.regions, h,
                                                     sc.nodes_per_interval);
    ClosureReport closure = closure_identities(kernel, sc.regions, sc.nodes_per_interval);
    CsvBuffer csv;
    csv.path = out_path;
    csv.row({"kind", "name", "residual", "richardson"});
    for (int q = 0; q < DifferentialReport::kEquations; ++q)
        csv.row({"differential", DifferentialReport::equation_name(q),
                 fmt17(diff.residual_h[q]), fmt17(diff.residual_richardson[q])});
    csv.row({"closure", "first_order", fmt17(closure.first_order), ""});
    csv.row({"closure", "second_order_left", fmt17(closure.second_order_left), ""});
    csv.row({"closure", "second_order_right", fmt17(closure.second_order_right), ""});
    csv.row({"closure", "third_order", fmt17(closure.third_order), ""});
    csv.row({"closure", "full_third_order", fmt17(closure.full_third_order), ""});
    csv.row({"closure", "known_combinations", fmt17(closure.known_combo_diag), ""});
    csv.row({"closure", "off_diagonal_times", fmt17(closure.off_diagonal_times), ""});
    csv.flush();
    return 0;
}

int run_roots(int order_R, const std::string& out_path) {
    RootSystem rs = singularity_roots(order_R);
    CsvBuffer csv;
    csv.path = out_path;
    csv.row({"re", "im", "power_sum_residual", "scaling_exponent"});
    for (Complex a : rs.roots)
        csv.row({fmt17(a.real()), fmt17(a.imag()), fmt17(rs.power_sum_residual),
                 fmt17(rs.scaling_exponent)});
    csv.flush();
    return 0;
}

int run_simulate(std::vector<double> starts, std::vector<double> ends, double time,
                 std::vector<double> region, long long samples, std::uint64_t seed,
                 int grid_steps, const std::string& out_path) {
    if (region.size() != 2) throw std::invalid_argument("simulate: --region needs lo,hi");
    McConfig config;
    config.n = static_cast<int>(starts.size());
    config.starts = std::move(starts);
    config.ends = std::move(ends);
    config.obs_times = {time};
    config.target_accepted = samples;
    config.seed = seed;
    config.grid_steps = grid_steps;

    RegionFamily regions;
    regions.slices = {{Interval{region[0], region[1]}}};
    McResult mc = sample_avoidance(config, regions);

    PathModel model;
    model.n = config.n;
    model.starts = config.starts;
    model.ends = config.ends;
    model.times = {time};
    FiniteNBrownianKernel kernel(model);
    NystromSystem system(kernel, regions, 32);
    double det = gap_probability(system);
    double sigmas = std::abs(mc.estimate - det) / mc.standard_error;

    CsvBuffer csv;
    csv.path = out_path;
    csv.row({"estimate", "stderr", "acceptance_rate", "determinant", "sigmas"});
    csv.row({fmt17(mc.estimate), fmt17(mc.standard_error), fmt17(mc.acceptance_rate),
             fmt17(det), fmt17(sigmas)});
    csv.flush();
    return 0;
}

int run_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };

    PearceyParams p(0.3);
    check("phi ODE residual", ode_residual_phi(0.7, p) < 1e-8);
    check("psi ODE residual", ode_residual_psi(-0.4, p) < 1e-8);
    check("psi(0) Gamma reduction",
          std::abs(psi(0.0, PearceyParams(0.0)) - 0.40802446954913149) < 1e-9);

    KernelSpec spec;
    spec.tau_grid = TauGrid{-0.5, 0.5};
    ExtendedPearceyKernel kernel(spec);
    double x = 0.3, y = -0.2;
    double comm = kernel.entry(0, 1, x, y, 1, 0) + kernel.entry(0, 1, x, y, 0, 1) +
                  kernel.phi_component(0, x) * kernel.psi_component(1, y);
    check("first commutator", std::abs(comm) < 1e-7);

    KernelSpec spec0;
    spec0.tau_grid = TauGrid{0.0};
    ExtendedPearceyKernel kernel0(spec0);
    check("integrable form",
          std::abs(integrable_entry(0.3, -0.2, 0.0) - kernel0.h(0, 0, 0.3, -0.2)) < 1e-8);

    RegionFamily empty;
    empty.slices = {{}, {}};
    NystromSystem esys(kernel, empty, 8);
    check("empty-set determinant", esys.determinant() == 1.0);

    RegionFamily r;
    r.slices = {{Interval{-1.0, 1.0}}, {}};
    NystromSystem sys(kernel, r, 32);
    check("gap probability in (0,1)",
          gap_probability(sys) > 0.0 && gap_probability(sys) < 1.0);

    PathModel m;
    m.n = 2;
    m.starts = {0.0, 0.0};
    m.ends = {1.0, -1.0};
    m.times = {0.5};
    double hs = h_zero_start(m, 0, 0, 0.2, -0.1, ZeroStartMethod::Sum);
    double hc = h_zero_start(m, 0, 0, 0.2, -0.1, ZeroStartMethod::Contour);
    check("sum vs contour finite-n", std::abs(hs - hc) < 1e-9);
    check("normalization calibrates to sqrt(pi)",
          std::abs(calibrate_normalization(m) - std::sqrt(M_PI)) < 1e-8);

    RootSystem r2 = singularity_roots(2);
    check("order-2 roots", std::abs(r2.roots[0].real() - 0.5) < 1e-12 &&
                               std::abs(std::abs(r2.roots[0].imag()) - 0.5) < 1e-12);

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"extended Pearcey kernel toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (default: hardware)");

    auto* fn = app.add_subcommand("fn", "tabulate the Pearcey functions phi and psi");
    double fn_tau = 0.0, fn_lo = -3.0, fn_hi = 3.0;
    int fn_points = 61, fn_derivs = 2, fn_order = 1;
    bool fn_higher = false;
    std::string fn_out, fn_svg;
    fn->add_option("--tau", fn_tau, "time parameter");
    fn->add_option("--order-R", fn_order, "singularity order (1 = Pearcey)");
    fn->add_flag("--higher-order", fn_higher, "use the order-R scaling even at R = 1");
    fn->add_option("--min", fn_lo, "grid start");
    fn->add_option("--max", fn_hi, "grid end");
    fn->add_option("--points", fn_points, "grid size");
    fn->add_option("--derivs", fn_derivs, "derivatives up to this order (0..4)");
    fn->add_option("-o,--output", fn_out, "CSV path (default stdout)");
    fn->add_option("--svg", fn_svg, "write an SVG line plot");

    auto* kn = app.add_subcommand("kernel", "evaluate the extended kernel on a grid");
    std::string kn_scenario, kn_out, kn_svg;
    std::vector<double> kn_taus;
    int kn_i = 0, kn_j = 0, kn_points = 21;
    double kn_lo = -2.0, kn_hi = 2.0;
    bool kn_diag = false;
    kn->add_option("--scenario", kn_scenario, "scenario JSON file");
    kn->add_option("--taus", kn_taus, "time grid")->delimiter(',');
    kn->add_option("--i", kn_i, "row slice");
    kn->add_option("--j", kn_j, "column slice");
    kn->add_option("--min", kn_lo, "grid start");
    kn->add_option("--max", kn_hi, "grid end");
    kn->add_option("--points", kn_points, "grid size per axis");
    kn->add_flag("--diagonal", kn_diag, "tabulate the one-point density K(x,x)");
    kn->add_option("-o,--output", kn_out, "CSV path (default stdout)");
    kn->add_option("--svg", kn_svg, "write an SVG density plot (diagonal only)");

    auto* gp = app.add_subcommand("gap", "Fredholm gap probability det(I - K chi)");
    std::string gp_scenario, gp_out;
    gp->add_option("--scenario", gp_scenario, "scenario JSON file")->required();
    gp->add_option("-o,--output", gp_out, "CSV path (default stdout)");

    auto* cv = app.add_subcommand("converge", "finite-n to limiting kernel scan");
    std::vector<int> cv_ns;
    std::vector<double> cv_box = {-2.0, 2.0}, cv_taus;
    int cv_grid = 5;
    std::string cv_out, cv_svg;
    cv->add_option("--n", cv_ns, "path-count parameters")->delimiter(',')->required();
    cv->add_option("--box", cv_box, "box lo,hi")->delimiter(',')->expected(2);
    cv->add_option("--grid", cv_grid, "grid points per axis");
    cv->add_option("--taus", cv_taus, "time grid (default 0)")->delimiter(',');
    cv->add_option("-o,--output", cv_out, "CSV path (default stdout)");
    cv->add_option("--svg", cv_svg, "write a log-log SVG plot");

    auto* pc = app.add_subcommand("pde-check", "verify the endpoint differential system");
    std::string pc_scenario, pc_out;
    double pc_h = 1e-3;
    pc->add_option("--scenario", pc_scenario, "scenario JSON file")->required();
    pc->add_option("--step", pc_h, "central-difference step");
    pc->add_option("-o,--output", pc_out, "CSV path (default stdout)");

    auto* rt = app.add_subcommand("roots", "order-R singularity root system");
    int rt_order = 2;
    std::string rt_out;
    rt->add_option("--order-R", rt_order, "order (1..8)");
    rt->add_option("-o,--output", rt_out, "CSV path (default stdout)");

    auto* sm = app.add_subcommand("simulate", "Monte Carlo avoidance vs determinant");
    std::vector<double> sm_starts = {-0.2, 0.2}, sm_ends = {-1.0, 1.0},
                        sm_region = {-0.1, 0.1};
    double sm_time = 0.5;
    long long sm_samples = 100000;
    std::uint64_t sm_seed = 1;
    int sm_grid = 32;
    std::string sm_out;
    sm->add_option("--starts", sm_starts, "start points")->delimiter(',');
    sm->add_option("--ends", sm_ends, "end points")->delimiter(',');
    sm->add_option("--time", sm_time, "observation time in (0,1)");
    sm->add_option("--region", sm_region, "avoided interval lo,hi")->delimiter(',')->expected(2);
    sm->add_option("--samples", sm_samples, "accepted-sample target");
    sm->add_option("--seed", sm_seed, "RNG seed");
    sm->add_option("--grid-steps", sm_grid, "bridge discretization steps");
    sm->add_option("-o,--output", sm_out, "CSV path (default stdout)");

    auto* st = app.add_subcommand("selftest", "run the quick property suite");
    (void)st;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nrun with --help for usage\n";
        return 2;
    }
    if (threads > 0) set_max_threads(threads);

    try {
        if (fn->parsed())
            return run_fn(fn_tau, fn_order, fn_higher, fn_lo, fn_hi, fn_points, fn_derivs,
                          fn_out, fn_svg);
        if (kn->parsed())
            return run_kernel(kn_scenario, kn_taus, kn_i, kn_j, kn_lo, kn_hi, kn_points,
                              kn_diag, kn_out, kn_svg);
        if (gp->parsed()) return run_gap(gp_scenario, gp_out);
        if (cv->parsed())
            return run_converge(cv_ns, cv_box.at(0), cv_box.at(1), cv_grid, cv_taus, cv_out,
                                cv_svg);
        if (pc->parsed()) return run_pde_check(pc_scenario, pc_h, pc_out);
        if (rt->parsed()) return run_roots(rt_order, rt_out);
        if (sm->parsed())
            return run_simulate(sm_starts, sm_ends, sm_time, sm_region, sm_samples, sm_seed,
                                sm_grid, sm_out);
        return run_selftest();
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << " (residual " << e.residual() << ")\n";
        return 3;
    } catch (const json::exception& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
