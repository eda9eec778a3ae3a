#include "iontrap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include "iontrap/analytic.hpp"
#include "iontrap/constants.hpp"
#include "iontrap/engineering.hpp"
#include "iontrap/error.hpp"
#include "iontrap/hessian.hpp"
#include "iontrap/layout.hpp"
#include "iontrap/multipole.hpp"

namespace iontrap::pipeline {

namespace {

using constants::um;

// config/invocation problems that should exit 1 instead of 2
struct UsageError {
    std::string msg;
};

void vlog(int verbose, const char* fmt, ...) {
    if (verbose <= 0) return;
    std::va_list ap;
    va_start(ap, fmt);
    std::fputs("iontrap: ", stderr);
    std::vfprintf(stderr, fmt, ap);
    std::fputc('\n', stderr);
    va_end(ap);
}

design::DesignFile load(const Options& opts) {
    if (opts.config_path.empty()) throw UsageError{"--config FILE is required"};
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) throw UsageError{"cannot open design file: " + opts.config_path};
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return design::parse_design(text);
}

void write_file(const Options& opts, const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) throw UsageError{"cannot create output directory: " + opts.out_dir};
    fs::path p = fs::path(opts.out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    if (!out) throw UsageError{"cannot write " + p.string()};
    vlog(opts.verbose, "wrote %s", p.string().c_str());
}

// primary CSV goes to stdout without --out, to a named file with it
void emit_csv(const Options& opts, const std::string& name, const std::string& content,
              bool primary) {
    if (!opts.out_dir.empty())
        write_file(opts, name, content);
    else if (primary)
        std::fwrite(content.data(), 1, content.size(), stdout);
}

template <typename F>
int run_guarded(const char* stage, int verbose, F&& body) {
    try {
        return body();
    } catch (const design::ParseError& e) {
        std::fprintf(stderr, "iontrap: %s: design file %s\n", stage, e.what());
        return 1;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "iontrap: %s: %s\n", stage, e.msg.c_str());
        return 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "iontrap: %s failed: %s\n", stage, e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "iontrap: %s failed: %s\n", stage, e.what());
        return 2;
    }
    (void)verbose;
}

laplace::SolverOptions solver_options(const design::DesignFile& d) {
    laplace::SolverOptions o;
    o.tol = d.solver.tol;
    o.max_sweeps = d.solver.max_sweeps;
    o.exploit_symmetry = d.solver.exploit_symmetry;
    o.open_boundary = d.solver.open_boundary;
    return o;
}

double static_scale(const design::DesignFile& d) {
    if (d.drive.u0 != 0.0) return d.drive.u0;
    for (double v : d.drive.center_offsets)
        if (v != 0.0) return v;
    return 0.0;
}

bool any_center_offset(const design::DesignFile& d) {
    for (double v : d.drive.center_offsets)
        if (v != 0.0) return true;
    return false;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

} // namespace

laplace::GridSpec2D make_grid_2d(const design::DesignFile& d) {
    const auto& g = d.geom;
    const auto& s = d.solver;
    double half = s.box_factor * g.a / 2.0;
    double feature = s.thin ? g.d : std::min(g.d, g.w);
    double h = s.h_um > 0.0 ? s.h_um * um : std::min(g.a / 32.0, feature / 4.0);
    double hy = s.hy_um > 0.0 ? s.hy_um * um : h;
    return {half, half, h, hy};
}

laplace::GridSpec3D make_grid_3d(const design::DesignFile& d) {
    const auto& g = d.geom;
    const auto& s = d.solver;
    double half = s.box_factor * g.a / 2.0;
    double feature = std::min(g.d, g.w);
    double h = s.h_um > 0.0 ? s.h_um * um : std::min(g.a / 16.0, feature / 2.0);
    double hy = s.hy_um > 0.0 ? s.hy_um * um : std::min(h, feature / 4.0);
    double half_z = s.box_z_um > 0.0 ? s.box_z_um * um / 2.0
                                     : std::max(2.0 * g.a, g.b / 2.0 + g.g + g.c + g.a);
    double hz = s.hz_um > 0.0 ? s.hz_um * um : h;
    return {half, half, half_z, h, hy, hz};
}

laplace::ScalarField2D solve_rf_2d(const design::DesignFile& d, laplace::SolveStats* stats) {
    auto spec = make_grid_2d(d);
    auto layout =
        laplace::build_layout_2d(d.geom, d.drive, spec.half_x, spec.half_y, d.solver.thin);
    return laplace::solve_laplace_2d(layout, spec, solver_options(d), stats);
}

laplace::ScalarField3D solve_static_3d(const design::DesignFile& d,
                                       laplace::SolveStats* stats) {
    auto spec = make_grid_3d(d);
    auto map = laplace::VoltageMap12::static_trap(d.drive.u0, d.drive.center_offsets);
    auto layout =
        laplace::build_layout_3d(d.geom, map, spec.half_x, spec.half_y, spec.half_z);
    return laplace::solve_laplace_3d(layout, spec, solver_options(d), stats);
}

laplace::ScalarField3D solve_rf_3d(const design::DesignFile& d, laplace::SolveStats* stats) {
    auto spec = make_grid_3d(d);
    auto map = d.solver.rf_mode == "symmetric"
                   ? laplace::VoltageMap12::rf_symmetric(d.drive.v0)
                   : laplace::VoltageMap12::rf_ground(d.drive.v0);
    auto layout =
        laplace::build_layout_3d(d.geom, map, spec.half_x, spec.half_y, spec.half_z);
    return laplace::solve_laplace_3d(layout, spec, solver_options(d), stats);
}

laplace::AxialCurvatures static_curvatures(const design::DesignFile& d,
                                           const laplace::ScalarField3D& f3,
                                           double u_scale, double window, int verbose) {
    auto curv = laplace::hessian_at_center(f3, d.geom, u_scale, window);
    if (!d.solver.richardson) return curv;
    auto spec = make_grid_3d(d);
    design::DesignFile coarse = d;
    coarse.solver.h_um = 2.0 * spec.hx / um;
    coarse.solver.hy_um = 2.0 * spec.hy / um;
    coarse.solver.hz_um = 2.0 * spec.hz / um;
    coarse.solver.box_z_um = 2.0 * spec.half_z / um;
    auto fc = solve_static_3d(coarse);
    auto cc = laplace::hessian_at_center(fc, d.geom, u_scale, window);
    curv.dx = (4.0 * curv.dx - cc.dx) / 3.0;
    curv.dy = (4.0 * curv.dy - cc.dy) / 3.0;
    curv.dz = (4.0 * curv.dz - cc.dz) / 3.0;
    vlog(verbose, "h/2h extrapolated curvatures: Dx = %.6g, Dy = %.6g, Dz = %.6g",
         curv.dx, curv.dy, curv.dz);
    return curv;
}

CharacterizeOutcome run_characterize(const design::DesignFile& d, int verbose) {
    CharacterizeOutcome out;
    const auto& geom = d.geom;
    double window = d.solver.fit_window_um * um;

    double eta_v = 0.0;
    double r_max = 0.0, depth_k = 0.0, scaled = 0.0;
    if (d.override_eta) {
        eta_v = *d.override_eta;
        vlog(verbose, "eta = %.6g (override)", eta_v);
    } else {
        laplace::SolveStats st;
        auto f2 = solve_rf_2d(d, &st);
        out.solved_2d = true;
        vlog(verbose, "2-D RF solve: %d x %d nodes, %ld sweeps, residual %.3e V",
             f2.grid.nx, f2.grid.ny, st.sweeps, st.residual);
        auto exp = multipole::expand(f2, d.drive.v0, d.solver.r0_frac * geom.a);
        eta_v = multipole::eta(exp, geom);
        auto dep = multipole::trap_depth_and_rmax(f2, geom, d.drive, d.ion);
        r_max = dep.r_max;
        depth_k = dep.depth_kelvin;
        scaled = dep.scaled_depth;
        vlog(verbose, "eta = %.6g, depth = %.6g K, r_max = %.6g um", eta_v, depth_k,
             r_max / um);
    }

    double eps_v = 0.0, kap_v = 0.0;
    bool cflag = false, have_rot = false;
    double theta = 0.0, eps_prime = 0.0;
    double u_scale = static_scale(d);
    if (d.override_epsilon && d.override_kappa) {
        eps_v = *d.override_epsilon;
        kap_v = *d.override_kappa;
        vlog(verbose, "epsilon = %.6g, kappa = %.6g (override)", eps_v, kap_v);
    } else if (u_scale != 0.0) {
        laplace::SolveStats st;
        auto f3 = solve_static_3d(d, &st);
        out.solved_3d = true;
        vlog(verbose, "3-D static solve: %d x %d x %d nodes, %ld sweeps, residual %.3e V",
             f3.grid.nx, f3.grid.ny, f3.grid.nz, st.sweeps, st.residual);
        auto curv = static_curvatures(d, f3, u_scale, window, verbose);
        auto sf = d.override_d_eff_um
                      ? trapchar::static_characterization(curv, *d.override_d_eff_um * um)
                      : trapchar::static_characterization(curv, geom);
        eps_v = d.override_epsilon ? *d.override_epsilon : sf.epsilon;
        kap_v = d.override_kappa ? *d.override_kappa : sf.kappa;
        cflag = sf.consistency_flag;
        vlog(verbose, "epsilon = %.6g (alt %.6g), kappa = %.6g", sf.epsilon, sf.epsilon_alt,
             sf.kappa);
        if (any_center_offset(d)) {
            auto rot = trapchar::rotation_from_field(f3, geom, u_scale, window);
            theta = rot.theta;
            eps_prime = trapchar::rotated_anisotropy(rot.epsilon, rot.lambda, rot.theta);
            have_rot = true;
            vlog(verbose, "principal-axis rotation: theta = %.6g deg, lambda = %.6g",
                 theta * 180.0 / constants::pi, rot.lambda);
        }
    } else {
        eps_v = d.override_epsilon.value_or(0.0);
        kap_v = d.override_kappa.value_or(0.0);
    }

    auto chr = trapchar::characterize_from_factors(
        geom, d.drive, d.ion, eta_v, eps_v, kap_v, d.override_l_eff_um.value_or(0.0) * um,
        d.override_d_eff_um.value_or(0.0) * um);
    chr.epsilon_consistency_flag = cflag;
    chr.r_max = r_max;
    chr.depth_kelvin = depth_k;
    chr.scaled_depth = scaled;
    if (have_rot) {
        chr.theta_principal = theta;
        chr.epsilon_prime = eps_prime;
    }

    if (d.solver.include_sigma_z) {
        laplace::SolveStats st;
        auto f3r = solve_rf_3d(d, &st);
        out.solved_sigma = true;
        vlog(verbose, "3-D RF solve (%s): %d x %d x %d nodes, %ld sweeps",
             d.solver.rf_mode.c_str(), f3r.grid.nx, f3r.grid.ny, f3r.grid.nz, st.sweeps);
        double hz = laplace::axial_pseudo_curvature(f3r, geom, window);
        double l = d.override_l_eff_um ? *d.override_l_eff_um * um : chr.ratios.l_eff;
        double sigma = hz * l * l * l * l / (d.drive.v0 * d.drive.v0 * eta_v * eta_v);
        chr.sigma_z = sigma;
        double wz2 = chr.omega_z * chr.omega_z + sigma * chr.omega_p * chr.omega_p;
        chr.omega_z = std::sqrt(std::max(0.0, wz2));
        vlog(verbose, "sigma_z = %.6g (axial curvature %.6g V^2/m^4)", sigma, hz);
    }

    out.chr = chr;
    return out;
}

std::string csv_field(const laplace::ScalarField2D& f) {
    std::string out = "x_um,y_um,V\n";
    out.reserve(f.grid.size() * 36 + 16);
    char buf[120];
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", f.grid.x(i) / um,
                          f.grid.y(j) / um, f.at(i, j));
            out += buf;
        }
    return out;
}

std::string csv_field(const laplace::ScalarField3D& f) {
    std::string out = "x_um,y_um,z_um,V\n";
    out.reserve(f.grid.size() * 44 + 16);
    char buf[160];
    for (int k = 0; k < f.grid.nz; ++k)
        for (int j = 0; j < f.grid.ny; ++j)
            for (int i = 0; i < f.grid.nx; ++i) {
                std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", f.grid.x(i) / um,
                              f.grid.y(j) / um, f.grid.z(k) / um, f.at(i, j, k));
                out += buf;
            }
    return out;
}

std::string csv_grad_sq_axis(const laplace::ScalarField3D& f) {
    auto g2 = laplace::grad_squared_on_z_axis(f);
    std::string out = "z_um,gradV_sq\n";
    char buf[80];
    for (int k = 0; k < f.grid.nz; ++k) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", f.grid.z(k) / um, g2[k]);
        out += buf;
    }
    return out;
}

int cmd_solve2d(const Options& opts) {
    return run_guarded("solve2d", opts.verbose, [&] {
        auto d = load(opts);
        laplace::SolveStats st;
        auto f = solve_rf_2d(d, &st);
        auto exp = multipole::expand(f, d.drive.v0, d.solver.r0_frac * d.geom.a);
        double eta_v = multipole::eta(exp, d.geom);

        std::string summary;
        char buf[200];
        std::snprintf(buf, sizeof buf, "grid: %d x %d nodes, h = (%.6g, %.6g) um\n",
                      f.grid.nx, f.grid.ny, f.grid.hx / um, f.grid.hy / um);
        summary += buf;
        std::snprintf(buf, sizeof buf,
                      "solve: %ld sweeps, residual %.3e V, omega %.4f, folded x=%d y=%d\n",
                      st.sweeps, st.residual, st.omega, int(st.folded[0]), int(st.folded[1]));
        summary += buf;
        std::snprintf(buf, sizeof buf, "expansion radius r0 = %.9g um\n", exp.r0 / um);
        summary += buf;
        std::snprintf(buf, sizeof buf, "c2 = %.9g\neta = %.9g\n", exp.cos_coeff(2), eta_v);
        summary += buf;

        std::string mp = "m,c_m,s_m\n";
        for (int m = 1; m <= exp.order; ++m)
            mp += std::to_string(m) + "," + num(exp.cos_coeff(m)) + "," +
                  num(exp.sin_coeff(m)) + "\n";

        emit_csv(opts, "field2d.csv", csv_field(f), /*primary=*/true);
        emit_csv(opts, "multipole.csv", mp, /*primary=*/false);
        if (!opts.out_dir.empty())
            std::fputs(summary.c_str(), stdout);
        else
            std::fputs(summary.c_str(), stderr);
        return 0;
    });
}

int cmd_solve3d(const Options& opts) {
    return run_guarded("solve3d", opts.verbose, [&] {
        auto d = load(opts);
        double u_scale = static_scale(d);
        if (u_scale == 0.0)
            throw UsageError{"static solve needs a nonzero u0 or center_offsets"};
        laplace::SolveStats st;
        auto f = solve_static_3d(d, &st);
        auto curv = static_curvatures(d, f, u_scale, d.solver.fit_window_um * um,
                                      opts.verbose);
        auto sf = trapchar::static_characterization(curv, d.geom);
        auto ratios = derive_ratios(d.geom);
        double wz = trapchar::axial_frequency(sf.kappa, ratios.d_eff, d.drive.u0, d.ion);

        std::string summary;
        char buf[240];
        std::snprintf(buf, sizeof buf, "grid: %d x %d x %d nodes, h = (%.6g, %.6g, %.6g) um\n",
                      f.grid.nx, f.grid.ny, f.grid.nz, f.grid.hx / um, f.grid.hy / um,
                      f.grid.hz / um);
        summary += buf;
        std::snprintf(buf, sizeof buf,
                      "solve: %ld sweeps, residual %.3e V, omega %.4f, folded x=%d y=%d z=%d\n",
                      st.sweeps, st.residual, st.omega, int(st.folded[0]), int(st.folded[1]),
                      int(st.folded[2]));
        summary += buf;
        std::snprintf(buf, sizeof buf, "D_x = %.9g 1/m^2\nD_y = %.9g 1/m^2\nD_z = %.9g 1/m^2\n",
                      curv.dx, curv.dy, curv.dz);
        summary += buf;
        std::snprintf(buf, sizeof buf, "kappa = %.9g\nepsilon = %.9g (alt %.9g)%s\n", sf.kappa,
                      sf.epsilon, sf.epsilon_alt,
                      sf.consistency_flag ? "  [consistency flag]" : "");
        summary += buf;
        std::snprintf(buf, sizeof buf, "f_z = %.9g MHz\n", constants::mhz_from_rad_per_s(wz));
        summary += buf;

        emit_csv(opts, "field3d.csv", csv_field(f), /*primary=*/true);
        if (d.solver.include_sigma_z && !opts.out_dir.empty()) {
            laplace::SolveStats str;
            auto fr = solve_rf_3d(d, &str);
            emit_csv(opts, "gradsq_z.csv", csv_grad_sq_axis(fr), /*primary=*/false);
        }
        if (!opts.out_dir.empty())
            std::fputs(summary.c_str(), stdout);
        else
            std::fputs(summary.c_str(), stderr);
        return 0;
    });
}

int cmd_analytic(const Options& opts) {
    return run_guarded("analytic", opts.verbose, [&] {
        auto d = load(opts);
        auto ratios = derive_ratios(d.geom);
        double eta_a = analytic::analytic_eta(ratios.alpha);
        double rm = analytic::analytic_rmax(d.geom);
        auto dep = analytic::analytic_depth(d.geom, d.drive, d.ion);

        std::vector<double> vs;
        const int npts = 121;
        for (int i = 0; i < npts; ++i)
            vs.push_back(0.6 * d.geom.a * i / (npts - 1));
        auto prof = analytic::analytic_pseudopotential_profile(vs, d.geom, d.drive, d.ion);
        std::string csv = "v_um,psi_K\n";
        for (const auto& p : prof)
            csv += num(p.v / um) + "," + num(p.psi_j / constants::boltzmann) + "\n";

        std::string summary;
        char buf[200];
        std::snprintf(buf, sizeof buf, "alpha = %.9g  (asymptotic_valid = %s)\n", ratios.alpha,
                      analytic::asymptotic_valid(ratios.alpha) ? "true" : "false");
        summary += buf;
        std::snprintf(buf, sizeof buf, "eta_analytic = %.9g  (large-alpha limit 1/pi = %.9g)\n",
                      eta_a, 1.0 / constants::pi);
        summary += buf;
        std::snprintf(buf, sizeof buf, "r_max = %.9g um\n", rm / um);
        summary += buf;
        std::snprintf(buf, sizeof buf, "depth = %.9g K\n", dep.depth_kelvin);
        summary += buf;
        std::snprintf(buf, sizeof buf,
                      "scaled depth = %.9g K um^2/V^2  (asymptote %.9g)\n", dep.scaled_depth,
                      analytic::scaled_depth_asymptote());
        summary += buf;

        emit_csv(opts, "analytic_profile.csv", csv, /*primary=*/true);
        if (!opts.out_dir.empty())
            std::fputs(summary.c_str(), stdout);
        else
            std::fputs(summary.c_str(), stderr);
        return 0;
    });
}

int cmd_characterize(const Options& opts) {
    return run_guarded("characterize", opts.verbose, [&] {
        auto d = load(opts);
        auto oc = run_characterize(d, opts.verbose);
        const auto& c = oc.chr;

        std::string text = trapchar::render_table_text({c});
        char buf[200];
        if (oc.solved_2d) {
            std::snprintf(buf, sizeof buf,
                          "r_max = %.6g um, depth = %.6g K, scaled depth = %.6g K um^2/V^2\n",
                          c.r_max / um, c.depth_kelvin, c.scaled_depth);
            text += buf;
        }
        if (d.solver.include_sigma_z) {
            std::snprintf(buf, sizeof buf, "sigma_z = %.6g (folded into f_z)\n", c.sigma_z);
            text += buf;
        }
        if (c.theta_principal != 0.0 || c.epsilon_prime != 0.0) {
            std::snprintf(buf, sizeof buf, "principal axes: theta = %.6g deg, eps' = %.6g\n",
                          c.theta_principal * 180.0 / constants::pi, c.epsilon_prime);
            text += buf;
        }
        if (c.adiabatic_warning)
            text += "note: q >= 0.3, adiabatic approximation marginal\n";
        if (c.epsilon_consistency_flag)
            text += "note: epsilon routes (-Dx/Dz vs 1+Dy/Dz) differ by more than 5%\n";

        std::fputs(text.c_str(), stdout);
        if (!opts.out_dir.empty())
            write_file(opts, "table.csv", trapchar::render_table_csv({c}));
        return 0;
    });
}

int cmd_engineering(const Options& opts) {
    return run_guarded("engineering", opts.verbose, [&] {
        auto d = load(opts);
        if (!d.has_material)
            throw UsageError{"engineering needs a [material] section in the design file"};
        engineering::EngineeringInputs in;
        in.z_dist = d.engineering.z_um * um;
        in.omega_s = d.engineering.f_s_mhz > 0.0
                         ? constants::rad_per_s_from_mhz(d.engineering.f_s_mhz)
                         : 0.0;
        in.target_ndot = d.engineering.target_ndot;
        auto rep = engineering::engineering_report(d.geom, d.drive, d.ion, d.material, in);
        std::fputs(engineering::render_engineering_text(rep).c_str(), stdout);
        if (!opts.out_dir.empty())
            write_file(opts, "engineering.csv", engineering::render_engineering_csv(rep));
        return 0;
    });
}

namespace {

struct SweepRows {
    std::string eta, ratios, depth, eta_analytic, axial, rotation;
};

// evaluate one sweep point; returns the CSV rows it contributes
SweepRows eval_sweep_point(const design::DesignFile& base, const std::string& param,
                           double value) {
    SweepRows out;
    char buf[200];
    if (param == "alpha" || param == "delta") {
        design::DesignFile di = base;
        if (param == "alpha")
            di.geom.a = value * base.geom.d;
        else
            di.geom.w = base.geom.d / value;
        auto f = solve_rf_2d(di);
        auto ratios = derive_ratios(di.geom);
        auto exp = multipole::expand(f, di.drive.v0, di.solver.r0_frac * di.geom.a);
        double eta_v = multipole::eta(exp, di.geom);
        auto anh = multipole::anharmonicity_report(f, di.geom, di.drive.v0, false);
        auto dep = multipole::trap_depth_and_rmax(f, di.geom, di.drive, di.ion);
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", ratios.alpha, ratios.delta, eta_v);
        out.eta = buf;
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g\n", ratios.alpha,
                      ratios.delta, anh.ratio_s4, anh.ratio_c6, anh.ratio_s8);
        out.ratios = buf;
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", ratios.alpha, ratios.delta,
                      dep.scaled_depth, dep.r_max / um);
        out.depth = buf;
        if (param == "alpha" && ratios.alpha >= 4.0) {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", ratios.alpha,
                          analytic::analytic_eta(ratios.alpha));
            out.eta_analytic = buf;
        }
    } else if (param == "b") {
        design::DesignFile di = base;
        di.geom.b = value * um;
        double u_scale = static_scale(di);
        auto f = solve_static_3d(di);
        auto curv =
            static_curvatures(di, f, u_scale, di.solver.fit_window_um * um, 0);
        auto sf = trapchar::static_characterization(curv, di.geom);
        auto ratios = derive_ratios(di.geom);
        double wz = trapchar::axial_frequency(sf.kappa, ratios.d_eff, di.drive.u0, di.ion);
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", value, sf.kappa, sf.epsilon,
                      constants::mhz_from_rad_per_s(wz));
        out.axial = buf;
    } else if (param == "center_voltage") {
        design::DesignFile di = base;
        di.drive.center_offsets = {value, 0.0, 0.0, value};
        double u_scale = di.drive.u0 != 0.0 ? di.drive.u0 : 1.0;
        auto f = solve_static_3d(di);
        auto rot = trapchar::rotation_from_field(f, di.geom, u_scale,
                                                 di.solver.fit_window_um * um);
        double epsp = trapchar::rotated_anisotropy(rot.epsilon, rot.lambda, rot.theta);
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", value,
                      rot.theta * 180.0 / constants::pi, rot.lambda, epsp);
        out.rotation = buf;
    }
    return out;
}

} // namespace

int cmd_sweep(const Options& opts) {
    return run_guarded("sweep", opts.verbose, [&] {
        auto d = load(opts);
        if (!d.sweep) throw UsageError{"sweep needs a [sweep] section in the design file"};
        const auto& sw = *d.sweep;
        const int n = sw.steps;
        std::vector<double> values(n);
        for (int i = 0; i < n; ++i)
            values[i] = n == 1 ? sw.from : sw.from + (sw.to - sw.from) * i / (n - 1.0);

        if (sw.parameter == "b" || sw.parameter == "center_voltage") {
            if (static_scale(d) == 0.0 && sw.parameter == "b")
                throw UsageError{"sweep over b needs a nonzero u0"};
        }

        std::vector<SweepRows> rows(n);

        if (sw.parameter == "r0") {
            // geometry fixed: one solve, then re-expansions per radius
            auto f = solve_rf_2d(d);
            char buf[200];
            for (int i = 0; i < n; ++i) {
                auto exp = multipole::expand(f, d.drive.v0, values[i] * um, 8);
                double c2 = exp.cos_coeff(2);
                std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", values[i],
                              std::fabs(exp.sin_coeff(4) / c2),
                              std::fabs(exp.cos_coeff(6) / c2),
                              std::fabs(exp.sin_coeff(8) / c2));
                rows[i].ratios = buf;
            }
        } else {
            int jobs = opts.jobs > 0 ? opts.jobs
                                     : int(std::thread::hardware_concurrency());
            jobs = std::max(1, std::min(jobs, n));
            std::atomic<int> next{0};
            std::vector<std::exception_ptr> errs(n);
            auto work = [&] {
                for (;;) {
                    int i = next.fetch_add(1);
                    if (i >= n) return;
                    try {
                        rows[i] = eval_sweep_point(d, sw.parameter, values[i]);
                    } catch (...) {
                        errs[i] = std::current_exception();
                    }
                }
            };
            if (jobs == 1) {
                work();
            } else {
                std::vector<std::thread> pool;
                for (int t = 0; t < jobs; ++t)
                    pool.emplace_back(work);
                for (auto& t : pool)
                    t.join();
            }
            for (int i = 0; i < n; ++i)
                if (errs[i]) {
                    std::fprintf(stderr, "iontrap: sweep point %d (%s = %.9g):\n", i,
                                 sw.parameter.c_str(), values[i]);
                    std::rethrow_exception(errs[i]);
                }
            vlog(opts.verbose, "sweep: %d points on %d worker(s)", n, jobs);
        }

        auto collect = [&](std::string SweepRows::*member, const char* header) {
            std::string out = header;
            bool any = false;
            for (const auto& r : rows) {
                out += r.*member;
                any = any || !(r.*member).empty();
            }
            return any ? out : std::string();
        };

        struct Stream {
            std::string SweepRows::*member;
            const char* file;
            const char* header;
            bool primary;
        };
        std::vector<Stream> streams;
        if (sw.parameter == "alpha" || sw.parameter == "delta") {
            streams.push_back({&SweepRows::eta, "eta.csv", "alpha,delta,eta\n", true});
            streams.push_back({&SweepRows::ratios, "ratios.csv",
                               "alpha,delta,ratio_S4,ratio_C6,ratio_S8\n", false});
            streams.push_back({&SweepRows::depth, "depth.csv",
                               "alpha,delta,scaled_depth_K_um2_per_V2,r_max_um\n", false});
            if (sw.parameter == "alpha")
                streams.push_back({&SweepRows::eta_analytic, "eta_analytic.csv",
                                   "alpha,eta_analytic\n", false});
        } else if (sw.parameter == "r0") {
            streams.push_back({&SweepRows::ratios, "ratios.csv",
                               "r0_um,ratio_S4,ratio_C6,ratio_S8\n", true});
        } else if (sw.parameter == "b") {
            streams.push_back(
                {&SweepRows::axial, "axial.csv", "b_um,kappa,epsilon,f_z_MHz\n", true});
        } else {
            streams.push_back({&SweepRows::rotation, "rotation.csv",
                               "center_voltage_V,theta_deg,lambda,epsilon_prime\n", true});
        }
        for (const auto& s : streams) {
            std::string content = collect(s.member, s.header);
            if (!content.empty()) emit_csv(opts, s.file, content, s.primary);
        }
        return 0;
    });
}

int run_command(const std::string& name, const Options& opts) {
    if (name == "solve2d") return cmd_solve2d(opts);
    if (name == "solve3d") return cmd_solve3d(opts);
    if (name == "analytic") return cmd_analytic(opts);
    if (name == "characterize") return cmd_characterize(opts);
    if (name == "sweep") return cmd_sweep(opts);
    if (name == "engineering") return cmd_engineering(opts);
    std::fprintf(stderr, "iontrap: unknown command '%s'\n", name.c_str());
    return 1;
}

} // namespace iontrap::pipeline
