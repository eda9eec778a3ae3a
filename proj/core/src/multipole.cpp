#include "iontrap/multipole.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "iontrap/analytic.hpp"
#include "iontrap/constants.hpp"
#include "iontrap/error.hpp"

namespace iontrap::multipole {

namespace {

constexpr int kRadialNodes = 128;
constexpr int kAngularNodes = 256;

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const double pi = constants::pi;
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double t = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // recurrence (k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}
            double p0 = 1.0, p1 = t;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        const double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
}

double min_electrode_distance(const laplace::ScalarField2D& field) {
    const laplace::Grid2D& g = field.grid;
    double best = std::hypot(g.x(0), g.y(0));  // box corner as outer bound
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (field.mask[g.idx(i, j)] == laplace::NodeKind::Electrode) {
                best = std::min(best, std::hypot(g.x(i), g.y(j)));
            }
        }
    }
    return best;
}

} // namespace

MultipoleExpansion expand(const laplace::ScalarField2D& field, double v0, double r0,
                          int order) {
    if (!(r0 > 0.0) || order < 1 || !(v0 > 0.0)) {
        throw Error(ErrorCode::InvalidInput,
                    "expansion needs positive r0 and v0 and order >= 1");
    }
    const double clearance = min_electrode_distance(field);
    if (r0 >= clearance) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "expansion radius %.4g um reaches the nearest electrode node "
                      "at %.4g um",
                      r0 * 1e6, clearance * 1e6);
        throw Error(ErrorCode::RadiusTouchesElectrode, msg);
    }

    std::vector<double> gx, gw;
    gauss_legendre(kRadialNodes, gx, gw);

    const double pi = constants::pi;
    const double dth = 2.0 * pi / kAngularNodes;
    // angle tables: th' measured from the diagonal x' axis; sample point in
    // the electrode frame is rotated by -45 degrees
    std::vector<double> cth(kAngularNodes), sth(kAngularNodes);
    std::vector<double> cs(kAngularNodes), sn(kAngularNodes);
    for (int t = 0; t < kAngularNodes; ++t) {
        const double th = (t + 0.5) * dth;
        cs[t] = std::cos(th);
        sn[t] = std::sin(th);
        cth[t] = std::cos(th - pi / 4.0);
        sth[t] = std::sin(th - pi / 4.0);
    }

    MultipoleExpansion out;
    out.r0 = r0;
    out.v0 = v0;
    out.order = order;
    out.c.assign(order + 1, 0.0);
    out.s.assign(order + 1, 0.0);

    std::vector<double> cm(order + 1), sm(order + 1);
    for (int ri = 0; ri < kRadialNodes; ++ri) {
        const double r = 0.5 * r0 * (gx[ri] + 1.0);
        const double wr = 0.5 * r0 * gw[ri];
        std::fill(cm.begin(), cm.end(), 0.0);
        std::fill(sm.begin(), sm.end(), 0.0);
        for (int t = 0; t < kAngularNodes; ++t) {
            const double val = laplace::sample_field(field, r * cth[t], r * sth[t]);
            // cos/sin(m th) by recurrence
            double cprev = 1.0, sprev = 0.0;
            cm[0] += val;
            for (int m = 1; m <= order; ++m) {
                const double cnew = cprev * cs[t] - sprev * sn[t];
                const double snew = sprev * cs[t] + cprev * sn[t];
                cm[m] += val * cnew;
                sm[m] += val * snew;
                cprev = cnew;
                sprev = snew;
            }
        }
        const double radial = r * wr * dth;
        double pw = 1.0;  // (r/r0)^m
        for (int m = 0; m <= order; ++m) {
            const double norm = 2.0 * (m + 1) / (pi * v0 * r0 * r0);
            out.c[m] += norm * pw * cm[m] * radial;
            if (m >= 1) out.s[m] += norm * pw * sm[m] * radial;
            pw *= r / r0;
        }
    }
    out.c[0] = 0.0;  // convention: coefficients reported for m, n >= 1
    return out;
}

double eta(const MultipoleExpansion& exp, const TrapGeometry& geom) {
    const DerivedRatios ratios = derive_ratios(geom);
    return 2.0 * exp.c[2] * ratios.l_eff * ratios.l_eff / (exp.r0 * exp.r0);
}

BarrierScan scan_barrier(const laplace::ScalarField2D& field, const TrapGeometry& geom) {
    const laplace::Grid2D& g = field.grid;
    const int ci = g.ci(), cj = g.cj();
    // |grad V|^2 at nodes (ci, j) along +y; the x=0 column is vacuum
    auto grad_sq = [&](int j) {
        const double gx = (field.at(ci + 1, j) - field.at(ci - 1, j)) / (2.0 * g.hx);
        const double gy = (field.at(ci, j + 1) - field.at(ci, j - 1)) / (2.0 * g.hy);
        return gx * gx + gy * gy;
    };
    int j_best = cj;
    double f_best = -1.0;
    for (int j = cj; j <= g.ny - 2; ++j) {
        const double f = grad_sq(j);
        if (f > f_best) {
            f_best = f;
            j_best = j;
        }
    }
    if (j_best >= g.ny - 2 || j_best == cj) {
        throw Error(ErrorCode::MaxOnBoundary,
                    "pseudopotential barrier not contained: enlarge the bounding box");
    }
    const double fm = grad_sq(j_best - 1);
    const double f0 = grad_sq(j_best);
    const double fp = grad_sq(j_best + 1);
    const double den = fm - 2.0 * f0 + fp;
    double off = 0.0, f_peak = f0;
    if (den < 0.0) {  // genuine local max: refine between samples
        off = 0.5 * (fm - fp) / den;
        f_peak = f0 - 0.125 * (fm - fp) * (fm - fp) / den;
    }
    BarrierScan out;
    out.r_max = std::min(g.y(j_best) + off * g.hy, geom.a / 2.0);
    out.grad_sq_max = f_peak;
    return out;
}

DepthResult trap_depth_and_rmax(const laplace::ScalarField2D& field,
                                const TrapGeometry& geom, const DriveConfig& drive,
                                const IonSpecies& ion) {
    const BarrierScan scan = scan_barrier(field, geom);
    const double q_ion = ion.charge_coulombs();
    const double kin_user =
        q_ion * q_ion / (4.0 * ion.mass * drive.omega_t * drive.omega_t);

    const IonSpecies ref = IonSpecies::from_amu(analytic::reference_mass_amu, 1);
    const double omega_ref =
        constants::rad_per_s_from_mhz(analytic::reference_f_rf_mhz);
    const double kin_ref = constants::elementary_charge * constants::elementary_charge /
                           (4.0 * ref.mass * omega_ref * omega_ref);

    DepthResult out;
    out.r_max = scan.r_max;
    out.depth_kelvin = kin_user * scan.grad_sq_max / constants::boltzmann;
    const double depth_ref = kin_ref * scan.grad_sq_max / constants::boltzmann;
    const double a_um = geom.a / constants::um;
    const double v0 = drive.v0;
    out.scaled_depth = v0 > 0.0 ? depth_ref * a_um * a_um / (v0 * v0) : 0.0;
    return out;
}

AnharmonicityReport anharmonicity_report(const laplace::ScalarField2D& field,
                                         const TrapGeometry& geom, double v0,
                                         bool at_rmax, int order) {
    AnharmonicityReport rep;
    double r0 = geom.a / 8.0;
    if (at_rmax) {
        r0 = scan_barrier(field, geom).r_max;
        // the barrier can sit against electrode tips; expand just inside
        const double clearance = min_electrode_distance(field);
        if (r0 >= clearance) r0 = 0.999 * clearance;
    }
    rep.r0 = r0;
    const int m = std::max(order, 8);
    const MultipoleExpansion exp = expand(field, v0, r0, m);
    const double c2 = exp.c[2];
    rep.ratio_s4 = exp.s[4] / c2;
    rep.ratio_c6 = exp.c[6] / c2;
    rep.ratio_s8 = exp.s[8] / c2;

    // growth of the dominant term with radius, from a/16 up to r0
    const int steps = 12;
    for (int i = 1; i <= steps; ++i) {
        const double r = geom.a / 16.0 +
                         (r0 - geom.a / 16.0) * (i - 1) / double(steps - 1);
        if (r <= 0.0) continue;
        const MultipoleExpansion e = expand(field, v0, r, 4);
        rep.s4_curve.emplace_back(r, std::abs(e.s[4] / e.c[2]));
    }
    return rep;
}

} // namespace iontrap::multipole
