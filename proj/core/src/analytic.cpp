#include "iontrap/analytic.hpp"

#include <cmath>

#include "iontrap/error.hpp"

namespace iontrap::analytic {

namespace {

using constants::pi;

void check_alpha(double alpha) {
    if (alpha < 4.0) {
        throw Error(ErrorCode::InvalidInput,
                    "analytic model requires alpha >= 4 (thin-electrode asymptotics)");
    }
}

// A = a - d/pi, the effective plate separation of the arctangent form.
double plate_offset(const TrapGeometry& geom) { return geom.a - geom.d / pi; }

// Invert z + e^z = zeta onto the strip |Im z| <= pi, where the map is
// injective.  select_branch pins the Lambert branch by the band of Im zeta,
// but when Im zeta sits on a band edge (odd multiples of pi) floating-point
// exp can land on either side of the cut; if the preimage misses the strip
// by one sheet, the neighbouring branch holds the physical solution.
Complex invert_to_strip(const Complex& zeta) {
    const int k = select_branch(zeta);
    Complex z = zeta - lambert_w_of_exp(k, zeta);
    if (z.imag() > pi) {
        z = zeta - lambert_w_of_exp(k + 1, zeta);
    } else if (z.imag() <= -pi) {
        z = zeta - lambert_w_of_exp(k - 1, zeta);
    }
    return z;
}

} // namespace

double analytic_potential(double u, double v, const TrapGeometry& geom, double v0) {
    check_alpha(geom.a / geom.d);
    const double half_d = geom.d / 2.0;
    const double half_a = geom.a / 2.0;
    const double vtol = 1e-12 * geom.d;
    if (std::abs(std::abs(v) - half_d) <= vtol && std::abs(u) >= half_a * (1.0 - 1e-12)) {
        throw Error(ErrorCode::OnElectrode, "requested point lies on an electrode line");
    }
    const Complex w(u, v);
    const double offset = geom.a * pi / geom.d - 1.0;
    double sum_im = 0.0;
    for (const double sign : {1.0, -1.0}) {
        const Complex zeta = sign * 2.0 * pi * w / geom.d + offset;
        sum_im += invert_to_strip(zeta).imag();
    }
    return v0 / (2.0 * pi) * sum_im;
}

double arctangent_potential(double u, double v, const TrapGeometry& geom, double v0) {
    check_alpha(geom.a / geom.d);
    const double A = plate_offset(geom);
    return v0 / (2.0 * pi) *
           (std::atan(2.0 * v / (2.0 * u + A)) + std::atan(-2.0 * v / (A - 2.0 * u)));
}

std::array<double, 2> arctangent_gradient(double u, double v, const TrapGeometry& geom,
                                          double v0) {
    check_alpha(geom.a / geom.d);
    const double A = plate_offset(geom);
    const double p = 2.0 * u + A;
    const double m = A - 2.0 * u;
    const double dp = p * p + 4.0 * v * v;
    const double dm = m * m + 4.0 * v * v;
    const double phi_u = -(2.0 * v0 * v / pi) * (1.0 / dp + 1.0 / dm);
    const double phi_v = (v0 / pi) * (p / dp - m / dm);
    return {phi_u, phi_v};
}

double analytic_eta(double alpha) {
    if (alpha <= 1.0 / pi) {
        throw Error(ErrorCode::InvalidInput, "alpha must exceed 1/pi");
    }
    return pi * (alpha * alpha + 1.0) / ((alpha * pi - 1.0) * (alpha * pi - 1.0));
}

double analytic_rmax(const TrapGeometry& geom) {
    const double alpha = geom.a / geom.d;
    if (alpha <= 1.0 / pi) {
        throw Error(ErrorCode::InvalidInput, "alpha must exceed 1/pi");
    }
    return geom.a / 2.0 * (1.0 - 1.0 / (pi * alpha));
}

double scaled_depth_asymptote() {
    using namespace constants;
    const double m = kg_from_amu(reference_mass_amu);
    const double omega = rad_per_s_from_mhz(reference_f_rf_mhz);
    const double k_um2 = elementary_charge * elementary_charge /
                         (4.0 * m * omega * omega * pi * pi * boltzmann);
    return k_um2 / (um * um);  // K m^2/V^2 -> K um^2/V^2
}

AnalyticDepth analytic_depth(const TrapGeometry& geom, const DriveConfig& drive,
                             const IonSpecies& ion) {
    const double alpha = geom.a / geom.d;
    if (alpha <= 1.0 / pi) {
        throw Error(ErrorCode::InvalidInput, "alpha must exceed 1/pi");
    }
    const double qc = ion.charge_coulombs();
    const double corr = 1.0 - 1.0 / (alpha * pi);
    const double psi = qc * qc * drive.v0 * drive.v0 /
                       (4.0 * ion.mass * drive.omega_t * drive.omega_t * geom.a * geom.a *
                        pi * pi * corr * corr);
    AnalyticDepth out;
    out.depth_kelvin = psi / constants::boltzmann;
    out.scaled_depth = scaled_depth_asymptote() / (corr * corr);
    out.asymptotic_ok = asymptotic_valid(alpha);
    return out;
}

std::vector<ProfileSample> analytic_pseudopotential_profile(
    const std::vector<double>& v_points, const TrapGeometry& geom,
    const DriveConfig& drive, const IonSpecies& ion) {
    check_alpha(geom.a / geom.d);
    const double qc = ion.charge_coulombs();
    const double kin = qc * qc / (4.0 * ion.mass * drive.omega_t * drive.omega_t);
    std::vector<ProfileSample> out;
    out.reserve(v_points.size());
    for (const double v : v_points) {
        const auto grad = arctangent_gradient(0.0, v, geom, drive.v0);
        out.push_back({v, kin * (grad[0] * grad[0] + grad[1] * grad[1])});
    }
    return out;
}

} // namespace iontrap::analytic
