#include "iontrap/trapchar.hpp"

#include <cmath>
#include <cstdio>

#include "iontrap/constants.hpp"
#include "iontrap/error.hpp"

namespace iontrap::trapchar {

namespace {
constexpr double pi = constants::pi;
}

double pseudopotential(double grad_v_sq, const DriveConfig& drive,
                       const IonSpecies& ion) {
    if (grad_v_sq < 0.0) {
        throw Error(ErrorCode::InvalidInput, "squared gradient must be non-negative");
    }
    const double q = ion.charge_coulombs();
    return q * q * grad_v_sq / (4.0 * ion.mass * drive.omega_t * drive.omega_t);
}

SecularResult secular_frequency_quadrupole(double eta, double l_eff,
                                           const DriveConfig& drive,
                                           const IonSpecies& ion) {
    if (eta < 0.0 || l_eff <= 0.0) {
        throw Error(ErrorCode::InvalidInput, "eta must be >= 0 and l_eff positive");
    }
    SecularResult out;
    out.omega_p = ion.charge_coulombs() * drive.v0 * eta /
                  (std::sqrt(2.0) * ion.mass * drive.omega_t * l_eff * l_eff);
    out.q = 2.0 * std::sqrt(2.0) * out.omega_p / drive.omega_t;
    out.adiabatic_warning = out.q >= 0.3;
    return out;
}

SecularResult secular_frequency_quadrupole(double eta, const TrapGeometry& geom,
                                           const DriveConfig& drive,
                                           const IonSpecies& ion) {
    return secular_frequency_quadrupole(eta, derive_ratios(geom).l_eff, drive, ion);
}

StaticFactors static_characterization(const laplace::AxialCurvatures& d, double d_eff) {
    if (!(d.dz > 0.0)) {
        throw Error(ErrorCode::NotAxiallyConfining,
                    "static potential does not confine along z (D_z <= 0)");
    }
    StaticFactors out;
    out.kappa = d.dz * d_eff * d_eff / 2.0;
    out.epsilon = -d.dx / d.dz;
    out.epsilon_alt = 1.0 + d.dy / d.dz;
    out.consistency_flag =
        std::abs(out.epsilon - out.epsilon_alt) > 0.05 * std::abs(out.epsilon);
    return out;
}

StaticFactors static_characterization(const laplace::AxialCurvatures& d,
                                      const TrapGeometry& geom) {
    return static_characterization(d, derive_ratios(geom).d_eff);
}

double axial_frequency(double kappa, double d_eff, double u0, const IonSpecies& ion) {
    if (kappa < 0.0 || u0 < 0.0 || d_eff <= 0.0) {
        throw Error(ErrorCode::InvalidInput,
                    "axial frequency needs kappa, U0 >= 0 and d_eff > 0");
    }
    return std::sqrt(2.0 * kappa * ion.charge_coulombs() * u0 /
                     (ion.mass * d_eff * d_eff));
}

NetFrequencies net_frequencies(double omega_p, double omega_z, double epsilon) {
    const double wp2 = omega_p * omega_p;
    const double wz2 = omega_z * omega_z;
    const double x2 = wp2 - epsilon * wz2;
    const double y2 = wp2 - (1.0 - epsilon) * wz2;
    if (omega_z > 0.0 && x2 <= 0.0) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "x axis unstable: static defocusing eps*wz^2 = %.4g exceeds "
                      "wp^2 = %.4g (rad/s)^2",
                      epsilon * wz2, wp2);
        throw Error(ErrorCode::UnstableAxis, msg);
    }
    if (omega_z > 0.0 && y2 <= 0.0) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "y axis unstable: static defocusing (1-eps)*wz^2 = %.4g exceeds "
                      "wp^2 = %.4g (rad/s)^2",
                      (1.0 - epsilon) * wz2, wp2);
        throw Error(ErrorCode::UnstableAxis, msg);
    }
    NetFrequencies out;
    out.omega_x = std::sqrt(std::max(x2, 0.0));
    out.omega_y = std::sqrt(std::max(y2, 0.0));
    out.omega_z = omega_z;
    return out;
}

double net_potential(double x, double y, double z, const TrapGeometry& geom,
                     const NetPotentialParams& p) {
    if (std::abs(x) > geom.a / 8.0 || std::abs(y) > geom.a / 8.0 ||
        std::abs(z) > geom.b / 4.0) {
        throw Error(ErrorCode::OutsideHarmonicRegion,
                    "requested point lies outside |x|,|y| <= a/8, |z| <= b/4");
    }
    if (p.mass <= 0.0) {
        throw Error(ErrorCode::InvalidInput, "ion mass must be positive");
    }
    const double wp2 = p.omega_p * p.omega_p;
    const double wz2 = p.omega_z * p.omega_z;
    const double pseudo =
        0.5 * p.mass * (wp2 * (x * x + y * y) +
                        (p.include_sigma_z ? p.sigma_z * wp2 * z * z : 0.0));
    const double stat = 0.5 * p.mass * wz2 *
                        (-p.epsilon * x * x - (1.0 - p.epsilon) * y * y + z * z);
    return pseudo + stat;
}

double principal_axis_angle(double epsilon, double lambda) {
    const double denom = 2.0 * epsilon - 1.0;
    if (lambda == 0.0 && denom == 0.0) {
        throw Error(ErrorCode::DegenerateRotation,
                    "isotropic transverse potential: rotation angle undefined");
    }
    double theta = 0.5 * std::atan2(lambda, denom);
    if (theta > pi / 4.0) theta -= pi / 2.0;
    if (theta <= -pi / 4.0) theta += pi / 2.0;
    return theta;
}

double rotated_anisotropy(double epsilon, double lambda, double theta) {
    const double s = std::sin(theta);
    return epsilon * std::cos(2.0 * theta) + 0.5 * lambda * std::sin(2.0 * theta) +
           s * s;
}

PointChargeModel point_charge_model(const TrapGeometry& geom, double q_ratio) {
    if (q_ratio <= -1.0) {
        throw Error(ErrorCode::InvalidInput, "charge ratio q'/q must exceed -1");
    }
    const double a = geom.a, d = geom.d;
    const double tau = (1.0 - q_ratio) / (1.0 + q_ratio);
    PointChargeModel out;
    out.epsilon_pc = (2.0 * a * a - d * d) / (a * a + d * d);
    out.lambda_pc = 6.0 * tau * a * d / (a * a + d * d);
    out.theta_pc = 0.5 * std::atan2(2.0 * tau * a * d, a * a - d * d);
    if (out.theta_pc > pi / 4.0) out.theta_pc -= pi / 2.0;
    if (out.theta_pc <= -pi / 4.0) out.theta_pc += pi / 2.0;
    return out;
}

RotationResult rotation_from_field(const laplace::ScalarField3D& field,
                                   const TrapGeometry& geom, double u_scale,
                                   double window) {
    const laplace::AxialCurvatures d =
        laplace::hessian_at_center(field, geom, u_scale, window);
    const double cross = laplace::cross_curvature_xy(field, geom, u_scale, window);
    const StaticFactors f = static_characterization(d, geom);
    const DerivedRatios ratios = derive_ratios(geom);
    RotationResult out;
    out.epsilon = f.epsilon;
    out.kappa = f.kappa;
    // cross-term in the normalization that makes tan(2 theta) = lambda/(2e-1)
    out.lambda = -cross * ratios.d_eff * ratios.d_eff / f.kappa;
    double theta = 0.5 * std::atan2(2.0 * cross, d.dx - d.dy);
    if (theta > pi / 4.0) theta -= pi / 2.0;
    if (theta <= -pi / 4.0) theta += pi / 2.0;
    out.theta = theta;
    return out;
}

TrapCharacterization characterize_from_factors(const TrapGeometry& geom,
                                               const DriveConfig& drive,
                                               const IonSpecies& ion, double eta,
                                               double epsilon, double kappa,
                                               double l_eff_override,
                                               double d_eff_override) {
    TrapCharacterization out;
    out.geom = geom;
    out.ratios = derive_ratios(geom);
    const double l_eff = l_eff_override > 0.0 ? l_eff_override : out.ratios.l_eff;
    const double d_eff = d_eff_override > 0.0 ? d_eff_override : out.ratios.d_eff;
    out.v0 = drive.v0;
    out.u0 = drive.u0;
    out.f_rf_mhz = constants::mhz_from_rad_per_s(drive.omega_t);
    out.mass_amu = ion.mass / constants::atomic_mass_unit;
    out.charge = ion.charge;
    out.eta = eta;
    out.epsilon = epsilon;
    out.kappa = kappa;

    const SecularResult sec = secular_frequency_quadrupole(eta, l_eff, drive, ion);
    out.omega_p = sec.omega_p;
    out.q = sec.q;
    out.adiabatic_warning = sec.adiabatic_warning;
    out.omega_z = axial_frequency(kappa, d_eff, drive.u0, ion);
    const NetFrequencies net = net_frequencies(out.omega_p, out.omega_z, epsilon);
    out.omega_x = net.omega_x;
    out.omega_y = net.omega_y;
    return out;
}

namespace {

double to_mhz(double omega) { return constants::mhz_from_rad_per_s(omega); }

} // namespace

std::string render_table_csv(const std::vector<TrapCharacterization>& rows) {
    std::string out =
        "a,d,w,b,alpha,delta,l_eff,d_eff,eta,epsilon,kappa,V0,U0,"
        "f_p_MHz,f_x_MHz,f_y_MHz,f_z_MHz,q\n";
    char line[512];
    for (const TrapCharacterization& r : rows) {
        const double um = constants::um;
        std::snprintf(line, sizeof line,
                      "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,"
                      "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      r.geom.a / um, r.geom.d / um, r.geom.w / um, r.geom.b / um,
                      r.ratios.alpha, r.ratios.delta, r.ratios.l_eff / um,
                      r.ratios.d_eff / um, r.eta, r.epsilon, r.kappa, r.v0, r.u0,
                      to_mhz(r.omega_p), to_mhz(r.omega_x), to_mhz(r.omega_y),
                      to_mhz(r.omega_z), r.q);
        out += line;
    }
    return out;
}

std::string render_table_text(const std::vector<TrapCharacterization>& rows) {
    std::string out;
    char line[512];
    std::snprintf(line, sizeof line, "%8s %6s %6s %7s %7s %7s %7s %7s %7s %7s %7s\n",
                  "a(um)", "alpha", "delta", "eta", "eps", "kappa", "f_p", "f_x",
                  "f_y", "f_z", "q");
    out += line;
    for (const TrapCharacterization& r : rows) {
        std::snprintf(line, sizeof line,
                      "%8.3g %6.3g %6.3g %7.3g %7.3g %7.3g %7.3g %7.3g %7.3g %7.3g "
                      "%7.3g\n",
                      r.geom.a / constants::um, r.ratios.alpha, r.ratios.delta, r.eta,
                      r.epsilon, r.kappa, to_mhz(r.omega_p), to_mhz(r.omega_x),
                      to_mhz(r.omega_y), to_mhz(r.omega_z), r.q);
        out += line;
    }
    out += "frequencies in MHz\n";
    return out;
}

} // namespace iontrap::trapchar
