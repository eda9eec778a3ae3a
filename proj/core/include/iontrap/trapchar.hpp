#pragma once

#include <string>
#include <vector>

#include "iontrap/hessian.hpp"
#include "iontrap/model.hpp"

namespace iontrap::trapchar {

// time-averaged pseudopotential energy (J) for a squared field gradient
double pseudopotential(double grad_v_sq, const DriveConfig& drive,
                       const IonSpecies& ion);

struct SecularResult {
    double omega_p = 0.0;  // rad/s
    double q = 0.0;        // 2 sqrt(2) omega_p / Omega_T
    bool adiabatic_warning = false;  // q >= 0.3
};

// transverse secular frequency from the quadrupole efficiency:
// omega_p = Q V0 eta / (sqrt(2) m Omega_T l_eff^2)
SecularResult secular_frequency_quadrupole(double eta, const TrapGeometry& geom,
                                           const DriveConfig& drive,
                                           const IonSpecies& ion);
SecularResult secular_frequency_quadrupole(double eta, double l_eff,
                                           const DriveConfig& drive,
                                           const IonSpecies& ion);

struct StaticFactors {
    double kappa = 0.0;       // D_z d_eff^2 / 2
    double epsilon = 0.0;     // -D_x / D_z
    double epsilon_alt = 0.0; // 1 + D_y / D_z
    bool consistency_flag = false;  // the two epsilon routes differ > 5%
};

// Maps fitted curvatures onto the ideal three-dimensional harmonic form.
// Throws NotAxiallyConfining when D_z <= 0.
StaticFactors static_characterization(const laplace::AxialCurvatures& d,
                                      const TrapGeometry& geom);
StaticFactors static_characterization(const laplace::AxialCurvatures& d, double d_eff);

// omega_z = sqrt(2 kappa Q U0 / (m d_eff^2)); scalars so table overrides work
double axial_frequency(double kappa, double d_eff, double u0, const IonSpecies& ion);

struct NetFrequencies {
    double omega_x = 0.0, omega_y = 0.0, omega_z = 0.0;  // rad/s
};

// quadrature sums omega_x^2 = omega_p^2 - eps omega_z^2,
// omega_y^2 = omega_p^2 - (1-eps) omega_z^2. Throws UnstableAxis when a
// radicand is non-positive (static anti-trapping beats RF confinement).
NetFrequencies net_frequencies(double omega_p, double omega_z, double epsilon);

struct NetPotentialParams {
    double omega_p = 0.0, omega_z = 0.0;
    double epsilon = 0.0;
    double sigma_z = 0.0;          // residual axial ponderomotive ratio
    bool include_sigma_z = false;  // off by default; the residual is small
    double mass = 0.0;             // kg
};

// total harmonic potential energy (J) at a point inside the harmonic region
// |x|,|y| <= a/8, |z| <= b/4. Throws OutsideHarmonicRegion beyond it.
double net_potential(double x, double y, double z, const TrapGeometry& geom,
                     const NetPotentialParams& p);

// rotation that diagonalizes the transverse quadratic form:
// theta = atan2(lambda, 2 eps - 1) / 2, reduced to (-pi/4, pi/4].
// Throws DegenerateRotation when lambda = 0 and eps = 1/2.
double principal_axis_angle(double epsilon, double lambda);

// anisotropy in the rotated frame: eps' = eps cos 2θ + (λ/2) sin 2θ + sin²θ
double rotated_anisotropy(double epsilon, double lambda, double theta);

struct PointChargeModel {
    double epsilon_pc = 0.0;
    double lambda_pc = 0.0;
    double theta_pc = 0.0;  // rad
};

// twelve corner charges q (end-caps) and q' (centers): closed forms for the
// anisotropy, cross-term and rotation angle as functions of q'/q and alpha
PointChargeModel point_charge_model(const TrapGeometry& geom, double q_ratio);

struct RotationResult {
    double theta = 0.0;    // rad, (-pi/4, pi/4]
    double lambda = 0.0;   // cross-term in the paper's normalization
    double epsilon = 0.0;
    double kappa = 0.0;
};

// principal-axis rotation extracted from a solved static field: axis and
// diagonal quadratic fits give the 2x2 transverse Hessian, whose eigenvector
// angle is returned. window <= 0 selects the default fit window.
RotationResult rotation_from_field(const laplace::ScalarField3D& field,
                                   const TrapGeometry& geom, double u_scale,
                                   double window = 0.0);

// one fully characterized design point (inputs + derived), Table-style
struct TrapCharacterization {
    TrapGeometry geom;
    DerivedRatios ratios;
    double v0 = 0.0, u0 = 0.0, f_rf_mhz = 0.0;
    double mass_amu = 0.0;
    int charge = 1;
    double eta = 0.0, epsilon = 0.0, kappa = 0.0;
    double sigma_z = 0.0;
    double omega_p = 0.0, omega_x = 0.0, omega_y = 0.0, omega_z = 0.0;  // rad/s
    double q = 0.0;
    double r_max = 0.0;      // meters; 0 when not computed
    double depth_kelvin = 0.0;
    double scaled_depth = 0.0;
    double theta_principal = 0.0;  // rad
    double epsilon_prime = 0.0;
    bool adiabatic_warning = false;
    bool epsilon_consistency_flag = false;
};

// frequencies etc. from already-known (eta, epsilon, kappa); l_eff/d_eff
// overrides (meters) replace the geometric values when positive
TrapCharacterization characterize_from_factors(const TrapGeometry& geom,
                                               const DriveConfig& drive,
                                               const IonSpecies& ion, double eta,
                                               double epsilon, double kappa,
                                               double l_eff_override = 0.0,
                                               double d_eff_override = 0.0);

// aligned-text table plus CSV rows for a set of characterized designs
std::string render_table_text(const std::vector<TrapCharacterization>& rows);
std::string render_table_csv(const std::vector<TrapCharacterization>& rows);

} // namespace iontrap::trapchar
