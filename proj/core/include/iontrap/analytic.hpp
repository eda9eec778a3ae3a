#pragma once

#include <array>
#include <complex>
#include <vector>

#include "iontrap/model.hpp"

// Closed-form results for infinitesimally thin electrode layers. The field
// of each facing electrode pair is a fringe field of a semi-infinite
// parallel-plate capacitor, obtained by inverting the conformal map
// w = (d/2pi)(z + e^z) with the complex Lambert W function; the two pairs
// are superposed. Valid for large aspect ratio (alpha >= 4 enforced,
// asymptotic_valid tag at alpha >= 10).

namespace iontrap::analytic {

using Complex = std::complex<double>;

// W_k(xi): solution y of y*exp(y) = xi on branch k
// (Im y in ((2k-1)pi, (2k+1)pi] up to standard cut conventions).
Complex lambert_w(int k, Complex xi);

// Branch index for the map inversion: k = ceil((Im zeta - pi)/(2 pi)).
int select_branch(Complex zeta);

// W_k(e^zeta) without forming e^zeta, solving y + Log y = zeta + 2 pi i (k - q)
// by Newton (q reduces Im zeta into the principal band). Safe for large
// Re zeta, which is the regime of the trap-center evaluation (Re zeta ~ alpha*pi).
Complex lambert_w_of_exp(int k, Complex zeta);

// Is the asymptotic treatment trustworthy for this aspect ratio?
inline bool asymptotic_valid(double alpha) { return alpha >= 10.0; }

// Exact superposed two-pair potential at w-plane point (u, v), in volts.
// u, v in meters. Throws OnElectrode on the electrode lines and
// InvalidInput below alpha = 4.
double analytic_potential(double u, double v, const TrapGeometry& geom, double v0);

// Large-alpha arctangent form of the same potential and its exact gradient.
double arctangent_potential(double u, double v, const TrapGeometry& geom, double v0);
std::array<double, 2> arctangent_gradient(double u, double v, const TrapGeometry& geom,
                                          double v0);

// eta = pi (alpha^2 + 1) / (alpha pi - 1)^2; -> 1/pi as alpha -> inf.
double analytic_eta(double alpha);

// r_max = (a/2)(1 - 1/(pi alpha)), meters.
double analytic_rmax(const TrapGeometry& geom);

struct AnalyticDepth {
    double depth_kelvin;    // psi(r_max)/k_B for the user's ion and drive
    double scaled_depth;    // depth * a^2 / V0^2 for 111Cd+ at 50 MHz, K um^2/V^2
    bool asymptotic_ok;     // alpha >= 10
};

AnalyticDepth analytic_depth(const TrapGeometry& geom, const DriveConfig& drive,
                             const IonSpecies& ion);

// Scaled-depth asymptote e^2/(4 m Omega^2 pi^2 k_B) for the reference ion,
// in K um^2/V^2 (the paper's Fig. 7 units).
double scaled_depth_asymptote();

struct ProfileSample {
    double v;      // position on the v (weak) axis, m
    double psi_j;  // pseudopotential, J
};

// psi along the v-axis from the arctangent-form gradient.
std::vector<ProfileSample> analytic_pseudopotential_profile(
    const std::vector<double>& v_points, const TrapGeometry& geom,
    const DriveConfig& drive, const IonSpecies& ion);

// Reference ion/frequency used for scaled-unit outputs.
inline constexpr double reference_mass_amu = 111.0;  // 111Cd+
inline constexpr double reference_f_rf_mhz = 50.0;

} // namespace iontrap::analytic
