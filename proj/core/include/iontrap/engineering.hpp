#pragma once

#include <string>
#include <vector>

#include "iontrap/model.hpp"

namespace iontrap::engineering {

// center-cantilever spring constant k = E w^3 b / (4 h^3), N/m
double cantilever_spring_constant(const TrapGeometry& geom, const MaterialProps& mat);

// electrostatic pull between facing cantilevers F = eps0 h b V0^2 / (2 d^2), N
double capacitor_force(const TrapGeometry& geom, double v0);

// static tip deflection x_d = 2 eps0 h^4 V0^2 / (E d^2 w^3), meters; at RF
// drive the response is suppressed by the Lorentzian factor (w_vib/W_T)^2
double tip_deflection(const TrapGeometry& geom, const MaterialProps& mat, double v0,
                      bool rf_reduced = false, double omega_t = 0.0);

// fundamental flexural resonance f_vib = 0.162 sqrt(E/rho) w / h^2, Hz
double cantilever_resonance(const TrapGeometry& geom, const MaterialProps& mat);

// drive power lost per electrode P_d = (V0^2 C W_T / 2)(R C W_T + tan d), W
double rf_power_dissipation(const MaterialProps& mat, const DriveConfig& drive);

// motional quanta per second from Johnson noise of the electrode resistance
// R ~ rho_e / width: ndot = e^2 kB T (rho_e/w) / (m z^2 hbar w_s); width is
// the electrode layer thickness w
double thermal_heating_rate(const IonSpecies& ion, const MaterialProps& mat,
                            double width, double z_dist, double omega_s);

// resistivity that would produce a target heating rate (inverse of the above)
double resistivity_for_heating_rate(const IonSpecies& ion, const MaterialProps& mat,
                                    double width, double z_dist, double omega_s,
                                    double target_ndot);

// V0 / (d * E_bd): fraction of the breakdown voltage in use
double breakdown_margin(const TrapGeometry& geom, double v0,
                        const MaterialProps& mat);

struct EngineeringReport {
    double spring_constant = 0.0;       // N/m
    double capacitor_force_n = 0.0;     // N
    double max_deflection = 0.0;        // m, static
    double deflection_at_rf = 0.0;      // m, Lorentzian-suppressed
    double resonant_freq = 0.0;         // Hz
    double lorentzian_reduction = 0.0;  // (w_vib / W_T)^2
    double power_dissipation = 0.0;       // W, one driven rail
    double power_dissipation_pair = 0.0;  // W, both RF rails together
    double heating_rate = 0.0;          // quanta/s at the supplied resistivity
    double implied_resistivity = 0.0;   // ohm m reproducing target_ndot
    double breakdown_margin = 0.0;
    std::vector<std::string> warnings;
};

struct EngineeringInputs {
    double z_dist = 0.0;      // ion-electrode distance for heating, meters
    double omega_s = 0.0;     // secular frequency for heating, rad/s
    double target_ndot = 10.0;  // quanta/s for the implied-resistivity solve
};

EngineeringReport engineering_report(const TrapGeometry& geom, const DriveConfig& drive,
                                     const IonSpecies& ion, const MaterialProps& mat,
                                     const EngineeringInputs& in);

std::string render_engineering_text(const EngineeringReport& rep);
std::string render_engineering_csv(const EngineeringReport& rep);

} // namespace iontrap::engineering
