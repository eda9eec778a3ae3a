#include "iontrap/engineering.hpp"

#include <cmath>
#include <cstdio>

#include "iontrap/constants.hpp"
#include "iontrap/error.hpp"

namespace iontrap::engineering {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0)) {
        throw Error(ErrorCode::InvalidInput, std::string(name) + " must be positive");
    }
}

} // namespace

double cantilever_spring_constant(const TrapGeometry& geom, const MaterialProps& mat) {
    require_positive(mat.youngs_modulus, "Young's modulus");
    return mat.youngs_modulus * geom.w * geom.w * geom.w * geom.b /
           (4.0 * geom.h * geom.h * geom.h);
}

double capacitor_force(const TrapGeometry& geom, double v0) {
    return 0.5 * constants::epsilon0 * geom.h * geom.b * v0 * v0 / (geom.d * geom.d);
}

double tip_deflection(const TrapGeometry& geom, const MaterialProps& mat, double v0,
                      bool rf_reduced, double omega_t) {
    require_positive(mat.youngs_modulus, "Young's modulus");
    const double h4 = geom.h * geom.h * geom.h * geom.h;
    double x = 2.0 * constants::epsilon0 * h4 * v0 * v0 /
               (mat.youngs_modulus * geom.d * geom.d * geom.w * geom.w * geom.w);
    if (rf_reduced) {
        require_positive(omega_t, "drive frequency");
        const double w_vib = 2.0 * constants::pi * cantilever_resonance(geom, mat);
        x *= (w_vib * w_vib) / (omega_t * omega_t);
    }
    return x;
}

double cantilever_resonance(const TrapGeometry& geom, const MaterialProps& mat) {
    require_positive(mat.youngs_modulus, "Young's modulus");
    require_positive(mat.density, "density");
    return 0.162 * std::sqrt(mat.youngs_modulus / mat.density) * geom.w /
           (geom.h * geom.h);
}

double rf_power_dissipation(const MaterialProps& mat, const DriveConfig& drive) {
    if (mat.capacitance < 0.0 || mat.series_resistance < 0.0 || mat.loss_tangent < 0.0) {
        throw Error(ErrorCode::InvalidInput,
                    "capacitance, resistance and loss tangent must be non-negative");
    }
    const double rcw = mat.series_resistance * mat.capacitance * drive.omega_t;
    return 0.5 * drive.v0 * drive.v0 * mat.capacitance * drive.omega_t *
           (rcw + mat.loss_tangent);
}

double thermal_heating_rate(const IonSpecies& ion, const MaterialProps& mat,
                            double width, double z_dist, double omega_s) {
    require_positive(width, "electrode width");
    require_positive(z_dist, "ion-electrode distance");
    require_positive(omega_s, "secular frequency");
    if (mat.resistivity < 0.0 || mat.temperature < 0.0) {
        throw Error(ErrorCode::InvalidInput,
                    "resistivity and temperature must be non-negative");
    }
    const double e = constants::elementary_charge * ion.charge;
    const double resistance = mat.resistivity / width;
    return e * e * constants::boltzmann * mat.temperature * resistance /
           (ion.mass * z_dist * z_dist * constants::hbar * omega_s);
}

double resistivity_for_heating_rate(const IonSpecies& ion, const MaterialProps& mat,
                                    double width, double z_dist, double omega_s,
                                    double target_ndot) {
    require_positive(target_ndot, "target heating rate");
    MaterialProps probe = mat;
    probe.resistivity = 1.0;
    const double ndot_per_rho = thermal_heating_rate(ion, probe, width, z_dist, omega_s);
    return target_ndot / ndot_per_rho;
}

double breakdown_margin(const TrapGeometry& geom, double v0, const MaterialProps& mat) {
    require_positive(mat.breakdown_field, "breakdown field");
    return v0 / (geom.d * mat.breakdown_field);
}

EngineeringReport engineering_report(const TrapGeometry& geom, const DriveConfig& drive,
                                     const IonSpecies& ion, const MaterialProps& mat,
                                     const EngineeringInputs& in) {
    EngineeringReport rep;
    rep.spring_constant = cantilever_spring_constant(geom, mat);
    rep.capacitor_force_n = capacitor_force(geom, drive.v0);
    rep.max_deflection = tip_deflection(geom, mat, drive.v0);
    rep.resonant_freq = cantilever_resonance(geom, mat);
    const double w_vib = 2.0 * constants::pi * rep.resonant_freq;
    rep.lorentzian_reduction = (w_vib * w_vib) / (drive.omega_t * drive.omega_t);
    rep.deflection_at_rf = rep.max_deflection * rep.lorentzian_reduction;
    rep.power_dissipation = rf_power_dissipation(mat, drive);
    rep.power_dissipation_pair = 2.0 * rep.power_dissipation;
    rep.breakdown_margin = breakdown_margin(geom, drive.v0, mat);

    char buf[160];
    if (rep.lorentzian_reduction >= 1.0) {
        rep.warnings.emplace_back(
            "drive frequency at or below the cantilever resonance: "
            "electromechanical response is not suppressed");
    }
    const double rcw = mat.series_resistance * mat.capacitance * drive.omega_t;
    if (rcw > 0.1) {
        std::snprintf(buf, sizeof buf,
                      "R*C*Omega = %.3g is not small; dissipation formula assumes "
                      "R*C*Omega << 1",
                      rcw);
        rep.warnings.emplace_back(buf);
    }
    if (mat.loss_tangent > 0.1) {
        std::snprintf(buf, sizeof buf,
                      "loss tangent %.3g is not small; dissipation formula assumes "
                      "tan(delta) << 1",
                      mat.loss_tangent);
        rep.warnings.emplace_back(buf);
    }
    if (rep.breakdown_margin >= 1.0) {
        std::snprintf(buf, sizeof buf,
                      "V0 exceeds the layer-gap breakdown voltage (margin %.3g)",
                      rep.breakdown_margin);
        rep.warnings.emplace_back(buf);
    }

    if (in.z_dist > 0.0 && in.omega_s > 0.0) {
        rep.heating_rate =
            mat.resistivity > 0.0
                ? thermal_heating_rate(ion, mat, geom.w, in.z_dist, in.omega_s)
                : 0.0;
        rep.implied_resistivity = resistivity_for_heating_rate(
            ion, mat, geom.w, in.z_dist, in.omega_s, in.target_ndot);
        if (geom.w > 0.2 * in.z_dist) {
            std::snprintf(buf, sizeof buf,
                          "electrode width %.3g um is not small against the ion "
                          "distance %.3g um; R ~ rho/w loses validity",
                          geom.w * 1e6, in.z_dist * 1e6);
            rep.warnings.emplace_back(buf);
        }
    }
    return rep;
}

std::string render_engineering_text(const EngineeringReport& rep) {
    char buf[256];
    std::string out;
    auto line = [&](const char* k, double v, const char* unit) {
        std::snprintf(buf, sizeof buf, "%-26s %.6g %s\n", k, v, unit);
        out += buf;
    };
    line("spring_constant", rep.spring_constant, "N/m");
    line("capacitor_force", rep.capacitor_force_n, "N");
    line("max_deflection", rep.max_deflection * 1e9, "nm");
    line("deflection_at_rf", rep.deflection_at_rf * 1e9, "nm");
    line("resonant_freq", rep.resonant_freq / 1e3, "kHz");
    line("lorentzian_reduction", rep.lorentzian_reduction, "");
    line("power_dissipation", rep.power_dissipation * 1e3, "mW");
    line("power_dissipation_pair", rep.power_dissipation_pair * 1e3, "mW (both rails)");
    line("heating_rate", rep.heating_rate, "quanta/s");
    line("implied_resistivity", rep.implied_resistivity, "ohm m");
    line("breakdown_margin", rep.breakdown_margin, "");
    for (const std::string& w : rep.warnings) out += "warning: " + w + "\n";
    return out;
}

std::string render_engineering_csv(const EngineeringReport& rep) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "spring_constant_N_m,capacitor_force_N,max_deflection_nm,"
                  "deflection_at_rf_nm,resonant_freq_kHz,lorentzian_reduction,"
                  "power_dissipation_mW,power_dissipation_pair_mW,heating_rate_per_s,"
                  "implied_resistivity_ohm_m,breakdown_margin\n"
                  "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  rep.spring_constant, rep.capacitor_force_n,
                  rep.max_deflection * 1e9, rep.deflection_at_rf * 1e9,
                  rep.resonant_freq / 1e3, rep.lorentzian_reduction,
                  rep.power_dissipation * 1e3, rep.power_dissipation_pair * 1e3,
                  rep.heating_rate, rep.implied_resistivity, rep.breakdown_margin);
    return buf;
}

} // namespace iontrap::engineering
