#pragma once

#include <array>

#include "iontrap/constants.hpp"

// Trap parameterization: two electrode layers separated vertically by d,
// each layer split into a left and a right cantilever whose tips face each
// other across a gap of width a. Layer slabs have thickness w (inner
// surfaces at y = +-d/2), and along the trap axis z each cantilever line is
// segmented into a center electrode of length b and two end-caps of length
// c, separated by gaps g. h is the cantilever overhang length used by the
// electromechanical estimates.

namespace iontrap {

struct TrapGeometry {
    // all lengths in meters
    double a;  // tip-to-tip separation between opposing cantilevers
    double d;  // vertical gap between the two layers
    double w;  // layer (cantilever) thickness
    double b;  // center electrode length along z
    double c;  // end-cap electrode length along z
    double g;  // gap between center electrode and each end-cap
    double h;  // cantilever overhang length

    static TrapGeometry from_um(double a_um, double d_um, double w_um, double b_um,
                                double c_um, double g_um, double h_um);
};

struct DerivedRatios {
    double alpha;  // a/d
    double delta;  // d/w
    double l_eff;  // sqrt((a/2)^2 + (d/2)^2), m
    double d_eff;  // sqrt(l_eff^2 + (b/2 + g)^2), m
};

DerivedRatios derive_ratios(const TrapGeometry& geom);

// The four cantilever lines seen in the x-y cross-section. "Top" is y > 0,
// "left" is x < 0. RF drive pairs them diagonally: (TopLeft, BottomRight)
// against (TopRight, BottomLeft).
enum Quadrant { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3 };

struct DriveConfig {
    double v0;       // RF amplitude between diagonal pairs, V
    double omega_t;  // RF drive angular frequency, rad/s
    double u0;       // static end-cap potential, V
    // static offsets added to the four center electrodes, indexed by Quadrant
    std::array<double, 4> center_offsets{0.0, 0.0, 0.0, 0.0};

    static DriveConfig from_api(double v0_volts, double f_rf_mhz, double u0_volts,
                                std::array<double, 4> offsets = {0.0, 0.0, 0.0, 0.0});
};

struct IonSpecies {
    double mass;  // kg
    int charge;   // integer multiple of e

    static IonSpecies from_amu(double mass_amu, int charge = 1);
    double charge_coulombs() const { return charge * constants::elementary_charge; }
};

struct MaterialProps {
    double youngs_modulus;    // Pa
    double density;           // kg/m^3
    double resistivity;       // ohm m
    double loss_tangent;      // dimensionless
    double series_resistance; // ohm
    double capacitance;       // F
    double temperature;       // K
    double breakdown_field = 4.0e7;  // V/m (40 V/um, Si/GaAs; nitride ~300 V/um)
};

} // namespace iontrap
