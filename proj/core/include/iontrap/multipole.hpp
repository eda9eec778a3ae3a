#pragma once

#include <utility>
#include <vector>

#include "iontrap/field.hpp"
#include "iontrap/model.hpp"

namespace iontrap::multipole {

// Harmonic content of a 2-D potential inside a disc of radius r0, in the
// frame whose x' axis lies along the positive-potential diagonal (45 degrees
// from the electrode layers). V(r, th') ~ v0 * sum_m [ c[m] (r/r0)^m cos(m th')
// + s[m] (r/r0)^m sin(m th') ]. Index = order; entry 0 is unused.
struct MultipoleExpansion {
    double r0 = 0.0;  // meters
    double v0 = 0.0;  // normalization voltage
    int order = 12;
    std::vector<double> c, s;

    double cos_coeff(int m) const { return c[m]; }
    double sin_coeff(int n) const { return s[n]; }
};

// Disc projection with Gauss-Legendre radial nodes (128) and uniform angular
// samples (256); field values by bilinear interpolation. Throws
// RadiusTouchesElectrode when r0 reaches the nearest electrode node.
MultipoleExpansion expand(const laplace::ScalarField2D& field, double v0, double r0,
                          int order = 12);

// Quadrupole efficiency 2 c2 l_eff^2 / r0^2 relative to ideal hyperbolic
// electrodes of radius l_eff.
double eta(const MultipoleExpansion& exp, const TrapGeometry& geom);

struct AnharmonicityReport {
    double r0 = 0.0;  // radius the ratios were evaluated at, meters
    double ratio_s4 = 0.0, ratio_c6 = 0.0, ratio_s8 = 0.0;  // relative to c2
    // |s4/c2| versus expansion radius, radius in meters
    std::vector<std::pair<double, double>> s4_curve;
};

// Leading anharmonic ratios at r0 = a/8 or at the pseudopotential barrier
// radius, plus the growth curve of |S4/C2| with radius.
AnharmonicityReport anharmonicity_report(const laplace::ScalarField2D& field,
                                         const TrapGeometry& geom, double v0,
                                         bool at_rmax, int order = 12);

struct DepthResult {
    double depth_kelvin = 0.0;  // barrier height for the supplied ion
    double scaled_depth = 0.0;  // K um^2/V^2, reference ion at the reference drive
    double r_max = 0.0;         // barrier position along +y, meters
};

// Scan the pseudopotential along the +y axis (weak direction): barrier height
// and position, with parabolic refinement between grid samples. r_max is
// capped at a/2. Throws MaxOnBoundary when the barrier sits against the
// bounding box (box too small to contain it).
DepthResult trap_depth_and_rmax(const laplace::ScalarField2D& field,
                                const TrapGeometry& geom, const DriveConfig& drive,
                                const IonSpecies& ion);

// barrier position and |grad V|^2 there, ion-independent part of the scan
struct BarrierScan {
    double r_max = 0.0;        // meters, capped at a/2
    double grad_sq_max = 0.0;  // V^2/m^2 at the barrier
};
BarrierScan scan_barrier(const laplace::ScalarField2D& field, const TrapGeometry& geom);

} // namespace iontrap::multipole
