#pragma once

#include <array>
#include <vector>

#include "iontrap/model.hpp"

namespace iontrap::laplace {

// Axis-aligned electrode rectangle in the x-y cross-section. A degenerate
// rectangle with y_lo == y_hi models an infinitesimally thin electrode
// occupying a single node row.
struct Rect2D {
    double x_lo, x_hi, y_lo, y_hi;  // meters
    double volts;
};

struct ElectrodeLayout2D {
    std::vector<Rect2D> rects;
    double half_x, half_y;  // bounding box half-extent, meters
    double v_scale;         // max |electrode potential|, for tolerances
    bool thin = false;
    // smallest y feature (gap or layer thickness) the grid must resolve with
    // at least four nodes; 0 disables the solver's coarseness check
    double min_resolve_y = 0.0;
};

// Four-electrode cross-section with +-V0/2 on diagonal pairs (TopLeft and
// BottomRight positive). Box must span at least 2a in each direction
// (half extents >= a). Thin mode collapses each layer to the line y = +-d/2.
ElectrodeLayout2D build_layout_2d(const TrapGeometry& geom, const DriveConfig& drive,
                                  double half_x, double half_y, bool thin = false);

struct Box3D {
    double x_lo, x_hi, y_lo, y_hi, z_lo, z_hi;  // meters
    double volts;
};

struct ElectrodeLayout3D {
    std::vector<Box3D> boxes;
    double half_x, half_y, half_z;
    double v_scale;
    double min_resolve_y = 0.0;
};

// One voltage per cantilever electrode: four lines (Quadrant order) times
// three z-segments.
struct VoltageMap12 {
    // segment index: 0 = end-cap at z < 0, 1 = center, 2 = end-cap at z > 0
    std::array<std::array<double, 3>, 4> volts{};

    // all segments driven at +-v0/2, diagonal pairing (the 2D RF pattern
    // continued uniformly in z)
    static VoltageMap12 rf_symmetric(double v0);
    // one diagonal pair at v0, the other grounded; same differential drive
    // with the physical common mode retained
    static VoltageMap12 rf_ground(double v0);
    // end-caps at u0, center electrodes at the per-quadrant offsets
    static VoltageMap12 static_trap(double u0, std::array<double, 4> center_offsets = {});
};

// Twelve boxes per Fig-2-style segmentation: centers span z in [-b/2, b/2],
// end-caps span [b/2+g, b/2+g+c] and its mirror.
ElectrodeLayout3D build_layout_3d(const TrapGeometry& geom, const VoltageMap12& map,
                                  double half_x, double half_y, double half_z);

} // namespace iontrap::laplace
