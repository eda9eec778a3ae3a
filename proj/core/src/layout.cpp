#include "iontrap/layout.hpp"

#include <algorithm>
#include <cmath>

#include "iontrap/error.hpp"

namespace iontrap::laplace {

ElectrodeLayout2D build_layout_2d(const TrapGeometry& geom, const DriveConfig& drive,
                                  double half_x, double half_y, bool thin) {
    const double a = geom.a, d = geom.d, w = geom.w;
    if (half_x < a * (1.0 - 1e-12) || half_y < a * (1.0 - 1e-12)) {
        throw Error(ErrorCode::BoundingBoxTooSmall,
                    "cross-section bounding box must span at least 2a in each direction");
    }
    const double vp = drive.v0 / 2.0;
    const double y_top_lo = d / 2.0;
    const double y_top_hi = thin ? d / 2.0 : d / 2.0 + w;
    ElectrodeLayout2D lay;
    lay.half_x = half_x;
    lay.half_y = half_y;
    lay.thin = thin;
    lay.v_scale = std::abs(vp);
    lay.min_resolve_y = thin ? d : std::min(d, w);
    lay.rects = {
        {-half_x, -a / 2.0, y_top_lo, y_top_hi, +vp},   // top left
        {a / 2.0, half_x, y_top_lo, y_top_hi, -vp},     // top right
        {-half_x, -a / 2.0, -y_top_hi, -y_top_lo, -vp}, // bottom left
        {a / 2.0, half_x, -y_top_hi, -y_top_lo, +vp},   // bottom right
    };
    return lay;
}

VoltageMap12 VoltageMap12::rf_symmetric(double v0) {
    VoltageMap12 map;
    for (int s = 0; s < 3; ++s) {
        map.volts[Quadrant::TopLeft][s] = +v0 / 2.0;
        map.volts[Quadrant::BottomRight][s] = +v0 / 2.0;
        map.volts[Quadrant::TopRight][s] = -v0 / 2.0;
        map.volts[Quadrant::BottomLeft][s] = -v0 / 2.0;
    }
    return map;
}

VoltageMap12 VoltageMap12::rf_ground(double v0) {
    VoltageMap12 map;
    for (int s = 0; s < 3; ++s) {
        map.volts[Quadrant::TopLeft][s] = v0;
        map.volts[Quadrant::BottomRight][s] = v0;
        map.volts[Quadrant::TopRight][s] = 0.0;
        map.volts[Quadrant::BottomLeft][s] = 0.0;
    }
    return map;
}

VoltageMap12 VoltageMap12::static_trap(double u0, std::array<double, 4> center_offsets) {
    VoltageMap12 map;
    for (int q = 0; q < 4; ++q) {
        map.volts[q][0] = u0;
        map.volts[q][1] = center_offsets[q];
        map.volts[q][2] = u0;
    }
    return map;
}

ElectrodeLayout3D build_layout_3d(const TrapGeometry& geom, const VoltageMap12& map,
                                  double half_x, double half_y, double half_z) {
    const double a = geom.a, d = geom.d, w = geom.w;
    const double b = geom.b, c = geom.c, g = geom.g;
    const double lim = 2.0 * a * (1.0 - 1e-12);
    if (half_x < lim || half_y < lim || half_z < lim) {
        throw Error(ErrorCode::BoundingBoxTooSmall,
                    "3-D bounding box must extend at least 2a from the trap center "
                    "in every direction");
    }
    if (half_z <= b / 2.0 + g) {
        throw Error(ErrorCode::BoundingBoxTooSmall,
                    "bounding box ends before the end-cap electrodes begin");
    }

    ElectrodeLayout3D lay;
    lay.half_x = half_x;
    lay.half_y = half_y;
    lay.half_z = half_z;
    lay.min_resolve_y = std::min(d, w);

    const double x_lo[4] = {-half_x, a / 2.0, -half_x, a / 2.0};  // Quadrant order
    const double x_hi[4] = {-a / 2.0, half_x, -a / 2.0, half_x};
    const double y_lo[4] = {d / 2.0, d / 2.0, -d / 2.0 - w, -d / 2.0 - w};
    const double y_hi[4] = {d / 2.0 + w, d / 2.0 + w, -d / 2.0, -d / 2.0};
    // end caps are clipped at the box when c extends past it
    const double z_cap_hi = std::min(b / 2.0 + g + c, half_z);
    const double z_lo[3] = {-z_cap_hi, -b / 2.0, b / 2.0 + g};
    const double z_hi[3] = {-(b / 2.0 + g), b / 2.0, z_cap_hi};

    double v_scale = 0.0;
    for (int q = 0; q < 4; ++q) {
        for (int s = 0; s < 3; ++s) {
            const double volts = map.volts[q][s];
            lay.boxes.push_back({x_lo[q], x_hi[q], y_lo[q], y_hi[q], z_lo[s], z_hi[s], volts});
            v_scale = std::max(v_scale, std::abs(volts));
        }
    }
    lay.v_scale = v_scale;
    return lay;
}

} // namespace iontrap::laplace
