#include "iontrap/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "iontrap/error.hpp"

namespace iontrap::laplace {

namespace {

double default_window(const TrapGeometry& geom) {
    return std::min(geom.a / 8.0, geom.b / 4.0);
}

// least-squares quadratic coefficient c2 of y(t) = c0 + c1 t + c2 t^2 over a
// symmetric set t = p*step, p = -n..n (odd moments vanish)
double quad_coefficient(const std::vector<double>& y, double step) {
    const int n = (static_cast<int>(y.size()) - 1) / 2;
    double s0 = 0.0, s2 = 0.0, s4 = 0.0, sy = 0.0, s2y = 0.0;
    for (int p = -n; p <= n; ++p) {
        const double t = p * step;
        const double t2 = t * t;
        const double v = y[p + n];
        s0 += 1.0;
        s2 += t2;
        s4 += t2 * t2;
        sy += v;
        s2y += t2 * v;
    }
    return (s0 * s2y - s2 * sy) / (s0 * s4 - s2 * s2);
}

// samples field along a node direction (di, dj, dk) from the center,
// p = -n..n, checking every node is vacuum
std::vector<double> sample_line(const ScalarField3D& f, int di, int dj, int dk, int n,
                                ErrorCode window_error, const char* what) {
    const Grid3D& g = f.grid;
    const int ci = g.ci(), cj = g.cj(), ck = g.ck();
    std::vector<double> y(2 * n + 1);
    for (int p = -n; p <= n; ++p) {
        const int i = ci + p * di, j = cj + p * dj, k = ck + p * dk;
        if (i < 0 || i >= g.nx || j < 0 || j >= g.ny || k < 0 || k >= g.nz ||
            f.kind(i, j, k) != NodeKind::Interior) {
            throw Error(window_error, std::string(what) +
                                          ": fit window leaves the vacuum region");
        }
        y[p + n] = f.at(i, j, k);
    }
    return y;
}

int window_nodes(double window, double h, const char* what, ErrorCode too_coarse) {
    const int n = static_cast<int>(std::floor(window / h * (1.0 + 1e-12)));
    if (n < 3) {
        throw Error(too_coarse, std::string(what) +
                                    ": fewer than 7 grid nodes fit in the quadratic "
                                    "fit window; refine the grid");
    }
    return n;
}

} // namespace

AxialCurvatures hessian_at_center(const ScalarField3D& field, const TrapGeometry& geom,
                                  double u_scale, double window) {
    if (u_scale == 0.0) {
        throw Error(ErrorCode::InvalidInput, "curvature normalization scale is zero");
    }
    if (window <= 0.0) window = default_window(geom);
    const Grid3D& g = field.grid;
    AxialCurvatures out;
    {
        const int n = window_nodes(window, g.hx, "x fit", ErrorCode::GridTooCoarse);
        const auto y =
            sample_line(field, 1, 0, 0, n, ErrorCode::FitWindowOutsideVacuumRegion, "x fit");
        out.dx = 2.0 * quad_coefficient(y, g.hx) / u_scale;
    }
    {
        const int n = window_nodes(window, g.hy, "y fit", ErrorCode::GridTooCoarse);
        const auto y =
            sample_line(field, 0, 1, 0, n, ErrorCode::FitWindowOutsideVacuumRegion, "y fit");
        out.dy = 2.0 * quad_coefficient(y, g.hy) / u_scale;
    }
    {
        const int n = window_nodes(window, g.hz, "z fit", ErrorCode::GridTooCoarse);
        const auto y =
            sample_line(field, 0, 0, 1, n, ErrorCode::FitWindowOutsideVacuumRegion, "z fit");
        out.dz = 2.0 * quad_coefficient(y, g.hz) / u_scale;
    }
    return out;
}

double cross_curvature_xy(const ScalarField3D& field, const TrapGeometry& geom,
                          double u_scale, double window) {
    if (u_scale == 0.0) {
        throw Error(ErrorCode::InvalidInput, "curvature normalization scale is zero");
    }
    if (window <= 0.0) window = default_window(geom);
    const Grid3D& g = field.grid;
    // one diagonal step moves (hx, +-hy); limit p so both coordinates stay
    // inside the window
    const double step_limit = std::max(g.hx, g.hy);
    const int n = window_nodes(window, step_limit, "xy fit", ErrorCode::GridTooCoarse);
    const auto yp = sample_line(field, 1, 1, 0, n,
                                ErrorCode::FitWindowOutsideVacuumRegion, "xy fit");
    const auto ym = sample_line(field, 1, -1, 0, n,
                                ErrorCode::FitWindowOutsideVacuumRegion, "xy fit");
    // fits against the integer step index p: d2/dp2 along the diagonals is
    // hx^2 Uxx + hy^2 Uyy +- 2 hx hy Uxy, so the difference isolates Uxy
    const double kp = 2.0 * quad_coefficient(yp, 1.0);
    const double km = 2.0 * quad_coefficient(ym, 1.0);
    return (kp - km) / (4.0 * g.hx * g.hy) / u_scale;
}

double axial_pseudo_curvature(const ScalarField3D& field, const TrapGeometry& geom,
                              double window) {
    if (window <= 0.0) window = default_window(geom);
    const Grid3D& g = field.grid;
    const int n_half = static_cast<int>(std::floor(window / g.hz * (1.0 + 1e-12)));
    if (n_half < 3) {
        throw Error(ErrorCode::FitWindowSpansGap,
                    "z fit window cannot hold 7 nodes clear of the electrode gaps; "
                    "refine hz or lengthen the center electrode");
    }
    const std::vector<double> on_axis = grad_squared_on_z_axis(field);
    const int ck = g.ck();
    if (ck - n_half - 1 < 0 || ck + n_half + 1 >= g.nz) {
        throw Error(ErrorCode::FitWindowSpansGap,
                    "z fit window leaves the solved domain");
    }
    std::vector<double> y(2 * n_half + 1);
    for (int p = -n_half; p <= n_half; ++p) y[p + n_half] = on_axis[ck + p];
    // |grad V|^2 ~ f0 + H_z z^2 near the center
    return quad_coefficient(y, g.hz);
}

} // namespace iontrap::laplace
