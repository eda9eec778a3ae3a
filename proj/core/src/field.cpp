#include "iontrap/field.hpp"

#include <cmath>

#include "iontrap/error.hpp"

namespace iontrap::laplace {

namespace {

// nodes per half-axis, snapping the extent up to a whole number of cells
int half_count(double half, double h) {
    if (!(half > 0.0) || !(h > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "grid extents and spacings must be positive");
    }
    return static_cast<int>(std::ceil(half / h - 1e-9));
}

} // namespace

Grid2D Grid2D::centered(double half_x, double half_y, double hx, double hy) {
    Grid2D g;
    const int mx = half_count(half_x, hx);
    const int my = half_count(half_y, hy);
    g.nx = 2 * mx + 1;
    g.ny = 2 * my + 1;
    g.hx = hx;
    g.hy = hy;
    g.x0 = -mx * hx;
    g.y0 = -my * hy;
    return g;
}

Grid3D Grid3D::centered(double half_x, double half_y, double half_z, double hx, double hy,
                        double hz) {
    Grid3D g;
    const int mx = half_count(half_x, hx);
    const int my = half_count(half_y, hy);
    const int mz = half_count(half_z, hz);
    g.nx = 2 * mx + 1;
    g.ny = 2 * my + 1;
    g.nz = 2 * mz + 1;
    g.hx = hx;
    g.hy = hy;
    g.hz = hz;
    g.x0 = -mx * hx;
    g.y0 = -my * hy;
    g.z0 = -mz * hz;
    return g;
}

namespace {

// cell index and fractional coordinate, clamped so that points exactly on
// the last node interpolate from the final cell
void locate(double t, double t0, double h, int n, int& idx, double& frac,
            const char* axis) {
    const double s = (t - t0) / h;
    if (s < -1e-9 || s > n - 1 + 1e-9) {
        throw Error(ErrorCode::OutOfDomain,
                    std::string("sample point outside grid along ") + axis);
    }
    idx = static_cast<int>(std::floor(s));
    if (idx < 0) idx = 0;
    if (idx > n - 2) idx = n - 2;
    frac = s - idx;
}

} // namespace

double sample_field(const ScalarField2D& field, double x, double y) {
    const Grid2D& g = field.grid;
    int i, j;
    double fx, fy;
    locate(x, g.x0, g.hx, g.nx, i, fx, "x");
    locate(y, g.y0, g.hy, g.ny, j, fy, "y");
    const double v00 = field.at(i, j), v10 = field.at(i + 1, j);
    const double v01 = field.at(i, j + 1), v11 = field.at(i + 1, j + 1);
    return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) + v01 * (1 - fx) * fy +
           v11 * fx * fy;
}

double sample_field(const ScalarField3D& field, double x, double y, double z) {
    const Grid3D& g = field.grid;
    int i, j, k;
    double fx, fy, fz;
    locate(x, g.x0, g.hx, g.nx, i, fx, "x");
    locate(y, g.y0, g.hy, g.ny, j, fy, "y");
    locate(z, g.z0, g.hz, g.nz, k, fz, "z");
    double out = 0.0;
    for (int dk = 0; dk < 2; ++dk) {
        const double wz = dk ? fz : 1 - fz;
        for (int dj = 0; dj < 2; ++dj) {
            const double wy = dj ? fy : 1 - fy;
            for (int di = 0; di < 2; ++di) {
                const double wx = di ? fx : 1 - fx;
                out += wx * wy * wz * field.at(i + di, j + dj, k + dk);
            }
        }
    }
    return out;
}

VectorField2D gradient_field(const ScalarField2D& field) {
    const Grid2D& g = field.grid;
    VectorField2D out;
    out.grid = g;
    out.gx.assign(g.size(), 0.0);
    out.gy.assign(g.size(), 0.0);
    out.valid.assign(g.size(), 1);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t n = g.idx(i, j);
            if (field.mask[n] == NodeKind::Electrode) {
                out.valid[n] = 0;
                continue;
            }
            if (i == 0) {
                out.gx[n] = (-3 * field.at(0, j) + 4 * field.at(1, j) - field.at(2, j)) /
                            (2 * g.hx);
            } else if (i == g.nx - 1) {
                out.gx[n] = (3 * field.at(i, j) - 4 * field.at(i - 1, j) +
                             field.at(i - 2, j)) /
                            (2 * g.hx);
            } else {
                out.gx[n] = (field.at(i + 1, j) - field.at(i - 1, j)) / (2 * g.hx);
            }
            if (j == 0) {
                out.gy[n] = (-3 * field.at(i, 0) + 4 * field.at(i, 1) - field.at(i, 2)) /
                            (2 * g.hy);
            } else if (j == g.ny - 1) {
                out.gy[n] = (3 * field.at(i, j) - 4 * field.at(i, j - 1) +
                             field.at(i, j - 2)) /
                            (2 * g.hy);
            } else {
                out.gy[n] = (field.at(i, j + 1) - field.at(i, j - 1)) / (2 * g.hy);
            }
        }
    }
    return out;
}

std::vector<double> grad_squared_on_z_axis(const ScalarField3D& field) {
    const Grid3D& g = field.grid;
    const int ci = g.ci(), cj = g.cj();
    std::vector<double> out(g.nz, 0.0);
    for (int k = 0; k < g.nz; ++k) {
        const double gx = (field.at(ci + 1, cj, k) - field.at(ci - 1, cj, k)) / (2 * g.hx);
        const double gy = (field.at(ci, cj + 1, k) - field.at(ci, cj - 1, k)) / (2 * g.hy);
        double gz;
        if (k == 0) {
            gz = (-3 * field.at(ci, cj, 0) + 4 * field.at(ci, cj, 1) -
                  field.at(ci, cj, 2)) /
                 (2 * g.hz);
        } else if (k == g.nz - 1) {
            gz = (3 * field.at(ci, cj, k) - 4 * field.at(ci, cj, k - 1) +
                  field.at(ci, cj, k - 2)) /
                 (2 * g.hz);
        } else {
            gz = (field.at(ci, cj, k + 1) - field.at(ci, cj, k - 1)) / (2 * g.hz);
        }
        out[k] = gx * gx + gy * gy + gz * gz;
    }
    return out;
}

} // namespace iontrap::laplace
