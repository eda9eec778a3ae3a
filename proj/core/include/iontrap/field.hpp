#pragma once

#include <cstdint>
#include <vector>

namespace iontrap::laplace {

enum class NodeKind : std::uint8_t {
    Interior = 0,   // unknown, updated by the solver
    Electrode = 1,  // Dirichlet node holding an electrode potential
    Boundary = 2,   // Dirichlet node on the outer bounding box
};

// Uniform node-centered grid. Node (i, j) sits at (x0 + i*hx, y0 + j*hy).
// Node counts are odd and the trap center x = y = 0 is always the middle
// node. All lengths in meters.
struct Grid2D {
    int nx = 0, ny = 0;
    double hx = 0.0, hy = 0.0;
    double x0 = 0.0, y0 = 0.0;

    static Grid2D centered(double half_x, double half_y, double hx, double hy);

    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
    int ci() const { return (nx - 1) / 2; }
    int cj() const { return (ny - 1) / 2; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

struct Grid3D {
    int nx = 0, ny = 0, nz = 0;
    double hx = 0.0, hy = 0.0, hz = 0.0;
    double x0 = 0.0, y0 = 0.0, z0 = 0.0;

    static Grid3D centered(double half_x, double half_y, double half_z, double hx,
                           double hy, double hz);

    double x(int i) const { return x0 + i * hx; }
    double y(int j) const { return y0 + j * hy; }
    double z(int k) const { return z0 + k * hz; }
    int ci() const { return (nx - 1) / 2; }
    int cj() const { return (ny - 1) / 2; }
    int ck() const { return (nz - 1) / 2; }
    std::size_t size() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
    std::size_t idx(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * ny + j) * nx + i;
    }
};

struct ScalarField2D {
    Grid2D grid;
    std::vector<double> values;  // volts
    std::vector<NodeKind> mask;

    double at(int i, int j) const { return values[grid.idx(i, j)]; }
    NodeKind kind(int i, int j) const { return mask[grid.idx(i, j)]; }
};

struct ScalarField3D {
    Grid3D grid;
    std::vector<double> values;
    std::vector<NodeKind> mask;

    double at(int i, int j, int k) const { return values[grid.idx(i, j, k)]; }
    NodeKind kind(int i, int j, int k) const { return mask[grid.idx(i, j, k)]; }
};

// Bilinear interpolation; exact at nodes. Throws OutOfDomain outside the grid.
double sample_field(const ScalarField2D& field, double x, double y);

// Trilinear interpolation.
double sample_field(const ScalarField3D& field, double x, double y, double z);

struct VectorField2D {
    Grid2D grid;
    std::vector<double> gx, gy;        // V/m
    std::vector<std::uint8_t> valid;   // 0 inside electrodes
};

// Central differences in the interior, second-order one-sided at the box
// edges. Nodes inside electrodes are flagged invalid.
VectorField2D gradient_field(const ScalarField2D& field);

// |grad V|^2 sampled at the nodes of the z-axis (x = y = 0), central
// differences. Returns one value per k.
std::vector<double> grad_squared_on_z_axis(const ScalarField3D& field);

} // namespace iontrap::laplace
