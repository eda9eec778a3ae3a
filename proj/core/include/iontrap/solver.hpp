#pragma once

#include <array>

#include "iontrap/field.hpp"
#include "iontrap/layout.hpp"

namespace iontrap::laplace {

// Requested grid geometry; half extents are snapped up to whole spacings so
// that the center is a node.
struct GridSpec2D {
    double half_x, half_y;  // meters
    double hx, hy;          // meters
};

struct GridSpec3D {
    double half_x, half_y, half_z;
    double hx, hy, hz;
};

struct SolverOptions {
    double tol = 1e-8;        // scaled-residual threshold, relative to v_scale
    long max_sweeps = 1000000;
    int check_interval = 32;  // sweeps between residual evaluations
    double omega = 0.0;       // SOR relaxation factor; 0 picks the spectral estimate
    bool exploit_symmetry = true;  // fold mirror-symmetric layouts before solving
    // Slave the outer box faces to a 1/r monopole tail instead of grounding
    // them; removes the leading box-size error of compact charged layouts.
    // 3-D solves only; 2-D solves keep the grounded box.
    bool open_boundary = false;
};

struct SolveStats {
    long sweeps = 0;
    double residual = 0.0;   // final scaled residual, volts
    double omega = 0.0;
    std::array<bool, 3> folded{false, false, false};  // per axis x, y, z
};

// Red-black SOR solve of Laplace's equation with Dirichlet data from the
// layout (outer box clamped to 0 where not covered by an electrode).
// Throws NoConvergence if max_sweeps is exhausted, GridTooCoarse when the
// grid cannot resolve d or w with at least four nodes, and
// GapTooSmallForGrid when rasterized electrodes at different potentials
// become stencil neighbors.
ScalarField2D solve_laplace_2d(const ElectrodeLayout2D& layout, const GridSpec2D& spec,
                               const SolverOptions& opts = {}, SolveStats* stats = nullptr);

ScalarField3D solve_laplace_3d(const ElectrodeLayout3D& layout, const GridSpec3D& spec,
                               const SolverOptions& opts = {}, SolveStats* stats = nullptr);

} // namespace iontrap::laplace
