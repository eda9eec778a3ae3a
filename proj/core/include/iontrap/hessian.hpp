#pragma once

#include "iontrap/field.hpp"
#include "iontrap/model.hpp"

namespace iontrap::laplace {

// Second derivatives of U/u_scale at the trap center along the coordinate
// axes, from quadratic least-squares fits over the harmonic window
// |t| <= min(a/8, b/4) (>= 7 nodes). Units 1/m^2.
struct AxialCurvatures {
    double dx = 0.0, dy = 0.0, dz = 0.0;
};

// window = 0 picks the default min(a/8, b/4). Throws
// FitWindowOutsideVacuumRegion if an electrode or box node falls inside a fit
// window, GridTooCoarse if fewer than 7 nodes fit.
AxialCurvatures hessian_at_center(const ScalarField3D& field, const TrapGeometry& geom,
                                  double u_scale, double window = 0.0);

// Mixed second derivative of U/u_scale at the center from quadratic fits
// along the two diagonal node directions (handles hx != hy). Units 1/m^2.
double cross_curvature_xy(const ScalarField3D& field, const TrapGeometry& geom,
                          double u_scale, double window = 0.0);

// Harmonic z^2 coefficient of |grad V|^2 on the trap axis:
// H_z = (1/2) d^2/dz^2 |grad V|^2 at the origin, from a quadratic fit along
// the z-axis. Units V^2/m^4. Throws FitWindowSpansGap when the grid cannot
// place 7 nodes inside the fit window next to the center electrodes.
double axial_pseudo_curvature(const ScalarField3D& field, const TrapGeometry& geom,
                              double window = 0.0);

} // namespace iontrap::laplace
