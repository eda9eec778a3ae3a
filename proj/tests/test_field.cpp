#include "doctest.h"

#include <cmath>

#include "iontrap/error.hpp"
#include "iontrap/field.hpp"

using namespace iontrap;
using laplace::Grid2D;
using laplace::Grid3D;
using laplace::NodeKind;

TEST_CASE("grid: centered construction keeps the origin on a node") {
    const Grid2D g = Grid2D::centered(10e-6, 5e-6, 1e-6, 0.5e-6);
    CHECK(g.nx % 2 == 1);
    CHECK(g.ny % 2 == 1);
    CHECK(g.nx == 21);
    CHECK(g.ny == 21);
    CHECK(g.x(g.ci()) == doctest::Approx(0.0).epsilon(0.0));
    CHECK(g.y(g.cj()) == doctest::Approx(0.0).epsilon(0.0));
    CHECK(g.x(0) == doctest::Approx(-10e-6).epsilon(1e-12));
    CHECK(g.x(g.nx - 1) == doctest::Approx(10e-6).epsilon(1e-12));

    const Grid3D g3 = Grid3D::centered(4e-6, 4e-6, 8e-6, 1e-6, 1e-6, 2e-6);
    CHECK(g3.nx == 9);
    CHECK(g3.nz == 9);
    CHECK(g3.z(g3.ck()) == doctest::Approx(0.0).epsilon(0.0));
}

TEST_CASE("sample_field: bilinear interpolation is exact on affine data") {
    laplace::ScalarField2D f;
    f.grid = Grid2D::centered(5e-6, 5e-6, 1e-6, 1e-6);
    f.values.resize(f.grid.size());
    f.mask.assign(f.grid.size(), NodeKind::Interior);
    auto lin = [](double x, double y) { return 3.0 + 2.0e6 * x - 1.5e6 * y; };
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i)
            f.values[f.grid.idx(i, j)] = lin(f.grid.x(i), f.grid.y(j));

    CHECK(laplace::sample_field(f, 0.0, 0.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(laplace::sample_field(f, 1.25e-6, -2.5e-6) ==
          doctest::Approx(lin(1.25e-6, -2.5e-6)).epsilon(1e-13));
    CHECK(laplace::sample_field(f, -4.999e-6, 4.999e-6) ==
          doctest::Approx(lin(-4.999e-6, 4.999e-6)).epsilon(1e-13));
    CHECK_THROWS_AS((void)laplace::sample_field(f, 5.01e-6, 0.0), Error);
}

TEST_CASE("grad_squared_on_z_axis: exact for a linear ramp along z") {
    laplace::ScalarField3D f;
    f.grid = Grid3D::centered(2e-6, 2e-6, 4e-6, 1e-6, 1e-6, 1e-6);
    f.values.resize(f.grid.size());
    f.mask.assign(f.grid.size(), NodeKind::Interior);
    const double slope = 2.5e5;  // V/m
    for (int k = 0; k < f.grid.nz; ++k)
        for (int j = 0; j < f.grid.ny; ++j)
            for (int i = 0; i < f.grid.nx; ++i)
                f.values[f.grid.idx(i, j, k)] = slope * f.grid.z(k);

    const auto gsq = laplace::grad_squared_on_z_axis(f);
    CHECK(static_cast<int>(gsq.size()) == f.grid.nz);
    for (int k = 1; k < f.grid.nz - 1; ++k)
        CHECK(gsq[k] == doctest::Approx(slope * slope).epsilon(1e-12));
}
