#include "doctest.h"

#include <cmath>

#include "iontrap/analytic.hpp"
#include "iontrap/constants.hpp"
#include "iontrap/error.hpp"

using namespace iontrap;
using constants::pi;
using constants::um;

namespace {
const TrapGeometry kThin = TrapGeometry::from_um(40, 2, 2, 100, 100, 2, 100);
}

TEST_CASE("analytic potential: value at the trap center region") {
    // exact two-pair superposition, alpha = 20, V0 = 1
    const double phi = analytic::analytic_potential(1e-8, 2e-8, kThin, 1.0);
    CHECK(phi == doctest::Approx(-1.7878755359386991e-07).epsilon(1e-12));
    // the large-alpha arctangent form differs by O(ln(pi alpha)/(pi alpha))
    const double phi_at = analytic::arctangent_potential(1e-8, 2e-8, kThin, 1.0);
    CHECK(phi_at == doctest::Approx(-1.6434443679859526e-07).epsilon(1e-12));
    const double gap = std::abs(phi - phi_at) / std::abs(phi);
    CHECK(gap > 0.01);
    CHECK(gap < 0.10);
}

TEST_CASE("analytic potential: symmetries") {
    const double v0 = 7.0;
    for (const auto& p : {std::pair{1.0, 2.0}, {3.0, 5.0}, {0.5, 0.3}}) {
        const double u = p.first * um, v = p.second * um;
        const double phi = analytic::analytic_potential(u, v, kThin, v0);
        // even in u, odd in v
        CHECK(analytic::analytic_potential(-u, v, kThin, v0) ==
              doctest::Approx(phi).epsilon(1e-12));
        CHECK(analytic::analytic_potential(u, -v, kThin, v0) ==
              doctest::Approx(-phi).epsilon(1e-12));
    }
    CHECK(analytic::analytic_potential(3.0 * um, 0.0, kThin, v0) == 0.0);
}

TEST_CASE("analytic potential: continuous across the layer line v = d/2") {
    // v = d/2 maps to a Lambert branch-band edge; the inversion must land on
    // the physical strip on both sides and exactly on the line.
    const double u = 3.0 * um;
    const double on = analytic::analytic_potential(u, 1.0 * um, kThin, 1.0);
    const double below = analytic::analytic_potential(u, 0.9999 * um, kThin, 1.0);
    const double above = analytic::analytic_potential(u, 1.0001 * um, kThin, 1.0);
    CHECK(std::abs(on) < 0.5);  // a branch slip would put it near +-1.0
    CHECK(on == doctest::Approx(0.5 * (below + above)).epsilon(1e-4));
    // same at an odd multiple of d/2 on the symmetry axis: exactly zero there
    CHECK(analytic::analytic_potential(0.0, 5.0 * um, kThin, 1.0) == 0.0);
}

TEST_CASE("analytic potential: electrode guard and aspect-ratio guard") {
    CHECK_THROWS_AS(
        (void)analytic::analytic_potential(25.0 * um, 1.0 * um, kThin, 1.0), Error);
    const TrapGeometry fat = TrapGeometry::from_um(4, 2, 2, 100, 100, 2, 100);
    CHECK_THROWS_AS((void)analytic::analytic_potential(1e-8, 2e-8, fat, 1.0), Error);
    CHECK_THROWS_AS((void)analytic::arctangent_potential(1e-8, 2e-8, fat, 1.0), Error);
}

TEST_CASE("arctangent gradient matches finite differences") {
    const double u = 2.0 * um, v = 1.5 * um, v0 = 11.0, h = 1e-11;
    const auto g = analytic::arctangent_gradient(u, v, kThin, v0);
    const double du = (analytic::arctangent_potential(u + h, v, kThin, v0) -
                       analytic::arctangent_potential(u - h, v, kThin, v0)) /
                      (2.0 * h);
    const double dv = (analytic::arctangent_potential(u, v + h, kThin, v0) -
                       analytic::arctangent_potential(u, v - h, kThin, v0)) /
                      (2.0 * h);
    CHECK(g[0] == doctest::Approx(du).epsilon(1e-4));
    CHECK(g[1] == doctest::Approx(dv).epsilon(1e-4));
}

TEST_CASE("analytic eta: values and asymptote") {
    CHECK(analytic::analytic_eta(1.0) == doctest::Approx(1.3699544631).epsilon(1e-9));
    CHECK(analytic::analytic_eta(4.0) == doctest::Approx(0.3992129180).epsilon(1e-9));
    CHECK(analytic::analytic_eta(10.0) == doctest::Approx(0.3429802759).epsilon(1e-9));
    CHECK(analytic::analytic_eta(20.0) == doctest::Approx(0.3295108510).epsilon(1e-9));
    CHECK(analytic::analytic_eta(40.0) == doctest::Approx(0.3236392132).epsilon(1e-9));
    CHECK(std::abs(analytic::analytic_eta(1e6) - 1.0 / pi) < 1e-5);
    CHECK_THROWS_AS((void)analytic::analytic_eta(0.2), Error);
}

TEST_CASE("analytic r_max and depth") {
    CHECK(analytic::analytic_rmax(kThin) / um ==
          doctest::Approx(19.68169011381621).epsilon(1e-12));
    CHECK(analytic::scaled_depth_asymptote() ==
          doctest::Approx(2588.84438848431).epsilon(1e-10));
    // finite-alpha correction: scaled depth = asymptote / (1 - 1/(pi alpha))^2
    const DriveConfig drive = DriveConfig::from_api(20.0, 50.0, 0.0);
    const IonSpecies ion = IonSpecies::from_amu(111, 1);
    const auto dep = analytic::analytic_depth(kThin, drive, ion);
    const double corr = 1.0 - 1.0 / (20.0 * pi);
    CHECK(dep.scaled_depth ==
          doctest::Approx(analytic::scaled_depth_asymptote() / (corr * corr))
              .epsilon(1e-12));
    CHECK(dep.asymptotic_ok);
    // depth in kelvin for the reference ion ties back to the scaled value
    const double a_um = kThin.a / um;
    CHECK(dep.depth_kelvin * a_um * a_um / (drive.v0 * drive.v0) ==
          doctest::Approx(dep.scaled_depth).epsilon(1e-12));
}
