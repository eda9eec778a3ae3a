#include "doctest.h"

#include "iontrap/constants.hpp"
#include "iontrap/model.hpp"

using namespace iontrap;

TEST_CASE("derived ratios: aspect ratios and effective distances") {
    const TrapGeometry g = TrapGeometry::from_um(40, 10, 10, 100, 100, 2, 100);
    const DerivedRatios r = derive_ratios(g);
    CHECK(r.alpha == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(r.delta == doctest::Approx(1.0).epsilon(1e-15));
    // l_eff = sqrt((a/2)^2 + (d/2)^2)
    CHECK(r.l_eff / constants::um ==
          doctest::Approx(20.615528128088304).epsilon(1e-14));
    // d_eff = sqrt(l_eff^2 + (b/2 + g)^2)
    CHECK(r.d_eff / constants::um ==
          doctest::Approx(55.937465083787984).epsilon(1e-14));
}

TEST_CASE("derived ratios: thin-layer rows") {
    const TrapGeometry g2 = TrapGeometry::from_um(40, 2, 2, 100, 100, 2, 100);
    const DerivedRatios r2 = derive_ratios(g2);
    CHECK(r2.alpha == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(r2.l_eff / constants::um ==
          doctest::Approx(20.024984394500787).epsilon(1e-14));
    CHECK(r2.d_eff / constants::um ==
          doctest::Approx(55.72252686302013).epsilon(1e-14));

    const TrapGeometry g3 = TrapGeometry::from_um(80, 2, 2, 160, 100, 2, 100);
    const DerivedRatios r3 = derive_ratios(g3);
    CHECK(r3.alpha == doctest::Approx(40.0).epsilon(1e-15));
    CHECK(r3.l_eff / constants::um ==
          doctest::Approx(40.01249804748511).epsilon(1e-14));
    CHECK(r3.d_eff / constants::um ==
          doctest::Approx(91.2414379544733).epsilon(1e-14));
}

TEST_CASE("ion species: mass and charge") {
    const IonSpecies cd = IonSpecies::from_amu(111, 1);
    CHECK(cd.mass == doctest::Approx(111 * constants::atomic_mass_unit).epsilon(1e-15));
    CHECK(cd.charge_coulombs() ==
          doctest::Approx(constants::elementary_charge).epsilon(1e-15));
    const IonSpecies doubly = IonSpecies::from_amu(40, 2);
    CHECK(doubly.charge_coulombs() ==
          doctest::Approx(2 * constants::elementary_charge).epsilon(1e-15));
}

TEST_CASE("drive config: rf frequency conversion") {
    const DriveConfig d = DriveConfig::from_api(40.0, 50.0, 20.0, {});
    CHECK(d.v0 == 40.0);
    CHECK(d.u0 == 20.0);
    CHECK(d.omega_t == doctest::Approx(2.0 * constants::pi * 50.0e6).epsilon(1e-15));
}
