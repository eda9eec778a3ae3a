#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "iontrap/analytic.hpp"
#include "iontrap/constants.hpp"
#include "iontrap/error.hpp"

using namespace iontrap;
using analytic::Complex;
using constants::pi;

TEST_CASE("lambert w: branch-point and identity values") {
    CHECK(std::abs(analytic::lambert_w(0, {0.0, 0.0})) == 0.0);
    CHECK(std::abs(analytic::lambert_w(0, {std::exp(1.0), 0.0}) - 1.0) == 0.0);
    CHECK(std::abs(analytic::lambert_w(0, {-std::exp(-1.0), 0.0}) + 1.0) <= 1e-14);
    CHECK(std::abs(analytic::lambert_w(-1, {-std::exp(-1.0), 0.0}) + 1.0) <= 1e-14);
    CHECK_THROWS_AS((void)analytic::lambert_w(1, {0.0, 0.0}), Error);
}

TEST_CASE("lambert w: functional residual across branches and magnitudes") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> branch(-3, 3);
    std::uniform_real_distribution<double> logmag(-3.0, 3.0);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int i = 0; i < 2000; ++i) {
        const int k = branch(rng);
        const Complex xi = std::polar(std::pow(10.0, logmag(rng)), angle(rng));
        const Complex w = analytic::lambert_w(k, xi);
        const double res = std::abs(w * std::exp(w) - xi);
        CHECK(res <= 1e-12 * std::max(1.0, std::abs(xi)));
    }
}

TEST_CASE("select_branch: band convention ((2k-1)pi, (2k+1)pi]") {
    CHECK(analytic::select_branch({0.0, 0.0}) == 0);
    CHECK(analytic::select_branch({5.0, pi}) == 0);
    CHECK(analytic::select_branch({5.0, std::nextafter(pi, 4.0)}) == 1);
    CHECK(analytic::select_branch({5.0, -pi}) == -1);
    CHECK(analytic::select_branch({5.0, 2.0 * pi}) == 1);
    CHECK(analytic::select_branch({5.0, -2.0 * pi}) == -1);
    for (int k = -3; k <= 3; ++k) {
        const double im = 2.0 * pi * k + 0.3;
        CHECK(analytic::select_branch({1.0, im}) == k);
    }
}

TEST_CASE("lambert_w_of_exp: agrees with direct evaluation at moderate argument") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> re(-2.0, 6.0);
    std::uniform_real_distribution<double> im(-9.0, 9.0);
    for (int i = 0; i < 200; ++i) {
        const Complex zeta(re(rng), im(rng));
        const int k = analytic::select_branch(zeta);
        const Complex w = analytic::lambert_w_of_exp(k, zeta);
        const Complex xi = std::exp(zeta);
        const double res = std::abs(w * std::exp(w) - xi);
        CHECK(res <= 1e-12 * std::max(1.0, std::abs(xi)));
    }
}

TEST_CASE("lambert_w_of_exp: large real part stays finite and inverts the map") {
    // e^zeta overflows here; the solver must work in log space.
    const Complex zeta(700.0, 1.0);
    const int k = analytic::select_branch(zeta);
    const Complex w = analytic::lambert_w_of_exp(k, zeta);
    CHECK(std::isfinite(w.real()));
    CHECK(std::isfinite(w.imag()));
    // w + log w = zeta (mod 2 pi i): check against the branch the solver chose
    const Complex lhs = w + std::log(w);
    const double diff_im = std::remainder(lhs.imag() - zeta.imag(), 2.0 * pi);
    CHECK(lhs.real() == doctest::Approx(zeta.real()).epsilon(1e-12));
    CHECK(std::abs(diff_im) <= 1e-12 * std::abs(zeta.imag()) + 1e-12);
    // asymptotics: w ~ zeta - log zeta for large Re zeta
    CHECK(w.real() == doctest::Approx(zeta.real() - std::log(std::abs(zeta))).epsilon(1e-2));
}
