#include <cmath>
#include <complex>
#include <limits>

#include "iontrap/analytic.hpp"
#include "iontrap/error.hpp"

namespace iontrap::analytic {

namespace {

constexpr double two_pi = 2.0 * constants::pi;

// Branch-point series around xi = -1/e, p = +-sqrt(2(e xi + 1)):
// W = -1 + p - p^2/3 + 11 p^3/72 - ...
Complex branch_point_series(Complex p) {
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

Complex initial_guess(int k, Complex xi) {
    const Complex ex1 = std::exp(1.0) * xi + 1.0;
    if ((k == 0 || k == -1) && std::abs(ex1) < 0.2) {
        // principal sqrt feeds branch 0; its negative feeds branch -1
        const Complex p = std::sqrt(2.0 * ex1);
        return branch_point_series(k == 0 ? p : -p);
    }
    if (k == 0 && std::abs(xi) < 0.6) {
        return xi * (1.0 - xi + 1.5 * xi * xi);  // Taylor series at 0
    }
    if (k == -1 && xi.imag() == 0.0 && xi.real() < 0.0 && xi.real() > -0.3678794411714423) {
        const double lx = std::log(-xi.real());
        return Complex(lx - std::log(-lx), 0.0);
    }
    const Complex l1 = std::log(xi) + Complex(0.0, two_pi * k);
    const Complex l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

} // namespace

Complex lambert_w(int k, Complex xi) {
    if (xi == 0.0) {
        if (k == 0) return Complex(0.0, 0.0);
        throw Error(ErrorCode::InvalidBranch, "W_k(0) diverges for k != 0");
    }
    Complex w = initial_guess(k, xi);
    const double scale = std::max(1.0, std::abs(xi));
    for (int it = 0; it < 100; ++it) {
        const Complex ew = std::exp(w);
        const Complex f = w * ew - xi;
        if (std::abs(f) <= 1e-14 * scale) return w;
        // Halley step
        const Complex wp1 = w + 1.0;
        Complex denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        if (denom == 0.0) denom = ew * wp1;
        const Complex step = f / denom;
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w)) {
            const Complex r = w * std::exp(w) - xi;
            if (std::abs(r) <= 1e-12 * scale) return w;
        }
    }
    const Complex r = w * std::exp(w) - xi;
    if (std::abs(r) <= 1e-12 * scale) return w;
    throw Error(ErrorCode::NoConvergence, "Lambert W Halley iteration stalled");
}

int select_branch(Complex zeta) {
    return static_cast<int>(std::ceil((zeta.imag() - constants::pi) / two_pi));
}

Complex lambert_w_of_exp(int k, Complex zeta) {
    // Moderate exponents: evaluate directly.
    if (zeta.real() < 500.0) {
        return lambert_w(k, std::exp(zeta));
    }
    // Large Re zeta: y ~ zeta', solve y + Log y = zeta' with
    // zeta' = zeta + 2 pi i (k - q); Newton, no overflow.
    const int q = select_branch(zeta);
    const Complex zp = zeta + Complex(0.0, two_pi * (k - q));
    Complex y = zp - std::log(zp);
    for (int it = 0; it < 60; ++it) {
        const Complex f = y + std::log(y) - zp;
        const Complex step = f * y / (y + 1.0);
        y -= step;
        if (std::abs(step) <= 1e-15 * std::abs(y)) return y;
    }
    throw Error(ErrorCode::NoConvergence, "log-space Lambert W Newton stalled");
}

} // namespace iontrap::analytic
