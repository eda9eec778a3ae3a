#pragma once

// Physical constants (CODATA 2018) and unit conversions. All library
// internals work in SI; micrometers, MHz and amu appear only at the API
// boundary (input structs and CSV output).

namespace iontrap::constants {

constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
constexpr double epsilon0          = 8.8541878128e-12; // F/m
constexpr double boltzmann         = 1.380649e-23;     // J/K (exact)
constexpr double hbar              = 1.054571817e-34;  // J s
constexpr double atomic_mass_unit  = 1.66053906660e-27; // kg
constexpr double pi                = 3.14159265358979323846;

constexpr double um  = 1e-6;  // m
constexpr double mhz = 1e6;   // Hz

constexpr double meters(double micrometers) { return micrometers * um; }
constexpr double micrometers(double meters_) { return meters_ / um; }
constexpr double rad_per_s_from_mhz(double f_mhz) { return 2.0 * pi * f_mhz * mhz; }
constexpr double mhz_from_rad_per_s(double omega) { return omega / (2.0 * pi * mhz); }
constexpr double kg_from_amu(double amu) { return amu * atomic_mass_unit; }

} // namespace iontrap::constants
