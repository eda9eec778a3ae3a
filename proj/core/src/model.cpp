#include "iontrap/model.hpp"

#include <cmath>
#include <string>

#include "iontrap/error.hpp"

namespace iontrap {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::BoundingBoxTooSmall: return "BoundingBoxTooSmall";
        case ErrorCode::GridTooCoarse: return "GridTooCoarse";
        case ErrorCode::GapTooSmallForGrid: return "GapTooSmallForGrid";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::RadiusTouchesElectrode: return "RadiusTouchesElectrode";
        case ErrorCode::MaxOnBoundary: return "MaxOnBoundary";
        case ErrorCode::FitWindowOutsideVacuumRegion: return "FitWindowOutsideVacuumRegion";
        case ErrorCode::FitWindowSpansGap: return "FitWindowSpansGap";
        case ErrorCode::OnElectrode: return "OnElectrode";
        case ErrorCode::InvalidBranch: return "InvalidBranch";
        case ErrorCode::NotAxiallyConfining: return "NotAxiallyConfining";
        case ErrorCode::UnstableAxis: return "UnstableAxis";
        case ErrorCode::DegenerateRotation: return "DegenerateRotation";
        case ErrorCode::OutsideHarmonicRegion: return "OutsideHarmonicRegion";
        case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "UnknownError";
}

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::InvalidInput,
                    std::string(name) + " must be positive and finite");
    }
}

} // namespace

TrapGeometry TrapGeometry::from_um(double a_um, double d_um, double w_um, double b_um,
                                   double c_um, double g_um, double h_um) {
    require_positive(a_um, "a");
    require_positive(d_um, "d");
    require_positive(w_um, "w");
    require_positive(b_um, "b");
    require_positive(c_um, "c");
    require_positive(g_um, "g");
    require_positive(h_um, "h");
    using constants::meters;
    return TrapGeometry{meters(a_um), meters(d_um), meters(w_um), meters(b_um),
                        meters(c_um), meters(g_um), meters(h_um)};
}

DerivedRatios derive_ratios(const TrapGeometry& geom) {
    DerivedRatios r;
    r.alpha = geom.a / geom.d;
    r.delta = geom.d / geom.w;
    r.l_eff = std::hypot(geom.a / 2.0, geom.d / 2.0);
    r.d_eff = std::hypot(r.l_eff, geom.b / 2.0 + geom.g);
    return r;
}

DriveConfig DriveConfig::from_api(double v0_volts, double f_rf_mhz, double u0_volts,
                                  std::array<double, 4> offsets) {
    if (v0_volts < 0.0 || u0_volts < 0.0) {
        throw Error(ErrorCode::InvalidInput, "V0 and U0 must be non-negative");
    }
    require_positive(f_rf_mhz, "f_rf_mhz");
    DriveConfig d;
    d.v0 = v0_volts;
    d.omega_t = constants::rad_per_s_from_mhz(f_rf_mhz);
    d.u0 = u0_volts;
    d.center_offsets = offsets;
    return d;
}

IonSpecies IonSpecies::from_amu(double mass_amu, int charge) {
    require_positive(mass_amu, "mass_amu");
    if (charge < 1) {
        throw Error(ErrorCode::InvalidInput, "charge must be >= 1");
    }
    return IonSpecies{constants::kg_from_amu(mass_amu), charge};
}

} // namespace iontrap
