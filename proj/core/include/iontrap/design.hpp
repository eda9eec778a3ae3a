#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "iontrap/model.hpp"

namespace iontrap::design {

// [solver] block: grid construction and solve control. Zeros mean "derive
// from the geometry".
struct SolverConfig {
    double h_um = 0.0;           // base spacing; auto = min(a/32, feature/4)
    double hy_um = 0.0;
    double hz_um = 0.0;          // finer y spacing for 3-D solves; auto
    double box_factor = 4.0;     // x/y box extent in units of a
    double box_z_um = 0.0;       // total z extent; auto fits the end-caps
    double tol = 1e-8;
    long max_sweeps = 1000000;
    bool thin = false;           // collapse layers to single node rows (2-D)
    bool exploit_symmetry = true;
    std::string rf_mode = "ground";  // 3-D RF map: pair at V0 vs 0 ("ground"),
                                     // or antisymmetric +-V0/2 ("symmetric")
    double r0_frac = 0.125;      // expansion radius / a
    double fit_window_um = 0.0;  // curvature-fit half window; auto min(a/8,b/4)
    bool include_sigma_z = false;
    bool richardson = false;     // h/2h extrapolation of static curvatures
    bool open_boundary = true;   // monopole-matched box faces on 3-D solves
};

struct SweepConfig {
    std::string parameter;  // alpha | delta | r0 | b | center_voltage
    double from = 0.0, to = 0.0;
    int steps = 0;
};

struct EngineeringConfig {
    double z_um = 0.0;        // ion-electrode distance for the heating estimate
    double f_s_mhz = 0.0;     // secular frequency for the heating estimate
    double target_ndot = 10.0;
};

struct DesignFile {
    TrapGeometry geom;   // SI
    DriveConfig drive;   // SI
    IonSpecies ion;
    MaterialProps material;
    bool has_material = false;
    SolverConfig solver;
    std::optional<SweepConfig> sweep;
    EngineeringConfig engineering;
    // table overrides: use the printed factors instead of solved ones
    std::optional<double> override_eta, override_epsilon, override_kappa;
    std::optional<double> override_l_eff_um, override_d_eff_um;
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, int col, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ", col " +
                             std::to_string(col) + ": " + what),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_, col_;
};

// INI-style design text: [section] key = value, comments with '#' or ';'.
// Unknown sections/keys and duplicate keys are errors with line/column.
DesignFile parse_design(const std::string& text);
DesignFile load_design(const std::string& path);

// canonical echo of the effective configuration; re-parses to the same model
std::string dump_design(const DesignFile& d);

} // namespace iontrap::design
