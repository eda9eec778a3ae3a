#pragma once

#include <string>

#include "iontrap/design.hpp"
#include "iontrap/solver.hpp"
#include "iontrap/trapchar.hpp"

namespace iontrap::pipeline {

struct Options {
    std::string config_path;
    std::string out_dir;  // empty: primary CSV on stdout
    int jobs = 0;         // worker threads for sweeps; 0 = processor count
    int verbose = 0;
};

// Grid construction from the [solver] block. Auto spacing (h = 0) picks
// min(a/32, feature/4) in 2-D and min(a/16, feature/2) in 3-D with the finer
// min(h, feature/4) in y, where feature is the smallest of d and w the grid
// must resolve. The x/y box spans box_factor * a; the z box is either box_z
// or sized to clear the end-caps.
laplace::GridSpec2D make_grid_2d(const design::DesignFile& d);
laplace::GridSpec3D make_grid_3d(const design::DesignFile& d);

// transverse RF cross-section at +-v0/2 on the diagonal pairs
laplace::ScalarField2D solve_rf_2d(const design::DesignFile& d,
                                   laplace::SolveStats* stats = nullptr);
// segmented static potential: end-caps at u0, centers at the drive offsets
laplace::ScalarField3D solve_static_3d(const design::DesignFile& d,
                                       laplace::SolveStats* stats = nullptr);
// full 3-D RF solve in the configured rf_mode, for the axial residual study
laplace::ScalarField3D solve_rf_3d(const design::DesignFile& d,
                                   laplace::SolveStats* stats = nullptr);

struct CharacterizeOutcome {
    trapchar::TrapCharacterization chr;
    bool solved_2d = false;
    bool solved_3d = false;
    bool solved_sigma = false;
};

// Full design-point characterization. Factor overrides from the design file
// replace the corresponding solves (all three overridden = pure formula
// evaluation); otherwise the 2-D RF and 3-D static pipelines run.
CharacterizeOutcome run_characterize(const design::DesignFile& d, int verbose = 0);

// deterministic CSV renderings: %.9g floats, lengths in micrometers
std::string csv_field(const laplace::ScalarField2D& f);
std::string csv_field(const laplace::ScalarField3D& f);
std::string csv_grad_sq_axis(const laplace::ScalarField3D& f);

// Subcommands behind the CLI verbs; each loads opts.config_path, writes data
// to stdout or files under opts.out_dir, logs to stderr, and returns a
// process exit code (0 success, 1 usage, 2 numerical/model failure).
int cmd_solve2d(const Options& opts);
int cmd_solve3d(const Options& opts);
int cmd_analytic(const Options& opts);
int cmd_characterize(const Options& opts);
int cmd_sweep(const Options& opts);
int cmd_engineering(const Options& opts);

// dispatch by verb name; unknown names return 1
int run_command(const std::string& name, const Options& opts);

} // namespace iontrap::pipeline
