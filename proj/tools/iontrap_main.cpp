#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>

#include "CLI11.hpp"
#include "iontrap/constants.hpp"
#include "iontrap/design.hpp"
#include "iontrap/pipeline.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

void print_version() {
    namespace k = iontrap::constants;
    std::printf("iontrap %s\n", kVersion);
    std::printf("constants (CODATA 2018, SI):\n");
    std::printf("  elementary_charge = %.17g C\n", k::elementary_charge);
    std::printf("  epsilon0          = %.17g F/m\n", k::epsilon0);
    std::printf("  boltzmann         = %.17g J/K\n", k::boltzmann);
    std::printf("  hbar              = %.17g J s\n", k::hbar);
    std::printf("  atomic_mass_unit  = %.17g kg\n", k::atomic_mass_unit);
    std::printf("  pi                = %.17g\n", k::pi);
}

int dump_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "iontrap: cannot open design file: %s\n", path.c_str());
        return 1;
    }
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        auto d = iontrap::design::parse_design(text);
        std::fputs(iontrap::design::dump_design(d).c_str(), stdout);
        return 0;
    } catch (const iontrap::design::ParseError& e) {
        std::fprintf(stderr, "iontrap: design file %s\n", e.what());
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar linear ion trap design toolkit"};
    app.require_subcommand(0, 1);

    bool version = false;
    app.add_flag("--version", version, "print version and the physical constants in use");

    iontrap::pipeline::Options opts;
    bool dump = false;
    const struct {
        const char* name;
        const char* help;
    } verbs[] = {
        {"solve2d", "transverse RF cross-section solve: field CSV + multipole summary"},
        {"solve3d", "segmented static solve: field CSV + axial curvature summary"},
        {"analytic", "closed-form thin-electrode results and pseudopotential profile"},
        {"characterize", "full design-point characterization, table-style report"},
        {"sweep", "run the [sweep] block; plot-ready CSV over the swept parameter"},
        {"engineering", "electromechanical and thermal estimates"},
    };
    for (const auto& v : verbs) {
        auto* sub = app.add_subcommand(v.name, v.help);
        sub->add_option("--config", opts.config_path, "design file (INI)")->required();
        sub->add_option("--out", opts.out_dir, "write CSV streams into this directory");
        sub->add_option("--jobs", opts.jobs, "sweep worker threads (default: processors)");
        // add_flag with a shared int target stays zero when the same variable
        // is bound on several subcommands; callback flags fire reliably.
        sub->add_flag_callback(
            "-v,--verbose", [&opts] { ++opts.verbose; }, "progress logging on stderr");
        sub->add_flag_callback(
            "--dump-config", [&dump] { dump = true; },
            "echo the parsed configuration and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (version) {
        print_version();
        return 0;
    }
    auto subs = app.get_subcommands();
    if (subs.empty()) {
        std::fputs(app.help().c_str(), stderr);
        return 1;
    }
    if (dump) return dump_config(opts.config_path);
    return iontrap::pipeline::run_command(subs[0]->get_name(), opts);
}
