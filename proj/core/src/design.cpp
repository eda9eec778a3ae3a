#include "iontrap/design.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "iontrap/constants.hpp"
#include "iontrap/error.hpp"

namespace iontrap::design {

namespace {

struct RawValue {
    std::string text;
    int line = 0;
    int col = 0;
};

struct RawSection {
    int line = 0;  // header line, for "missing key" diagnostics
    std::map<std::string, RawValue> kv;
};

using RawConfig = std::map<std::string, RawSection>;

const std::map<std::string, std::vector<std::string>>& schema() {
    static const std::map<std::string, std::vector<std::string>> s = {
        {"geometry", {"a", "d", "w", "b", "c", "g", "h"}},
        {"drive", {"v0", "f_rf", "u0", "center_offsets"}},
        {"ion", {"mass_amu", "charge"}},
        {"material",
         {"youngs_modulus_gpa", "density_g_cm3", "resistivity_ohm_m", "loss_tangent",
          "series_resistance_ohm", "capacitance_pf", "temperature_k", "breakdown_v_um"}},
        {"solver",
         {"h", "hy", "hz", "box_factor", "box_z", "tol", "max_sweeps", "thin",
          "exploit_symmetry", "rf_mode", "r0_frac", "fit_window", "include_sigma_z",
          "richardson", "open_boundary"}},
        {"sweep", {"parameter", "from", "to", "steps"}},
        {"engineering", {"z", "f_s", "target_ndot"}},
        {"overrides", {"eta", "epsilon", "kappa", "l_eff", "d_eff"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool key_allowed(const std::string& section, const std::string& key) {
    const auto& cols = schema().at(section);
    for (const auto& k : cols)
        if (k == key) return true;
    return false;
}

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '[') {
            size_t close = line.find(']', first);
            if (close == std::string::npos)
                throw ParseError(lineno, int(first) + 1, "unterminated section header");
            std::string name = trim(line.substr(first + 1, close - first - 1));
            if (name.empty())
                throw ParseError(lineno, int(first) + 1, "empty section name");
            if (!schema().count(name))
                throw ParseError(lineno, int(first) + 2, "unknown section [" + name + "]");
            std::string rest = trim(line.substr(close + 1));
            if (!rest.empty())
                throw ParseError(lineno, int(close) + 2, "trailing text after section header");
            section = name;
            if (!raw.count(section)) raw[section].line = lineno;
            continue;
        }
        size_t eq = line.find('=', first);
        if (eq == std::string::npos)
            throw ParseError(lineno, int(first) + 1, "expected 'key = value' or '[section]'");
        std::string key = trim(line.substr(first, eq - first));
        if (key.empty())
            throw ParseError(lineno, int(first) + 1, "missing key before '='");
        if (section.empty())
            throw ParseError(lineno, int(first) + 1, "key '" + key + "' appears before any [section]");
        if (!key_allowed(section, key))
            throw ParseError(lineno, int(first) + 1,
                             "unknown key '" + key + "' in [" + section + "]");
        auto& sec = raw[section];
        if (sec.kv.count(key))
            throw ParseError(lineno, int(first) + 1,
                             "duplicate key '" + key + "' in [" + section + "]");
        size_t vstart = line.find_first_not_of(" \t\r", eq + 1);
        std::string value = (vstart == std::string::npos) ? "" : trim(line.substr(eq + 1));
        int vcol = (vstart == std::string::npos) ? int(eq) + 2 : int(vstart) + 1;
        if (value.empty())
            throw ParseError(lineno, vcol, "empty value for key '" + key + "'");
        sec.kv[key] = RawValue{value, lineno, vcol};
    }
    return raw;
}

// typed getters ------------------------------------------------------------

const RawValue* find(const RawConfig& raw, const std::string& sec, const std::string& key) {
    auto s = raw.find(sec);
    if (s == raw.end()) return nullptr;
    auto k = s->second.kv.find(key);
    if (k == s->second.kv.end()) return nullptr;
    return &k->second;
}

int section_line(const RawConfig& raw, const std::string& sec) {
    auto s = raw.find(sec);
    return s == raw.end() ? 0 : s->second.line;
}

double parse_double(const RawValue& v) {
    const char* s = v.text.c_str();
    char* end = nullptr;
    double x = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ParseError(v.line, v.col, "expected a number, got '" + v.text + "'");
    if (!std::isfinite(x))
        throw ParseError(v.line, v.col, "value '" + v.text + "' is not finite");
    return x;
}

long parse_long(const RawValue& v) {
    const char* s = v.text.c_str();
    char* end = nullptr;
    long x = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        throw ParseError(v.line, v.col, "expected an integer, got '" + v.text + "'");
    return x;
}

bool parse_bool(const RawValue& v) {
    std::string t;
    for (char c : v.text) t.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "off" || t == "no" || t == "0") return false;
    throw ParseError(v.line, v.col, "expected true/false, got '" + v.text + "'");
}

double get_double(const RawConfig& raw, const std::string& sec, const std::string& key,
                  double fallback) {
    const RawValue* v = find(raw, sec, key);
    return v ? parse_double(*v) : fallback;
}

double require_double(const RawConfig& raw, const std::string& sec, const std::string& key) {
    const RawValue* v = find(raw, sec, key);
    if (!v)
        throw ParseError(section_line(raw, sec), 1,
                         "missing required key '" + key + "' in [" + sec + "]");
    return parse_double(*v);
}

double require_positive(const RawConfig& raw, const std::string& sec, const std::string& key) {
    const RawValue* v = find(raw, sec, key);
    if (!v)
        throw ParseError(section_line(raw, sec), 1,
                         "missing required key '" + key + "' in [" + sec + "]");
    double x = parse_double(*v);
    if (x <= 0.0)
        throw ParseError(v->line, v->col, "'" + key + "' must be positive");
    return x;
}

double positive_or(const RawConfig& raw, const std::string& sec, const std::string& key,
                   double fallback) {
    const RawValue* v = find(raw, sec, key);
    if (!v) return fallback;
    double x = parse_double(*v);
    if (x <= 0.0)
        throw ParseError(v->line, v->col, "'" + key + "' must be positive");
    return x;
}

std::array<double, 4> parse_offsets(const RawValue& v) {
    std::array<double, 4> out{};
    std::stringstream ss(v.text);
    std::string item;
    int n = 0;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (n >= 4 || item.empty())
            throw ParseError(v.line, v.col, "center_offsets needs 4 comma-separated values");
        const char* s = item.c_str();
        char* end = nullptr;
        out[n] = std::strtod(s, &end);
        if (end == s || *end != '\0' || !std::isfinite(out[n]))
            throw ParseError(v.line, v.col, "bad number '" + item + "' in center_offsets");
        ++n;
    }
    if (n != 4)
        throw ParseError(v.line, v.col, "center_offsets needs 4 comma-separated values");
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

DesignFile parse_design(const std::string& text) {
    RawConfig raw = tokenize(text);
    DesignFile d;

    for (const char* sec : {"geometry", "drive", "ion"})
        if (!raw.count(sec)) throw ParseError(0, 0, std::string("missing section [") + sec + "]");

    // geometry (um). b, c, g, h have workable defaults so purely transverse
    // (2-D) studies need only a, d, w.
    double a = require_positive(raw, "geometry", "a");
    double gd = require_positive(raw, "geometry", "d");
    double w = require_positive(raw, "geometry", "w");
    double b = positive_or(raw, "geometry", "b", 100.0);
    double c = positive_or(raw, "geometry", "c", 100.0);
    double g = positive_or(raw, "geometry", "g", 2.0);
    double h = positive_or(raw, "geometry", "h", 100.0);
    try {
        d.geom = TrapGeometry::from_um(a, gd, w, b, c, g, h);
    } catch (const Error& e) {
        throw ParseError(section_line(raw, "geometry"), 1, e.what());
    }

    double v0 = require_double(raw, "drive", "v0");
    double f_rf = require_positive(raw, "drive", "f_rf");
    double u0 = get_double(raw, "drive", "u0", 0.0);
    std::array<double, 4> offsets{};
    if (const RawValue* v = find(raw, "drive", "center_offsets")) offsets = parse_offsets(*v);
    try {
        d.drive = DriveConfig::from_api(v0, f_rf, u0, offsets);
    } catch (const Error& e) {
        throw ParseError(section_line(raw, "drive"), 1, e.what());
    }

    double mass = require_positive(raw, "ion", "mass_amu");
    long charge = 1;
    if (const RawValue* v = find(raw, "ion", "charge")) {
        charge = parse_long(*v);
        if (charge < 1) throw ParseError(v->line, v->col, "'charge' must be a positive integer");
    }
    d.ion = IonSpecies::from_amu(mass, int(charge));

    if (raw.count("material")) {
        d.has_material = true;
        d.material.youngs_modulus = positive_or(raw, "material", "youngs_modulus_gpa", 0.0) * 1e9;
        d.material.density = positive_or(raw, "material", "density_g_cm3", 0.0) * 1000.0;
        d.material.resistivity = get_double(raw, "material", "resistivity_ohm_m", 0.0);
        d.material.loss_tangent = get_double(raw, "material", "loss_tangent", 0.0);
        d.material.series_resistance = get_double(raw, "material", "series_resistance_ohm", 0.0);
        d.material.capacitance = get_double(raw, "material", "capacitance_pf", 0.0) * 1e-12;
        d.material.temperature = positive_or(raw, "material", "temperature_k", 300.0);
        d.material.breakdown_field = positive_or(raw, "material", "breakdown_v_um", 40.0) * 1e6;
    }

    d.solver.h_um = positive_or(raw, "solver", "h", 0.0);
    d.solver.hy_um = positive_or(raw, "solver", "hy", 0.0);
    d.solver.hz_um = positive_or(raw, "solver", "hz", 0.0);
    d.solver.box_factor = positive_or(raw, "solver", "box_factor", 4.0);
    d.solver.box_z_um = positive_or(raw, "solver", "box_z", 0.0);
    d.solver.tol = positive_or(raw, "solver", "tol", 1e-8);
    if (const RawValue* v = find(raw, "solver", "max_sweeps")) {
        d.solver.max_sweeps = parse_long(*v);
        if (d.solver.max_sweeps < 1)
            throw ParseError(v->line, v->col, "'max_sweeps' must be positive");
    }
    if (const RawValue* v = find(raw, "solver", "thin")) d.solver.thin = parse_bool(*v);
    if (const RawValue* v = find(raw, "solver", "exploit_symmetry"))
        d.solver.exploit_symmetry = parse_bool(*v);
    if (const RawValue* v = find(raw, "solver", "rf_mode")) {
        if (v->text != "symmetric" && v->text != "ground")
            throw ParseError(v->line, v->col, "rf_mode must be 'symmetric' or 'ground'");
        d.solver.rf_mode = v->text;
    }
    if (const RawValue* v = find(raw, "solver", "r0_frac")) {
        d.solver.r0_frac = parse_double(*v);
        if (d.solver.r0_frac <= 0.0 || d.solver.r0_frac >= 0.5)
            throw ParseError(v->line, v->col, "r0_frac must lie in (0, 0.5)");
    }
    d.solver.fit_window_um = positive_or(raw, "solver", "fit_window", 0.0);
    if (const RawValue* v = find(raw, "solver", "include_sigma_z"))
        d.solver.include_sigma_z = parse_bool(*v);
    if (const RawValue* v = find(raw, "solver", "richardson"))
        d.solver.richardson = parse_bool(*v);
    if (const RawValue* v = find(raw, "solver", "open_boundary"))
        d.solver.open_boundary = parse_bool(*v);

    if (raw.count("sweep")) {
        SweepConfig sw;
        const RawValue* p = find(raw, "sweep", "parameter");
        if (!p) throw ParseError(section_line(raw, "sweep"), 1,
                                 "missing required key 'parameter' in [sweep]");
        sw.parameter = p->text;
        static const char* allowed[] = {"alpha", "delta", "r0", "b", "center_voltage"};
        bool ok = false;
        for (const char* name : allowed) ok = ok || sw.parameter == name;
        if (!ok)
            throw ParseError(p->line, p->col,
                             "unknown sweep parameter '" + sw.parameter +
                                 "' (alpha, delta, r0, b, center_voltage)");
        sw.from = require_double(raw, "sweep", "from");
        sw.to = require_double(raw, "sweep", "to");
        const RawValue* st = find(raw, "sweep", "steps");
        if (!st) throw ParseError(section_line(raw, "sweep"), 1,
                                  "missing required key 'steps' in [sweep]");
        long steps = parse_long(*st);
        if (steps < 1) throw ParseError(st->line, st->col, "'steps' must be at least 1");
        sw.steps = int(steps);
        if (sw.parameter != "center_voltage" && (sw.from <= 0.0 || sw.to <= 0.0)) {
            const RawValue* bad = find(raw, "sweep", sw.from <= 0.0 ? "from" : "to");
            throw ParseError(bad->line, bad->col,
                             "sweep range for '" + sw.parameter + "' must be positive");
        }
        d.sweep = sw;
    }

    d.engineering.z_um = positive_or(raw, "engineering", "z", 0.0);
    d.engineering.f_s_mhz = positive_or(raw, "engineering", "f_s", 0.0);
    d.engineering.target_ndot = positive_or(raw, "engineering", "target_ndot", 10.0);

    if (raw.count("overrides")) {
        if (find(raw, "overrides", "eta"))
            d.override_eta = require_positive(raw, "overrides", "eta");
        if (find(raw, "overrides", "epsilon"))
            d.override_epsilon = require_double(raw, "overrides", "epsilon");
        if (find(raw, "overrides", "kappa"))
            d.override_kappa = require_positive(raw, "overrides", "kappa");
        if (find(raw, "overrides", "l_eff"))
            d.override_l_eff_um = require_positive(raw, "overrides", "l_eff");
        if (find(raw, "overrides", "d_eff"))
            d.override_d_eff_um = require_positive(raw, "overrides", "d_eff");
    }

    return d;
}

DesignFile load_design(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open design file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_design(ss.str());
}

std::string dump_design(const DesignFile& d) {
    using constants::micrometers;
    using constants::mhz_from_rad_per_s;
    std::ostringstream out;
    out << "[geometry]\n";
    out << "a = " << fmt(micrometers(d.geom.a)) << "\n";
    out << "d = " << fmt(micrometers(d.geom.d)) << "\n";
    out << "w = " << fmt(micrometers(d.geom.w)) << "\n";
    out << "b = " << fmt(micrometers(d.geom.b)) << "\n";
    out << "c = " << fmt(micrometers(d.geom.c)) << "\n";
    out << "g = " << fmt(micrometers(d.geom.g)) << "\n";
    out << "h = " << fmt(micrometers(d.geom.h)) << "\n";
    out << "\n[drive]\n";
    out << "v0 = " << fmt(d.drive.v0) << "\n";
    out << "f_rf = " << fmt(mhz_from_rad_per_s(d.drive.omega_t)) << "\n";
    out << "u0 = " << fmt(d.drive.u0) << "\n";
    out << "center_offsets = " << fmt(d.drive.center_offsets[0]) << ","
        << fmt(d.drive.center_offsets[1]) << "," << fmt(d.drive.center_offsets[2]) << ","
        << fmt(d.drive.center_offsets[3]) << "\n";
    out << "\n[ion]\n";
    out << "mass_amu = " << fmt(d.ion.mass / constants::atomic_mass_unit) << "\n";
    out << "charge = " << d.ion.charge << "\n";
    if (d.has_material) {
        out << "\n[material]\n";
        if (d.material.youngs_modulus > 0.0)
            out << "youngs_modulus_gpa = " << fmt(d.material.youngs_modulus / 1e9) << "\n";
        if (d.material.density > 0.0)
            out << "density_g_cm3 = " << fmt(d.material.density / 1000.0) << "\n";
        out << "resistivity_ohm_m = " << fmt(d.material.resistivity) << "\n";
        out << "loss_tangent = " << fmt(d.material.loss_tangent) << "\n";
        out << "series_resistance_ohm = " << fmt(d.material.series_resistance) << "\n";
        out << "capacitance_pf = " << fmt(d.material.capacitance / 1e-12) << "\n";
        out << "temperature_k = " << fmt(d.material.temperature) << "\n";
        out << "breakdown_v_um = " << fmt(d.material.breakdown_field / 1e6) << "\n";
    }
    out << "\n[solver]\n";
    if (d.solver.h_um > 0.0) out << "h = " << fmt(d.solver.h_um) << "\n";
    if (d.solver.hy_um > 0.0) out << "hy = " << fmt(d.solver.hy_um) << "\n";
    if (d.solver.hz_um > 0.0) out << "hz = " << fmt(d.solver.hz_um) << "\n";
    out << "box_factor = " << fmt(d.solver.box_factor) << "\n";
    if (d.solver.box_z_um > 0.0) out << "box_z = " << fmt(d.solver.box_z_um) << "\n";
    out << "tol = " << fmt(d.solver.tol) << "\n";
    out << "max_sweeps = " << d.solver.max_sweeps << "\n";
    out << "thin = " << (d.solver.thin ? "true" : "false") << "\n";
    out << "exploit_symmetry = " << (d.solver.exploit_symmetry ? "true" : "false") << "\n";
    out << "rf_mode = " << d.solver.rf_mode << "\n";
    out << "r0_frac = " << fmt(d.solver.r0_frac) << "\n";
    if (d.solver.fit_window_um > 0.0)
        out << "fit_window = " << fmt(d.solver.fit_window_um) << "\n";
    out << "include_sigma_z = " << (d.solver.include_sigma_z ? "true" : "false") << "\n";
    out << "richardson = " << (d.solver.richardson ? "true" : "false") << "\n";
    out << "open_boundary = " << (d.solver.open_boundary ? "true" : "false") << "\n";
    if (d.sweep) {
        out << "\n[sweep]\n";
        out << "parameter = " << d.sweep->parameter << "\n";
        out << "from = " << fmt(d.sweep->from) << "\n";
        out << "to = " << fmt(d.sweep->to) << "\n";
        out << "steps = " << d.sweep->steps << "\n";
    }
    if (d.engineering.z_um > 0.0 || d.engineering.f_s_mhz > 0.0) {
        out << "\n[engineering]\n";
        if (d.engineering.z_um > 0.0) out << "z = " << fmt(d.engineering.z_um) << "\n";
        if (d.engineering.f_s_mhz > 0.0) out << "f_s = " << fmt(d.engineering.f_s_mhz) << "\n";
        out << "target_ndot = " << fmt(d.engineering.target_ndot) << "\n";
    }
    if (d.override_eta || d.override_epsilon || d.override_kappa || d.override_l_eff_um ||
        d.override_d_eff_um) {
        out << "\n[overrides]\n";
        if (d.override_eta) out << "eta = " << fmt(*d.override_eta) << "\n";
        if (d.override_epsilon) out << "epsilon = " << fmt(*d.override_epsilon) << "\n";
        if (d.override_kappa) out << "kappa = " << fmt(*d.override_kappa) << "\n";
        if (d.override_l_eff_um) out << "l_eff = " << fmt(*d.override_l_eff_um) << "\n";
        if (d.override_d_eff_um) out << "d_eff = " << fmt(*d.override_d_eff_um) << "\n";
    }
    return out.str();
}

} // namespace iontrap::design
