// Command-line front end: single-point phase evaluation, constant-theta
// g sweeps, pole-crossing-path sweeps, and the verification grid.
//
//   coupled-berry point            --theta <rad> --g <val> [--branch ...]
//   coupled-berry sweep-g          --theta <rad> [--g-range min:max:steps]
//   coupled-berry transition-sweep [--g-range min:max:steps]
//   coupled-berry verify           [--tolerance-scale <f>]
//
// Common flags: --branch <minus|zero|plus|all>, --oracle <none|wilson|ode|all>,
// --points <N>, --period <T>, --out <file>, --config <file>, --units <pi|rad>.
//
// Config files are flat UTF-8 key=value lines (keys match long flag names
// without the leading dashes, one per line, '#' comments); command-line flags
// override config values.
//
// Exit codes: 0 success, 1 verification/numerical failure, 3 degenerate
// Schmidt (or otherwise undefined reduced-state quantity), 4 degenerate
// roots, 5 adiabaticity failure, 64 usage error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "cberry/sweep.hpp"
#include "cberry/verify.hpp"

namespace {

using namespace cberry;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitDegenerateSchmidt = 3;
constexpr int kExitDegenerateRoots = 4;
constexpr int kExitAdiabaticity = 5;
constexpr int kExitUsage = 64;

struct Usage {
    std::string message;
};

void print_help(std::ostream& out) {
    out << "usage: coupled-berry <point|sweep-g|transition-sweep|verify> [flags]\n"
           "  --theta <rad>            polar angle, (0, pi)\n"
           "  --g <val>                coupling (point mode)\n"
           "  --g-range <min:max:n>    coupling grid with n points\n"
           "  --branch <minus|zero|plus|all>\n"
           "  --oracle <none|wilson|ode|all>\n"
           "  --points <N>             wilson-loop grid points\n"
           "  --panels <N>             path quadrature panels\n"
           "  --period <T>             adiabatic sweep duration\n"
           "  --ode-steps <N>          integrator steps\n"
           "  --units <pi|rad>         phase columns in units of pi or radians\n"
           "  --out <file>             write CSV/report to file (default stdout)\n"
           "  --config <file>          key=value defaults, overridden by flags\n"
           "  --tolerance-scale <f>    scale verify tolerances (verify mode)\n";
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Usage{"invalid number for " + key + ": '" + value + "'"};
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw Usage{"invalid integer for " + key + ": '" + value + "'"};
    }
}

std::map<std::string, std::string> load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Usage{"cannot open config file '" + file + "'"};
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const size_t last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Usage{"config line without '=': '" + line + "'"};
        auto trim = [](std::string s) {
            const size_t a = s.find_first_not_of(" \t");
            const size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_option(SweepSpec& spec, const std::string& key, const std::string& value) {
    if (key == "theta") {
        spec.theta = parse_double(key, value);
    } else if (key == "g") {
        spec.g_min = spec.g_max = parse_double(key, value);
        spec.g_steps = 1;
    } else if (key == "g-range") {
        std::istringstream in(value);
        std::string lo, hi, n;
        if (!std::getline(in, lo, ':') || !std::getline(in, hi, ':') ||
            !std::getline(in, n))
            throw Usage{"--g-range expects min:max:steps"};
        spec.g_min = parse_double(key, lo);
        spec.g_max = parse_double(key, hi);
        spec.g_steps = static_cast<int>(parse_long(key, n));
        if (spec.g_min > spec.g_max || spec.g_steps < 1)
            throw Usage{"--g-range needs min <= max and steps >= 1"};
    } else if (key == "branch") {
        if (value == "all")
            spec.branches = {Branch::minus, Branch::zero, Branch::plus};
        else if (value == "minus")
            spec.branches = {Branch::minus};
        else if (value == "zero")
            spec.branches = {Branch::zero};
        else if (value == "plus")
            spec.branches = {Branch::plus};
        else
            throw Usage{"unknown branch '" + value + "'"};
    } else if (key == "oracle") {
        spec.oracle_wilson = (value == "wilson" || value == "all");
        spec.oracle_ode = (value == "ode" || value == "all");
        if (value != "none" && value != "wilson" && value != "ode" && value != "all")
            throw Usage{"unknown oracle '" + value + "'"};
    } else if (key == "points") {
        spec.points = static_cast<int>(parse_long(key, value));
    } else if (key == "panels") {
        spec.panels = static_cast<int>(parse_long(key, value));
    } else if (key == "period") {
        spec.period = parse_double(key, value);
    } else if (key == "ode-steps") {
        spec.ode_steps = parse_long(key, value);
    } else if (key == "units") {
        if (value != "pi" && value != "rad") throw Usage{"--units expects pi or rad"};
        spec.units = value;
    } else if (key == "out") {
        spec.out = value;
    } else if (key == "tolerance-scale") {
        spec.tol_scale = parse_double(key, value);
    } else {
        throw Usage{"unknown option '--" + key + "'"};
    }
}

SweepSpec parse_command_line(int argc, char** argv) {
    if (argc < 2) throw Usage{"missing subcommand"};
    const std::string mode = argv[1];

    SweepSpec spec;
    if (mode == "point")
        spec.mode = SweepMode::point;
    else if (mode == "sweep-g")
        spec.mode = SweepMode::sweep_g;
    else if (mode == "transition-sweep")
        spec.mode = SweepMode::transition_sweep;
    else if (mode == "verify")
        spec.mode = SweepMode::verify;
    else if (mode == "--help" || mode == "-h")
        throw Usage{""};
    else
        throw Usage{"unknown subcommand '" + mode + "'"};

    if (spec.mode == SweepMode::point) spec.g_steps = 1;

    // Collect flags first so config values, applied afterwards, never
    // override anything given on the command line.
    std::vector<std::pair<std::string, std::string>> flags;
    std::string config_file;
    for (int i = 2; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--", 0) != 0) throw Usage{"unexpected argument '" + arg + "'"};
        arg = arg.substr(2);
        std::string value;
        const size_t eq = arg.find('=');
        if (eq != std::string::npos) {
            value = arg.substr(eq + 1);
            arg = arg.substr(0, eq);
        } else {
            if (i + 1 >= argc) throw Usage{"missing value for --" + arg};
            value = argv[++i];
        }
        if (arg == "config")
            config_file = value;
        else
            flags.emplace_back(arg, value);
    }

    if (!config_file.empty()) {
        for (const auto& [key, value] : load_config(config_file)) {
            const bool overridden =
                std::any_of(flags.begin(), flags.end(),
                            [&](const auto& f) { return f.first == key; });
            if (!overridden) apply_option(spec, key, value);
        }
    }
    for (const auto& [key, value] : flags) apply_option(spec, key, value);

    if (spec.mode == SweepMode::point || spec.mode == SweepMode::sweep_g) {
        if (!(spec.theta > 0.0 && spec.theta < 3.141592653589793))
            throw Usage{"constant-theta modes need theta in (0, pi)"};
    }
    return spec;
}

int run(const SweepSpec& spec) {
    std::ostringstream body;
    int code = kExitOk;

    if (spec.mode == SweepMode::verify) {
        const auto checks = run_acceptance_checks(spec.tol_scale, &std::cerr);
        code = report_checks(checks, body);
    } else {
        std::vector<CsvRecord> rows;
        switch (spec.mode) {
            case SweepMode::point: rows = run_point(spec); break;
            case SweepMode::sweep_g: rows = run_sweep_g(spec); break;
            default: rows = run_transition_sweep(spec); break;
        }
        body << render_csv(spec, rows);
    }

    if (spec.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream out(spec.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << spec.out << "'\n";
            return kExitFailure;
        }
        out << body.str();
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    try {
        const SweepSpec spec = parse_command_line(argc, argv);
        return run(spec);
    } catch (const Usage& u) {
        if (!u.message.empty()) std::cerr << "error: " << u.message << "\n";
        print_help(u.message.empty() ? std::cout : std::cerr);
        return u.message.empty() ? kExitOk : kExitUsage;
    } catch (const DegenerateSchmidt& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerateSchmidt;
    } catch (const SingularScaleFactor& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerateSchmidt;
    } catch (const UndefinedPhase& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerateSchmidt;
    } catch (const DegenerateRoots& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerateRoots;
    } catch (const AdiabaticityFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAdiabaticity;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
