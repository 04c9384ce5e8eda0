#ifndef CBERRY_SWEEP_HPP
#define CBERRY_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "cberry/oracles.hpp"
#include "cberry/phases.hpp"

// Sweep drivers and CSV emission.  Output is byte-deterministic for a fixed
// spec: fixed 12-significant-digit formatting, sequential evaluation in grid
// order, no timestamps.

namespace cberry {

enum class SweepMode { point, sweep_g, transition_sweep, verify };

struct SweepSpec {
    SweepMode mode = SweepMode::point;
    double theta = 1.0471975511965976;  // pi/3
    double g_min = 0.0;
    double g_max = 10.0;
    int g_steps = 400;                  // number of grid points
    std::vector<Branch> branches = {Branch::minus, Branch::zero, Branch::plus};
    bool oracle_wilson = false;
    bool oracle_ode = false;
    int points = 4096;                  // wilson-loop grid points
    int panels = kDefaultPanels;        // path quadrature panels
    double period = 2000.0;             // adiabatic sweep duration
    long ode_steps = 2'000'000;
    std::string units = "pi";           // "pi" or "rad"
    std::string out;                    // empty: stdout
    double tol_scale = 1.0;             // verify only
};

// One CSV data row.  Phases are stored in radians and scaled on output.
// NaN fields print as empty.
struct CsvRecord {
    double g = std::numeric_limits<double>::quiet_NaN();
    double theta = std::numeric_limits<double>::quiet_NaN();
    std::string branch;
    double gamma_ab = std::numeric_limits<double>::quiet_NaN();
    double gamma_mixed_sum = std::numeric_limits<double>::quiet_NaN();
    double gamma_schmidt = std::numeric_limits<double>::quiet_NaN();
    double gamma_a = std::numeric_limits<double>::quiet_NaN();
    double gamma_b = std::numeric_limits<double>::quiet_NaN();
    double p1 = std::numeric_limits<double>::quiet_NaN();
    double r = std::numeric_limits<double>::quiet_NaN();
    double F = std::numeric_limits<double>::quiet_NaN();
    double X = std::numeric_limits<double>::quiet_NaN();
    std::string method = "analytic";
    std::string status = "ok";
};

// %.12g rendering; empty string for NaN.
std::string format_value(double v);

// Full CSV document: magic line, spec echo, header, rows.
std::string render_csv(const SweepSpec& spec, const std::vector<CsvRecord>& rows);

// Single-point evaluation; oracle rows appended per enabled flag.  Throws the
// module error of the first failing branch (point mode is fail-fast).
std::vector<CsvRecord> run_point(const SweepSpec& spec);

// Constant-theta g sweep.  Degenerate points become status rows; subsystem
// phases are unwrapped along the grid for continuity in g.
std::vector<CsvRecord> run_sweep_g(const SweepSpec& spec);

// Phase along the pole-crossing path for each g on the grid.
std::vector<CsvRecord> run_transition_sweep(const SweepSpec& spec);

} // namespace cberry

#endif
