#include "cberry/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cberry {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

const char* mode_name(SweepMode m) {
    switch (m) {
        case SweepMode::point: return "point";
        case SweepMode::sweep_g: return "sweep-g";
        case SweepMode::transition_sweep: return "transition-sweep";
        default: return "verify";
    }
}

std::string branch_list(const std::vector<Branch>& branches) {
    std::string out;
    for (const Branch b : branches) {
        if (!out.empty()) out += "+";
        out += branch_name(b);
    }
    return out;
}

double phase_scale(const SweepSpec& spec) {
    return spec.units == "pi" ? 1.0 / kPi : 1.0;
}

// Analytic record at one (theta, g, branch); throws on degenerate physics.
CsvRecord analytic_record(double theta, double g, Branch branch) {
    CsvRecord rec;
    rec.g = g;
    rec.theta = theta;
    rec.branch = branch_name(branch);
    rec.method = "analytic";

    const ShiftedRoots roots = solve_shifted_eigenvalues(theta, g);
    rec.X = roots[branch];
    rec.gamma_ab = composite_phase_constant_theta(theta, g, branch);
    rec.r = bloch_length(theta, g, branch);
    rec.p1 = 0.5 * (1.0 + std::abs(rec.r));
    // r below the degeneracy threshold: composite phase is still defined,
    // Schmidt and subsystem quantities are not.
    rec.F = scale_factor(theta, g, branch);
    rec.gamma_schmidt = schmidt_vector_phase(theta, g, branch).first;
    rec.gamma_a = subsystem_phase_constant_theta(theta, g, branch);
    rec.gamma_b = rec.gamma_a;
    rec.gamma_mixed_sum = 2.0 * rec.gamma_a;
    return rec;
}

CsvRecord wilson_record(double theta, double g, Branch branch, int n_points) {
    CsvRecord rec;
    rec.g = g;
    rec.theta = theta;
    rec.branch = branch_name(branch);
    rec.method = "wilson";
    const LoopPath path = LoopPath::constant_polar(theta);
    rec.gamma_ab = wilson_loop_phase(path, g, branch, n_points);
    try {
        const SchmidtTrack track = schmidt_track(path, g, branch, n_points);
        rec.gamma_schmidt = track.Gamma_a[0];
        const auto [ga, gb] = mixed_state_phase_numeric(track);
        rec.gamma_a = ga;
        rec.gamma_b = gb;
        rec.gamma_mixed_sum = ga + gb;
    } catch (const DomainError&) {
        // composite phase stands on its own; Schmidt channels unavailable
    }
    return rec;
}

CsvRecord ode_record(double theta, double g, Branch branch, double T, long steps) {
    CsvRecord rec;
    rec.g = g;
    rec.theta = theta;
    rec.branch = branch_name(branch);
    rec.method = "ode";
    const PropagationResult prop =
        adiabatic_propagate(LoopPath::constant_polar(theta), g, branch, T, steps);
    rec.gamma_ab = prop.geometric_phase;
    return rec;
}

const char* status_for(const DomainError& err) {
    if (dynamic_cast<const DegenerateSchmidt*>(&err)) return "degenerate-schmidt";
    if (dynamic_cast<const DegenerateRoots*>(&err)) return "degenerate-roots";
    if (dynamic_cast<const SingularScaleFactor*>(&err)) return "singular-scale-factor";
    if (dynamic_cast<const AdiabaticityFailure*>(&err)) return "adiabaticity-failure";
    if (dynamic_cast<const NonconvergentQuadrature*>(&err)) return "nonconvergent-quadrature";
    if (dynamic_cast<const DegenerateAlongPath*>(&err)) return "degenerate-along-path";
    return "error";
}

// Keep a phase sequence continuous in g by adding 2 pi multiples.
void unwrap_sequence(std::vector<CsvRecord>& rows, double CsvRecord::*field) {
    bool have_prev = false;
    double prev = 0.0;
    for (CsvRecord& rec : rows) {
        double& v = rec.*field;
        if (std::isnan(v)) continue;
        if (have_prev)
            v += 2.0 * kPi * std::round((prev - v) / (2.0 * kPi));
        prev = v;
        have_prev = true;
    }
}

} // namespace

std::string format_value(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string render_csv(const SweepSpec& spec, const std::vector<CsvRecord>& rows) {
    std::ostringstream out;
    out << "# coupled-berry v1\n";
    out << "# mode=" << mode_name(spec.mode);
    if (spec.mode != SweepMode::transition_sweep)
        out << " theta=" << format_value(spec.theta);
    if (spec.mode == SweepMode::point)
        out << " g=" << format_value(spec.g_min);
    else
        out << " g-range=" << format_value(spec.g_min) << ":"
            << format_value(spec.g_max) << ":" << spec.g_steps;
    out << " branch=" << branch_list(spec.branches)
        << " oracle=" << (spec.oracle_wilson && spec.oracle_ode
                              ? "all"
                              : spec.oracle_wilson ? "wilson"
                                                   : spec.oracle_ode ? "ode" : "none")
        << " points=" << spec.points << " period=" << format_value(spec.period)
        << " units=" << spec.units << "\n";
    out << "g,theta,branch,gamma_ab,gamma_mixed_sum,gamma_schmidt,gamma_a,"
           "gamma_b,p1,r,F,X,method,status\n";

    const double scale = phase_scale(spec);
    for (const CsvRecord& r : rows) {
        out << format_value(r.g) << ',' << format_value(r.theta) << ','
            << r.branch << ',' << format_value(r.gamma_ab * scale) << ','
            << format_value(r.gamma_mixed_sum * scale) << ','
            << format_value(r.gamma_schmidt * scale) << ','
            << format_value(r.gamma_a * scale) << ','
            << format_value(r.gamma_b * scale) << ',' << format_value(r.p1)
            << ',' << format_value(r.r) << ',' << format_value(r.F) << ','
            << format_value(r.X) << ',' << r.method << ',' << r.status << '\n';
    }
    return out.str();
}

std::vector<CsvRecord> run_point(const SweepSpec& spec) {
    std::vector<CsvRecord> rows;
    for (const Branch branch : spec.branches) {
        rows.push_back(analytic_record(spec.theta, spec.g_min, branch));
        if (spec.oracle_wilson)
            rows.push_back(wilson_record(spec.theta, spec.g_min, branch, spec.points));
        if (spec.oracle_ode)
            rows.push_back(ode_record(spec.theta, spec.g_min, branch, spec.period,
                                      spec.ode_steps));
    }
    return rows;
}

std::vector<CsvRecord> run_sweep_g(const SweepSpec& spec) {
    std::vector<CsvRecord> rows;
    for (const Branch branch : spec.branches) {
        std::vector<CsvRecord> branch_rows;
        for (int i = 0; i < spec.g_steps; ++i) {
            const double g =
                spec.g_steps == 1
                    ? spec.g_min
                    : spec.g_min + (spec.g_max - spec.g_min) * i / (spec.g_steps - 1);
            try {
                branch_rows.push_back(analytic_record(spec.theta, g, branch));
            } catch (const DomainError& err) {
                CsvRecord rec;
                rec.g = g;
                rec.theta = spec.theta;
                rec.branch = branch_name(branch);
                rec.status = status_for(err);
                try {
                    const ShiftedRoots roots = solve_shifted_eigenvalues(spec.theta, g);
                    rec.X = roots[branch];
                    rec.gamma_ab = composite_phase_constant_theta(spec.theta, g, branch);
                } catch (const DomainError&) {
                }
                branch_rows.push_back(rec);
            }
        }
        // Subsystem phases come from an arg() and wrap; splice them into
        // curves continuous in g, anchored at the first defined value.
        unwrap_sequence(branch_rows, &CsvRecord::gamma_a);
        unwrap_sequence(branch_rows, &CsvRecord::gamma_b);
        for (CsvRecord& rec : branch_rows)
            if (!std::isnan(rec.gamma_a)) rec.gamma_mixed_sum = 2.0 * rec.gamma_a;

        if (spec.oracle_wilson || spec.oracle_ode) {
            std::vector<CsvRecord> with_oracles;
            for (const CsvRecord& rec : branch_rows) {
                with_oracles.push_back(rec);
                if (rec.status != "ok") continue;
                if (spec.oracle_wilson)
                    with_oracles.push_back(
                        wilson_record(spec.theta, rec.g, branch, spec.points));
                if (spec.oracle_ode)
                    with_oracles.push_back(ode_record(spec.theta, rec.g, branch,
                                                      spec.period, spec.ode_steps));
            }
            branch_rows = std::move(with_oracles);
        }
        rows.insert(rows.end(), branch_rows.begin(), branch_rows.end());
    }
    return rows;
}

std::vector<CsvRecord> run_transition_sweep(const SweepSpec& spec) {
    const LoopPath path = LoopPath::polar_sine_loop();
    std::vector<CsvRecord> rows;
    for (const Branch branch : spec.branches) {
        for (int i = 0; i < spec.g_steps; ++i) {
            const double g =
                spec.g_steps == 1
                    ? spec.g_min
                    : spec.g_min + (spec.g_max - spec.g_min) * i / (spec.g_steps - 1);
            CsvRecord rec;
            rec.g = g;
            rec.branch = branch_name(branch);
            rec.method = "quadrature";
            try {
                rec.gamma_ab = transition_path_phase(path, g, branch, spec.panels);
            } catch (const DomainError& err) {
                rec.status = status_for(err);
            }
            rows.push_back(rec);
            if (spec.oracle_wilson && rec.status == "ok") {
                CsvRecord wrec;
                wrec.g = g;
                wrec.branch = branch_name(branch);
                wrec.method = "wilson";
                try {
                    wrec.gamma_ab = wilson_loop_phase(path, g, branch, spec.points);
                } catch (const DomainError& err) {
                    wrec.status = status_for(err);
                }
                rows.push_back(wrec);
            }
        }
    }
    return rows;
}

} // namespace cberry
