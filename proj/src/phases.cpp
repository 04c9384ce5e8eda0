#include "cberry/phases.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace cberry {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Direction {
    double x, y, z;
};

Direction direction_at(const LoopPath& path, double s) {
    const double th = path.theta_at(s);
    const double ph = path.phi_at(s);
    return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

// Kahan-compensated accumulator; keeps quadrature sums bit-stable and tight.
class CompensatedSum {
public:
    void add(double v) {
        const double y = v - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Trapezoid rule in the Stieltjes form sum (f_j + f_{j+1})/2 * (phi_{j+1} - phi_j).
double stieltjes_trapezoid(const std::function<double(double)>& f,
                           const std::function<double(double)>& phi,
                           int panels) {
    CompensatedSum acc;
    double f_prev = f(0.0);
    double phi_prev = phi(0.0);
    for (int j = 1; j <= panels; ++j) {
        const double s = static_cast<double>(j) / panels;
        const double f_cur = f(s);
        const double phi_cur = phi(s);
        acc.add(0.5 * (f_prev + f_cur) * (phi_cur - phi_prev));
        f_prev = f_cur;
        phi_prev = phi_cur;
    }
    return acc.value();
}

// r F cos(theta) = 2 X cos(theta) sin^2(theta) / msq, extended by its limits
// at the poles and at the equatorial zero-branch point (where it tends to 0).
// At a pole the eigenstate limits onto a |1;M> basis state and the value is
// that state's C^2 - A^2: the slot X ~ +1 carries |1;+1> at the north pole
// but |1;-1> at the south pole, so the character flips with the sign of
// cos(theta); the X ~ -2g slot is |1;0> at either pole.
double weighted_cone_cosine(double theta, double g, Branch branch) {
    const ShiftedRoots roots = solve_shifted_eigenvalues(theta, g);
    const double x = roots[branch];
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double msq = eigen_norm_poly(x, c, s);
    if (msq > 1e-14)
        return 2.0 * x * c * s * s / msq;
    if (s < 1e-7) {
        const double slots[3] = {1.0, -1.0, -2.0 * g};
        const double north_char[3] = {1.0, -1.0, 0.0};
        int nearest = 0;
        for (int k = 1; k < 3; ++k)
            if (std::abs(x - slots[k]) < std::abs(x - slots[nearest])) nearest = k;
        return (c > 0.0 ? 1.0 : -1.0) * north_char[nearest];
    }
    return 0.0;  // X ~ 0 and cos(theta) ~ 0
}

} // namespace

LoopPath LoopPath::constant_polar(double theta) {
    if (!(theta > 0.0 && theta < kPi))
        throw std::invalid_argument("constant-polar loop requires theta in (0, pi)");
    return LoopPath(ConstantPolar{theta});
}

LoopPath LoopPath::parametrized(std::function<double(double)> theta_of,
                                std::function<double(double)> phi_of) {
    LoopPath path(Parametrized{std::move(theta_of), std::move(phi_of)});
    const Direction d0 = direction_at(path, 0.0);
    const Direction d1 = direction_at(path, 1.0);
    const double gap = std::sqrt((d0.x - d1.x) * (d0.x - d1.x) +
                                 (d0.y - d1.y) * (d0.y - d1.y) +
                                 (d0.z - d1.z) * (d0.z - d1.z));
    if (gap > 1e-12)
        throw std::invalid_argument("parametrized path does not close on the sphere");
    return path;
}

LoopPath LoopPath::polar_sine_loop() {
    return parametrized([](double s) { return kPi * std::sin(kPi * s); },
                        [](double s) { return kPi * s; });
}

double LoopPath::theta_at(double s) const {
    if (constant()) return std::get<ConstantPolar>(rep_).theta;
    return std::get<Parametrized>(rep_).theta_of(s);
}

double LoopPath::phi_at(double s) const {
    if (constant()) return 2.0 * kPi * s;
    return std::get<Parametrized>(rep_).phi_of(s);
}

const char* phase_method_name(PhaseMethod m) {
    switch (m) {
        case PhaseMethod::analytic: return "analytic";
        case PhaseMethod::wilson: return "wilson";
        case PhaseMethod::ode: return "ode";
        default: return "quadrature";
    }
}

double wrap_angle(double x) {
    double w = std::remainder(x, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;  // remainder returns [-pi, pi]; move -pi to +pi
    return w;
}

double solid_angle(const LoopPath& path, int panels) {
    if (path.constant())
        return 2.0 * kPi * (1.0 - std::cos(path.constant_theta()));
    return stieltjes_trapezoid(
        [&](double s) { return 1.0 - std::cos(path.theta_at(s)); },
        [&](double s) { return path.phi_at(s); }, panels);
}

PhaseResult zero_coupling_phase(int m, double omega) {
    if (m < -1 || m > 1)
        throw std::invalid_argument("total-spin projection must be -1, 0 or +1");
    PhaseResult res;
    res.method = PhaseMethod::analytic;
    res.gamma_ab = -static_cast<double>(m) * omega;
    if (m != 0) {
        res.gamma_a = -0.5 * m * omega;
        res.gamma_b = res.gamma_a;
        res.Gamma_a1 = -0.5 * omega;  // F = 1 at g = 0
        res.Gamma_a2 = -res.Gamma_a1;
        res.Gamma_b1 = res.Gamma_a1;
        res.Gamma_b2 = res.Gamma_a2;
    }
    return res;
}

double degenerate_zero_g_subsystem_phase(std::complex<double> alpha,
                                         std::complex<double> beta,
                                         double omega) {
    const double n2 = std::norm(alpha) + std::norm(beta);
    if (std::abs(n2 - 1.0) > 1e-9)
        throw std::invalid_argument("doublet amplitudes must be normalized");
    const double overlap = 2.0 * (std::conj(alpha) * beta).real();
    if (std::abs(overlap) < 1e-12)
        throw UndefinedPhase(
            "reduced operators are degenerate: 2 Re(conj(alpha) beta) = 0");
    return -std::atan(overlap * std::tan(0.5 * omega));
}

double scale_factor(double theta, double g, Branch branch) {
    const ShiftedRoots roots = solve_shifted_eigenvalues(theta, g);
    const double x = roots[branch];
    const double c = std::cos(theta);
    const double d2 = scale_denom_sq(x, c, std::sin(theta));
    if (d2 < 1e-14) {
        std::ostringstream msg;
        msg << "scale factor singular at theta=" << theta << " g=" << g
            << " branch=" << branch_name(branch);
        throw SingularScaleFactor(msg.str());
    }
    return std::sin(theta) / std::sqrt(d2);
}

std::pair<double, double> schmidt_vector_phase(double theta, double g, Branch branch) {
    const double r = bloch_length(theta, g, branch);
    if (std::abs(r) < kSchmidtDegTol)
        throw DegenerateSchmidt("Schmidt-vector phases undefined at r = 0");
    const double f = scale_factor(theta, g, branch);
    const double g1 = -kPi * (1.0 - f * std::cos(theta));
    return {g1, -g1};
}

double composite_phase_constant_theta(double theta, double g, Branch branch) {
    if (!(theta > 0.0 && theta < kPi))
        throw std::invalid_argument("constant-theta phase requires theta in (0, pi)");
    const double rfc = weighted_cone_cosine(theta, g, branch);
    return -2.0 * kPi * (static_cast<double>(anchor_m(branch)) - rfc);
}

double subsystem_phase_constant_theta(double theta, double g, Branch branch) {
    const double r = bloch_length(theta, g, branch);
    if (std::abs(r) < kSchmidtDegTol)
        throw DegenerateSchmidt("subsystem phase undefined at r = 0");
    const double f = scale_factor(theta, g, branch);
    const double g1 = -kPi * (1.0 - f * std::cos(theta));
    return std::atan2(r * std::sin(g1), std::cos(g1));
}

double transition_path_phase(const LoopPath& path, double g, Branch branch,
                             int panels) {
    if (path.constant())
        return composite_phase_constant_theta(path.constant_theta(), g, branch);
    if (panels < 2)
        throw std::invalid_argument("need at least 2 quadrature panels");

    // Reference winding for the unwrapped representative.  Pole-closing
    // paths pick up a real gauge-closure term set by the endpoint character
    // (the pole limit of the integrand); elsewhere any integer works and the
    // g = 0 anchor keeps sweeps continuous in g.
    const bool closes_at_pole = std::sin(path.theta_at(0.0)) < 1e-9;
    const double m_ref = closes_at_pole
                             ? weighted_cone_cosine(path.theta_at(0.0), g, branch)
                             : static_cast<double>(anchor_m(branch));
    const auto integrand = [&](double s) {
        return weighted_cone_cosine(path.theta_at(s), g, branch) - m_ref;
    };
    const auto phi = [&](double s) { return path.phi_at(s); };

    const double coarse = stieltjes_trapezoid(integrand, phi, panels);
    const double fine = stieltjes_trapezoid(integrand, phi, 2 * panels);
    const double rel = std::abs(fine - coarse) / std::max(1.0, std::abs(fine));
    if (rel > kQuadFailRelTol) {
        std::ostringstream msg;
        msg << "path quadrature not converged: relative change " << rel
            << " after doubling " << panels << " panels";
        throw NonconvergentQuadrature(msg.str());
    }
    return fine;
}

PhaseResult evaluate_constant_theta(double theta, double g, Branch branch) {
    PhaseResult res;
    res.method = PhaseMethod::analytic;
    res.gamma_ab = composite_phase_constant_theta(theta, g, branch);
    const auto [g1, g2] = schmidt_vector_phase(theta, g, branch);
    res.Gamma_a1 = g1;
    res.Gamma_a2 = g2;
    res.Gamma_b1 = g1;
    res.Gamma_b2 = g2;
    res.gamma_a = subsystem_phase_constant_theta(theta, g, branch);
    res.gamma_b = res.gamma_a;
    return res;
}

} // namespace cberry
