#ifndef CBERRY_PHASES_HPP
#define CBERRY_PHASES_HPP

#include <complex>
#include <functional>
#include <utility>
#include <variant>

#include "cberry/model.hpp"

// Closed-form geometric phases for loops of the field direction.  Phase
// conventions: geometric phase gamma = i * closed-loop integral of
// <n|grad n> . dQ; for a spin coherent state on a cone of solid angle Omega
// this gives -Omega/2 per half unit of spin projection.
//
// All constant-theta formulas use the signed Bloch vector r (sign of the
// shifted eigenvalue X); the vector-1 Schmidt channel is the one whose
// weight is (1 + r)/2.

namespace cberry {

inline constexpr int kDefaultPanels = 1 << 14;
inline constexpr double kQuadRelTol = 1e-8;      // panel-doubling target
inline constexpr double kQuadFailRelTol = 1e-6;  // beyond this: nonconvergent

// Closed path of the field direction.  ConstantPolar sweeps phi once around
// at fixed theta; Parametrized paths are closed on the direction sphere
// (closure in the (theta, phi) chart is not required: paths may start and
// end at a pole).
class LoopPath {
public:
    struct ConstantPolar {
        double theta;
    };
    struct Parametrized {
        std::function<double(double)> theta_of;
        std::function<double(double)> phi_of;
    };

    static LoopPath constant_polar(double theta);
    static LoopPath parametrized(std::function<double(double)> theta_of,
                                 std::function<double(double)> phi_of);
    // theta(s) = pi sin(pi s), phi(s) = pi s: a closed sweep through both
    // poles with a half turn of azimuth.
    static LoopPath polar_sine_loop();

    bool constant() const { return std::holds_alternative<ConstantPolar>(rep_); }
    double constant_theta() const { return std::get<ConstantPolar>(rep_).theta; }

    double theta_at(double s) const;
    double phi_at(double s) const;

private:
    explicit LoopPath(std::variant<ConstantPolar, Parametrized> rep)
        : rep_(std::move(rep)) {}
    std::variant<ConstantPolar, Parametrized> rep_;
};

enum class PhaseMethod { analytic, wilson, ode, quadrature };

const char* phase_method_name(PhaseMethod m);

// Bundle of every phase attached to one evaluation point.  Unset entries are
// NaN.  Unwrapped values are the raw formula outputs; use wrap_angle for the
// (-pi, pi] representative.
struct PhaseResult {
    double gamma_ab = std::numeric_limits<double>::quiet_NaN();
    double gamma_a = std::numeric_limits<double>::quiet_NaN();
    double gamma_b = std::numeric_limits<double>::quiet_NaN();
    double Gamma_a1 = std::numeric_limits<double>::quiet_NaN();
    double Gamma_a2 = std::numeric_limits<double>::quiet_NaN();
    double Gamma_b1 = std::numeric_limits<double>::quiet_NaN();
    double Gamma_b2 = std::numeric_limits<double>::quiet_NaN();
    PhaseMethod method = PhaseMethod::analytic;
};

// Representative of x in (-pi, pi].
double wrap_angle(double x);

// Solid angle enclosed by the path: 2 pi (1 - cos theta) for constant-theta
// circles, otherwise the loop integral of (1 - cos theta) d phi.
double solid_angle(const LoopPath& path, int panels = kDefaultPanels);

// g = 0 phases for a total-spin projection m along the field: the composite
// phase is -m Omega and each subsystem carries half.  For m = 0 the
// composite phase vanishes; subsystem entries stay NaN (see
// degenerate_zero_g_subsystem_phase).
PhaseResult zero_coupling_phase(int m, double omega);

// Subsystem phase of the g = 0 degenerate doublet alpha |1;0> + beta |0;0>:
// gamma_a = -atan(2 Re(conj(alpha) beta) tan(Omega/2)), gamma_b = -gamma_a.
// Throws UndefinedPhase when 2 Re(conj(alpha) beta) vanishes.
double degenerate_zero_g_subsystem_phase(std::complex<double> alpha,
                                         std::complex<double> beta,
                                         double omega);

// F = sin(theta) / sqrt(X^4 - 2 X^2 cos^2 theta + cos^2 theta).
double scale_factor(double theta, double g, Branch branch);

// Schmidt-vector phases for a constant-theta loop:
// Gamma_1 = -pi (1 - F cos theta), Gamma_2 = -Gamma_1.  Identical for both
// subsystems.
std::pair<double, double> schmidt_vector_phase(double theta, double g, Branch branch);

// Composite-system phase for a constant-theta loop, unwrapped and anchored
// at the g = 0 value -m0 * Omega:
//   gamma_ab = -2 pi (m0 - r F cos theta),   m0 = anchor_m(branch).
double composite_phase_constant_theta(double theta, double g, Branch branch);

// Subsystem mixed-state phase gamma_xi = arg(p1 e^{i Gamma_1} + p2 e^{-i Gamma_1})
// = atan2(r sin Gamma_1, cos Gamma_1) with signed r.  Same value for both
// subsystems.  Throws DegenerateSchmidt when |r| < kSchmidtDegTol.
double subsystem_phase_constant_theta(double theta, double g, Branch branch);

// Composite phase along a closed parametrized path,
//   gamma_ab = loop integral of (r F cos theta - m_ref) d phi,
// where m_ref is pole_m(branch, g) for pole-touching paths and
// anchor_m(branch) otherwise.  Trapezoid quadrature with one panel doubling;
// throws NonconvergentQuadrature if the doubling moves the value by more
// than kQuadFailRelTol (relative).
double transition_path_phase(const LoopPath& path, double g, Branch branch,
                             int panels = kDefaultPanels);

// Convenience: every analytic constant-theta quantity at one point.
PhaseResult evaluate_constant_theta(double theta, double g, Branch branch);

} // namespace cberry

#endif
