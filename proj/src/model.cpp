#include "cberry/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace cberry {

using std::complex;
using namespace std::complex_literals;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double cubic_value(double x, double g, double cc) {
    // X^3 + 2g X^2 - X - 2g cos^2(theta), cc = cos^2(theta)
    return ((x + 2.0 * g) * x - 1.0) * x - 2.0 * g * cc;
}

double cubic_slope(double x, double g) {
    return (3.0 * x + 4.0 * g) * x - 1.0;
}

} // namespace

ModelParams ModelParams::canonical(double g, double theta, double phi) {
    if (!std::isfinite(g) || !std::isfinite(theta) || !std::isfinite(phi))
        throw std::invalid_argument("model parameters must be finite");
    // Reflect theta into [0, pi]; each reflection shifts the azimuth by pi.
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    if (theta > kPi) {
        theta = 2.0 * kPi - theta;
        phi += kPi;
    }
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    return ModelParams{g, theta, phi};
}

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::minus: return "minus";
        case Branch::zero: return "zero";
        default: return "plus";
    }
}

Eigen::Matrix3cd triplet_block(const ModelParams& p) {
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    const complex<double> off = (s / std::sqrt(2.0)) * std::exp(1i * p.phi);

    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 0) = p.g - c;
    h(1, 1) = -p.g;
    h(2, 2) = p.g + c;
    h(0, 1) = off;
    h(1, 0) = std::conj(off);
    h(1, 2) = off;
    h(2, 1) = std::conj(off);
    return h;
}

Eigen::Matrix4cd build_hamiltonian(const ModelParams& p) {
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    h.topLeftCorner<3, 3>() = triplet_block(p);
    h(3, 3) = -p.g;  // singlet, decoupled
    return h;
}

ShiftedRoots solve_shifted_eigenvalues(double theta, double g) {
    const double c = std::cos(theta);
    const double cc = c * c;

    // Depressed form t^3 + p t + q with X = t - 2g/3.  The block is
    // Hermitian, so p < 0 and all three roots are real.
    const double a2 = 2.0 * g;
    const double p = -1.0 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 + a2 / 3.0 - 2.0 * g * cc;

    const double m = std::sqrt(-p / 3.0);
    double arg = -q / (2.0 * m * m * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double ang = std::acos(arg) / 3.0;

    std::array<double, 3> roots{};
    for (int k = 0; k < 3; ++k)
        roots[k] = 2.0 * m * std::cos(ang - 2.0 * kPi * k / 3.0) - a2 / 3.0;

    // Newton polish on the original cubic.
    for (double& x : roots) {
        for (int it = 0; it < 3; ++it) {
            const double f = cubic_value(x, g, cc);
            const double df = cubic_slope(x, g);
            if (df == 0.0) break;
            x -= f / df;
        }
    }

    std::sort(roots.begin(), roots.end());  // ascending: minus, zero, plus
    ShiftedRoots out;
    out.minus = roots[0];
    out.zero = roots[1];
    out.plus = roots[2];
    out.min_gap = std::min(roots[1] - roots[0], roots[2] - roots[1]);
    if (out.min_gap < kRootGapTol) {
        std::ostringstream msg;
        msg << "degenerate shifted eigenvalues at theta=" << theta << " g=" << g
            << " (gap " << out.min_gap << ")";
        throw DegenerateRoots(msg.str());
    }
    return out;
}

int anchor_m(Branch branch) {
    switch (branch) {
        case Branch::minus: return -1;
        case Branch::zero: return 0;
        default: return +1;
    }
}

int pole_m(Branch branch, double g) {
    // Pole spectrum: X = +1 (|1;+1>), -1 (|1;-1>), -2g (|1;0>).
    struct Slot { double x; int m; };
    std::array<Slot, 3> slots{Slot{1.0, +1}, Slot{-1.0, -1}, Slot{-2.0 * g, 0}};
    std::sort(slots.begin(), slots.end(),
              [](const Slot& l, const Slot& r) { return l.x < r.x; });
    const double gap = std::min(slots[1].x - slots[0].x, slots[2].x - slots[1].x);
    if (gap < kRootGapTol) {
        std::ostringstream msg;
        msg << "pole spectrum degenerate at g=" << g;
        throw DegenerateRoots(msg.str());
    }
    return slots[static_cast<int>(branch)].m;
}

namespace {

// Dense eigensolve of the triplet block with the branch picked by eigenvalue
// order, re-gauged to the (e^{i phi} a, b, e^{-i phi} c) convention.
std::pair<EigenSolution, TripletState>
dense_eigenstate(const ModelParams& p, Branch branch, double x, double msq) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(triplet_block(p));
    Eigen::Vector3cd v = es.eigenvectors().col(static_cast<int>(branch));

    const complex<double> eiphi = std::exp(1i * p.phi);
    if (std::abs(v(1)) > 1e-8) {
        v *= std::conj(v(1)) / std::abs(v(1));
    } else if (std::abs(v(0)) > 1e-8) {
        v *= eiphi * std::conj(v(0)) / std::abs(v(0));
    } else {
        v *= std::conj(eiphi) * std::conj(v(2)) / std::abs(v(2));
    }

    EigenSolution sol;
    sol.branch = branch;
    sol.x = x;
    sol.energy = x + p.g;
    sol.a = (v(0) * std::conj(eiphi)).real();
    sol.b = v(1).real();
    sol.c = (v(2) * eiphi).real();
    sol.msq = msq;
    return {sol, TripletState{v}};
}

} // namespace

std::pair<EigenSolution, TripletState>
instantaneous_eigenstate(const ModelParams& p, Branch branch) {
    const ShiftedRoots roots = solve_shifted_eigenvalues(p.theta, p.g);
    const double x = roots[branch];
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    const double cc = c * c;
    const double msq = eigen_norm_poly(x, c, s);

    if (msq < kMsqFallbackTol)
        return dense_eigenstate(p, branch, x, msq);

    const double rm = std::sqrt(msq);
    EigenSolution sol;
    sol.branch = branch;
    sol.x = x;
    sol.energy = x + p.g;
    sol.a = (x - c) * s / (std::sqrt(2.0) * rm);
    sol.b = (x * x - cc) / rm;
    sol.c = (x + c) * s / (std::sqrt(2.0) * rm);
    sol.msq = msq;

    const complex<double> eiphi = std::exp(1i * p.phi);
    TripletState st;
    st.amps << eiphi * sol.a, complex<double>(sol.b, 0.0), std::conj(eiphi) * sol.c;
    return {sol, st};
}

SchmidtData schmidt_decompose(const TripletState& state) {
    const double norm = state.amps.norm();
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("triplet state is not normalized");

    // Coefficient matrix in the product basis, row = qubit a, col = qubit b.
    const complex<double> mid = state.amps(1) / std::sqrt(2.0);
    Eigen::Matrix2cd psi;
    psi << state.amps(2), mid,
           mid, state.amps(0);

    Eigen::Matrix2cd rho_a = psi * psi.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho_a);

    SchmidtData out;
    out.p2 = std::max(0.0, es.eigenvalues()(0));
    out.p1 = std::max(0.0, es.eigenvalues()(1));
    out.r = out.p1 - out.p2;
    out.vecs_a[0] = es.eigenvectors().col(1);
    out.vecs_a[1] = es.eigenvectors().col(0);

    const double ps[2] = {out.p1, out.p2};
    for (int k = 0; k < 2; ++k) {
        Eigen::Vector2cd b = psi.transpose() * out.vecs_a[k].conjugate();
        if (ps[k] > 1e-14 && b.norm() > 1e-12) {
            out.vecs_b[k] = b / b.norm();
        } else {
            // Zero-weight channel: take the orthogonal complement of the
            // other co-vector, first nonzero component made real positive.
            const Eigen::Vector2cd& o = out.vecs_b[1 - k];
            Eigen::Vector2cd perp;
            perp << -std::conj(o(1)), std::conj(o(0));
            if (std::abs(perp(0)) > 1e-12)
                perp *= std::conj(perp(0)) / std::abs(perp(0));
            else
                perp *= std::conj(perp(1)) / std::abs(perp(1));
            out.vecs_b[k] = perp;
        }
    }

    if (out.r < kSchmidtDegTol) {
        std::ostringstream msg;
        msg << "degenerate Schmidt coefficients (r = " << out.r << ")";
        throw DegenerateSchmidt(msg.str());
    }
    return out;
}

double bloch_length(double theta, double g, Branch branch) {
    const ShiftedRoots roots = solve_shifted_eigenvalues(theta, g);
    const double x = roots[branch];
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double msq = eigen_norm_poly(x, c, s);

    if (msq < kMsqFallbackTol) {
        // Pole or equatorial zero-branch point: get |r| from the reduced
        // operator of the dense state, reattach the sign of X.
        auto [sol, st] =
            instantaneous_eigenstate(ModelParams::canonical(g, theta, 0.0), branch);
        const complex<double> mid = st.amps(1) / std::sqrt(2.0);
        Eigen::Matrix2cd psi;
        psi << st.amps(2), mid, mid, st.amps(0);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(psi * psi.adjoint());
        const double mag = es.eigenvalues()(1) - es.eigenvalues()(0);
        return (x >= 0.0 ? 1.0 : -1.0) * mag;
    }

    // (a + c) sqrt(2 b^2 + (c - a)^2) = 2 X s D / msq, D^2 = X^4 - 2X^2 c^2 + c^2.
    return 2.0 * x * s * std::sqrt(scale_denom_sq(x, c, s)) / msq;
}

} // namespace cberry
