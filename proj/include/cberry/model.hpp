#ifndef CBERRY_MODEL_HPP
#define CBERRY_MODEL_HPP

#include <Eigen/Dense>
#include <array>
#include <utility>

#include "cberry/errors.hpp"

// Two spin-1/2 particles with a uniaxial exchange coupling, both driven by a
// magnetic field of fixed magnitude pointing along (theta, phi).  Everything
// is dimensionless: energies in units of mu*B0, time in units of 1/(mu*B0),
// hbar = 1, and the coupling enters only through g = J/(mu*B0).
//
// Total-spin basis order used throughout: (|1;-1>, |1;0>, |1;+1>, |0;0>);
// the triplet block is the leading 3x3.  Two-qubit product basis for the
// Schmidt machinery: (|up>, |down>) per qubit, tensor order a (x) b, with
// |1;-1> = |dd>, |1;0> = (|ud>+|du>)/sqrt2, |1;+1> = |uu>.

namespace cberry {

inline constexpr double kRootGapTol = 1e-9;       // branch resolution
inline constexpr double kSchmidtDegTol = 1e-9;    // |p1 - p2| threshold
inline constexpr double kMsqFallbackTol = 1e-12;  // eigenvector-formula 0/0 guard

struct ModelParams {
    double g = 0.0;      // rescaled coupling J/(mu B0)
    double theta = 0.0;  // polar angle of the field direction, [0, pi]
    double phi = 0.0;    // azimuth, [0, 2 pi)

    // Folds (theta, phi) onto the canonical chart: theta reflected into
    // [0, pi] (azimuth shifted by pi when reflecting), phi wrapped to [0, 2pi).
    static ModelParams canonical(double g, double theta, double phi);
};

// Triplet-block eigenbranches.  Labels are fixed by continuation in g from
// the g = 0 anchor X = (-1, 0, +1); since the three roots stay in disjoint
// intervals for theta in (0, pi), continuation coincides with descending
// order of the shifted eigenvalue X.
enum class Branch { minus = 0, zero = 1, plus = 2 };

const char* branch_name(Branch b);

// Amplitudes over (|1;-1>, |1;0>, |1;+1>).
struct TripletState {
    Eigen::Vector3cd amps;
};

// One branch of the triplet block at fixed (theta, g): shifted eigenvalue X
// (energy minus g), the real eigenvector components (a, b, c) in the gauge
// amps = (e^{i phi} a, b, e^{-i phi} c), and the normalization polynomial
// msq = X^4 + (1 - 3 cos^2 theta) X^2 + cos^2 theta.
struct EigenSolution {
    Branch branch;
    double x = 0.0;
    double energy = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;
    double msq = 0.0;
};

// Schmidt data of a triplet-sector pure state. p1 >= p2, r = p1 - p2.
// vecs_a[k] is the reduced-operator eigenvector of qubit a with eigenvalue
// p_{k+1}; vecs_b[k] the co-vector obtained by applying the state.
struct SchmidtData {
    double p1 = 0.0, p2 = 0.0;
    double r = 0.0;
    std::array<Eigen::Vector2cd, 2> vecs_a;
    std::array<Eigen::Vector2cd, 2> vecs_b;
};

// The three real roots of X^3 + 2 g X^2 - X - 2 g cos^2(theta) = 0,
// labeled per Branch.
struct ShiftedRoots {
    double minus = 0.0, zero = 0.0, plus = 0.0;
    double min_gap = 0.0;

    double operator[](Branch b) const {
        switch (b) {
            case Branch::minus: return minus;
            case Branch::zero: return zero;
            default: return plus;
        }
    }
};

// Full 4x4 Hamiltonian in the basis (|1;-1>, |1;0>, |1;+1>, |0;0>).
Eigen::Matrix4cd build_hamiltonian(const ModelParams& params);

// Triplet 3x3 block H_c(theta, phi, g).
Eigen::Matrix3cd triplet_block(const ModelParams& params);

// Solves the shifted characteristic cubic; throws DegenerateRoots when two
// roots come within kRootGapTol (theta near 0 or pi with g near 1/2).
ShiftedRoots solve_shifted_eigenvalues(double theta, double g);

// Instantaneous eigenstate of the triplet block for one branch.  Uses the
// closed-form components unless msq underflows (poles, and theta = pi/2 on
// the zero branch), where it falls back to a dense eigensolve re-gauged so
// the |1;0> component is real non-negative, or failing that the |1;-1>
// component carries e^{i phi}.
std::pair<EigenSolution, TripletState>
instantaneous_eigenstate(const ModelParams& params, Branch branch);

// Schmidt decomposition of a normalized triplet-sector state.  Throws
// DegenerateSchmidt when |p1 - p2| < kSchmidtDegTol.
SchmidtData schmidt_decompose(const TripletState& state);

// Signed effective Bloch vector r = (a + c) sqrt(2 b^2 + (c - a)^2) of the
// branch eigenstate; |r| = p1 - p2 and sign(r) = sign(X).  phi-independent.
double bloch_length(double theta, double g, Branch branch);

// Normalization polynomial X^4 + (1 - 3 c^2) X^2 + c^2 rewritten as a sum of
// nonnegative terms; the direct form cancels catastrophically near the poles
// where the value shrinks to ~2 s^2.  (c, s) = (cos theta, sin theta).
inline double eigen_norm_poly(double x, double c, double s) {
    const double t = x * x - c * c;
    return t * t + (x * x + c * c) * s * s;
}

// Scale-factor denominator X^4 - 2 X^2 c^2 + c^2, same treatment.
inline double scale_denom_sq(double x, double c, double s) {
    const double t = x * x - c * c;
    return t * t + c * c * s * s;
}

// Magnetic quantum number of the branch's g = 0 anchor eigenstate
// (+1, 0, -1 for plus, zero, minus).
int anchor_m(Branch branch);

// Character of the branch at the theta -> 0 pole for the given g: the pole
// spectrum is X = (+1, -1, -2g) for (|1;+1>, |1;-1>, |1;0>), so the zero and
// minus slots swap characters across g = 1/2.  Throws DegenerateRoots at
// g = 1/2 where the pole spectrum is degenerate.
int pole_m(Branch branch, double g);

} // namespace cberry

#endif
