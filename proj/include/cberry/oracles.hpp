#ifndef CBERRY_ORACLES_HPP
#define CBERRY_ORACLES_HPP

#include <vector>

#include "cberry/model.hpp"
#include "cberry/phases.hpp"

// Numerical ground truth, independent of the closed forms: discrete Wilson
// loops over dense-eigensolver states, full Schrodinger propagation with
// dynamical-phase subtraction, and Schmidt-vector phase tracking.

namespace cberry {

inline constexpr double kPathGapTol = 1e-9;
inline constexpr double kNormDriftTol = 1e-6;
inline constexpr double kAdiabaticDriftFail = 1e-2;
inline constexpr double kTransitionPTol = 1e-8;

struct PropagationResult {
    TripletState final_state;
    double populations_drift = 0.0;  // max_t sum_n | |c_n(t)|^2 - |c_n(0)|^2 |
    double total_phase = 0.0;        // arg <n(Q_0) | Psi(T)>, wrapped
    double dynamical_phase = 0.0;    // -integral of E_n(t) dt, unwrapped
    double geometric_phase = 0.0;    // wrap(total - dynamical)
    double T = 0.0;
    long steps = 0;
};

// Discrete holonomy of an explicit state sequence: -arg prod <v_j|v_{j+1}>
// with the final factor closing onto v_0.  Gauge-invariant mod 2 pi.
double wilson_loop_from_states(const std::vector<Eigen::Vector3cd>& states);

// Wilson-loop phase of one branch around a closed path, using n_points
// dense-eigensolver states (any per-point gauge).  Throws DegenerateAlongPath
// if the instantaneous spectrum closes a gap below kPathGapTol anywhere on
// the grid.
double wilson_loop_phase(const LoopPath& path, double g, Branch branch,
                         int n_points);

// Integrates i d|Psi>/dt = H_c(t)|Psi> with fixed-step RK4 over the path
// traversed in time T, starting from the instantaneous eigenstate at s = 0.
// Propagation runs in a frame shifted by the initial energy, which keeps the
// integrator's norm drift far below contract at any coupling strength.
// Throws NormDrift (> kNormDriftTol) and AdiabaticityFailure
// (populations_drift > kAdiabaticDriftFail).
PropagationResult adiabatic_propagate(const LoopPath& path, double g,
                                      Branch branch, double T, long steps);

// Same propagation applied to the singlet |0;0> through the full 4x4
// Hamiltonian; returns the wrapped geometric phase (should vanish).
double singlet_geometric_phase(const LoopPath& path, double g, double T,
                               long steps);

// Schmidt decomposition tracked around a closed path.  Subsystem-a
// eigenvectors are parallel-transported (each step re-phased to a
// real-positive overlap with the previous point) and the unweighted phases
// Gamma_{xi;k} are discrete holonomies, closed on the starting vectors.
// Subsystem-b vectors are tracked the same way, independently, for the
// permutation-symmetry check.  The weighted phases use the co-vectors
// derived by applying the state to the a-eigenvectors, which keeps the pair
// decomposition exact so that the weighted sums reproduce the composite
// phase.  Vector 1 is the channel with weight (1 + r)/2, r signed.
struct SchmidtTrack {
    std::vector<SchmidtData> samples;     // one per grid point
    double Gamma_a[2] = {0.0, 0.0};       // unweighted holonomies, wrapped
    double Gamma_b[2] = {0.0, 0.0};
    double Gamma_tilde_a[2] = {0.0, 0.0}; // weighted accumulations
    double Gamma_tilde_b[2] = {0.0, 0.0};
    double p_start[2] = {0.0, 0.0};       // (p_1, p_2) at s = 0
    double p_variation = 0.0;             // max_s |p_1(s) - p_1(0)|
    bool nontransition = false;
};

SchmidtTrack schmidt_track(const LoopPath& path, double g, Branch branch,
                           int n_points);

// Composite phase reassembled from the weighted Schmidt-vector phases:
// sum_k (Gamma~_{a;k} + Gamma~_{b;k}).
double composite_from_schmidt(const SchmidtTrack& track);

// Subsystem mixed-state phases from the tracked holonomies:
// gamma_xi = arg sum_k p_k(0) exp(i Gamma_{xi;k}).  Defined only for
// nontransition tracks (throws TransitionPath otherwise); checks the
// permutation symmetry gamma_a = gamma_b to 1e-6.
std::pair<double, double> mixed_state_phase_numeric(const SchmidtTrack& track);

} // namespace cberry

#endif
