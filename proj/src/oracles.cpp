#include "cberry/oracles.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace cberry {

using std::complex;
using namespace std::complex_literals;

namespace {

Eigen::Matrix3cd block_at(const LoopPath& path, double g, double s) {
    return triplet_block(
        ModelParams::canonical(g, path.theta_at(s), path.phi_at(s)));
}

// Dense eigensolve with the branch picked by eigenvalue order; the order is
// stable along any path that keeps the spectrum gapped.
Eigen::Vector3cd dense_state(const Eigen::Matrix3cd& h, Branch branch,
                             double* min_gap) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
    const auto& ev = es.eigenvalues();
    if (min_gap) *min_gap = std::min(ev(1) - ev(0), ev(2) - ev(1));
    return es.eigenvectors().col(static_cast<int>(branch));
}

double dense_energy(const Eigen::Matrix3cd& h, Branch branch) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
    return es.eigenvalues()(static_cast<int>(branch));
}

// One fixed-step RK4 update of i psi' = H(t) psi.
template <typename Matrix, typename Vector, typename HamOf>
void rk4_step(const HamOf& h_of, double t, double dt, Vector& psi) {
    const complex<double> mi(0.0, -1.0);
    const Matrix h1 = h_of(t);
    const Matrix h2 = h_of(t + 0.5 * dt);
    const Matrix h3 = h_of(t + dt);
    const Vector k1 = mi * (h1 * psi);
    const Vector k2 = mi * (h2 * (psi + 0.5 * dt * k1));
    const Vector k3 = mi * (h2 * (psi + 0.5 * dt * k2));
    const Vector k4 = mi * (h3 * (psi + dt * k3));
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Simpson rule over [0, T] with an even number of intervals.
template <typename F>
double simpson(const F& f, double T, int intervals) {
    double acc = f(0.0) + f(T);
    for (int j = 1; j < intervals; ++j) {
        const double t = T * static_cast<double>(j) / intervals;
        acc += (j % 2 == 1 ? 4.0 : 2.0) * f(t);
    }
    return acc * T / (3.0 * intervals);
}

// Co-vector of channel k: apply the state to the a-eigenvector.  For a
// zero-weight channel fall back to the complement of the other co-vector.
Eigen::Vector2cd derived_covector(const TripletState& st,
                                  const std::array<Eigen::Vector2cd, 2>& a_vecs,
                                  int k) {
    const complex<double> mid = st.amps(1) / std::sqrt(2.0);
    Eigen::Matrix2cd psi_m;
    psi_m << st.amps(2), mid, mid, st.amps(0);
    Eigen::Vector2cd b = psi_m.transpose() * a_vecs[k].conjugate();
    const double nrm = b.norm();
    if (nrm > 1e-9) return Eigen::Vector2cd(b / nrm);
    Eigen::Vector2cd other = psi_m.transpose() * a_vecs[1 - k].conjugate();
    other.normalize();
    return Eigen::Vector2cd(-std::conj(other(1)), std::conj(other(0)));
}

} // namespace

double wilson_loop_from_states(const std::vector<Eigen::Vector3cd>& states) {
    if (states.size() < 2)
        throw std::invalid_argument("need at least two states for a loop");
    complex<double> prod = 1.0;
    const size_t n = states.size();
    for (size_t j = 0; j < n; ++j)
        prod *= states[j].dot(states[(j + 1) % n]);
    return -std::arg(prod);
}

double wilson_loop_phase(const LoopPath& path, double g, Branch branch,
                         int n_points) {
    if (n_points < 64)
        throw std::invalid_argument("wilson loop needs at least 64 points");
    std::vector<Eigen::Vector3cd> states;
    states.reserve(n_points);
    for (int j = 0; j < n_points; ++j) {
        const double s = static_cast<double>(j) / n_points;
        double gap = 0.0;
        states.push_back(dense_state(block_at(path, g, s), branch, &gap));
        if (gap < kPathGapTol) {
            std::ostringstream msg;
            msg << "eigen-gap " << gap << " below threshold at s=" << s;
            throw DegenerateAlongPath(msg.str());
        }
    }
    return wilson_loop_from_states(states);
}

PropagationResult adiabatic_propagate(const LoopPath& path, double g,
                                      Branch branch, double T, long steps) {
    if (T <= 0.0 || steps < 2)
        throw std::invalid_argument("propagation needs T > 0 and steps >= 2");

    const Eigen::Matrix3cd h0 = block_at(path, g, 0.0);
    double gap0 = 0.0;
    const Eigen::Vector3cd n0 = dense_state(h0, branch, &gap0);
    if (gap0 < kPathGapTol)
        throw DegenerateAlongPath("initial spectrum degenerate");
    const double e_ref = dense_energy(h0, branch);

    // Propagate in the frame shifted by the initial energy: the followed
    // eigenstate then rotates slowly and RK4 keeps its norm to ~1e-12 even
    // at strong coupling.
    const Eigen::Matrix3cd id = Eigen::Matrix3cd::Identity();
    const auto h_shifted = [&](double t) {
        return Eigen::Matrix3cd(block_at(path, g, t / T) - e_ref * id);
    };

    std::array<double, 3> pop0{0.0, 0.0, 0.0};
    pop0[static_cast<int>(branch)] = 1.0;

    const double dt = T / static_cast<double>(steps);
    const long sample_stride = std::max<long>(1, steps / 1024);

    Eigen::Vector3cd psi = n0;
    double drift = 0.0;
    for (long j = 0; j < steps; ++j) {
        rk4_step<Eigen::Matrix3cd>(h_shifted, j * dt, dt, psi);
        if ((j + 1) % sample_stride == 0 || j + 1 == steps) {
            const double t = (j + 1) * dt;
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(
                block_at(path, g, t / T));
            double dev = 0.0;
            for (int n = 0; n < 3; ++n) {
                const double pop = std::norm(es.eigenvectors().col(n).dot(psi));
                dev += std::abs(pop - pop0[n]);
            }
            drift = std::max(drift, dev);
        }
    }

    // negated comparison so a non-finite norm (overflowed integrator) trips too
    const double norm_dev = std::abs(psi.norm() - 1.0);
    if (!(norm_dev <= kNormDriftTol)) {
        std::ostringstream msg;
        msg << "integrator norm drift " << norm_dev;
        throw NormDrift(msg.str());
    }

    // Dynamical phase of the followed branch.  The geometric phase uses the
    // shifted-frame residual integral(E_n - E_ref) dt, which stays small, so
    // the subtraction loses no precision at large T.
    const auto energy_of = [&](double t) {
        return dense_energy(block_at(path, g, t / T), branch);
    };
    const int simpson_intervals = 4096;
    const double int_e = simpson(energy_of, T, simpson_intervals);
    const double int_e_resid = simpson(
        [&](double t) { return energy_of(t) - e_ref; }, T, simpson_intervals);

    PropagationResult res;
    res.final_state = TripletState{psi};
    res.populations_drift = drift;
    res.total_phase = wrap_angle(std::arg(n0.dot(psi)) - e_ref * T);
    res.dynamical_phase = -int_e;
    res.geometric_phase = wrap_angle(std::arg(n0.dot(psi)) + int_e_resid);
    res.T = T;
    res.steps = steps;

    if (drift > kAdiabaticDriftFail) {
        std::ostringstream msg;
        msg << "populations drift " << drift << " at T=" << T
            << ": sweep too fast for the adiabatic regime";
        throw AdiabaticityFailure(msg.str());
    }
    return res;
}

double singlet_geometric_phase(const LoopPath& path, double g, double T,
                               long steps) {
    const auto h_of = [&](double t) {
        return build_hamiltonian(
            ModelParams::canonical(g, path.theta_at(t / T), path.phi_at(t / T)));
    };
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(3) = 1.0;
    const Eigen::Vector4cd start = psi;

    const double dt = T / static_cast<double>(steps);
    for (long j = 0; j < steps; ++j)
        rk4_step<Eigen::Matrix4cd>(h_of, j * dt, dt, psi);

    const double total = std::arg(start.dot(psi));
    const double dynamical = g * T;  // -integral of E dt, E = -g constant
    return wrap_angle(total - dynamical);
}

SchmidtTrack schmidt_track(const LoopPath& path, double g, Branch branch,
                           int n_points) {
    if (n_points < 64)
        throw std::invalid_argument("schmidt track needs at least 64 points");

    SchmidtTrack track;
    track.samples.reserve(n_points);

    std::vector<std::array<double, 2>> p(n_points);
    std::vector<std::array<Eigen::Vector2cd, 2>> va(n_points), vb(n_points);
    std::vector<TripletState> states(n_points);

    for (int j = 0; j < n_points; ++j) {
        const double s = static_cast<double>(j) / n_points;
        const ModelParams params =
            ModelParams::canonical(g, path.theta_at(s), path.phi_at(s));
        auto [sol, st] = instantaneous_eigenstate(params, branch);
        states[j] = st;
        const SchmidtData sd = schmidt_decompose(st);  // throws on degeneracy
        track.samples.push_back(sd);
        p[j] = {sd.p1, sd.p2};
        va[j] = sd.vecs_a;
        vb[j] = sd.vecs_b;
        // Channel 1 carries weight (1 + r)/2 with signed r: for a negative
        // shifted eigenvalue that is the minor eigenvector.
        if (j == 0 && sol.x < 0.0) {
            std::swap(p[j][0], p[j][1]);
            std::swap(va[j][0], va[j][1]);
            std::swap(vb[j][0], vb[j][1]);
        }
    }

    track.p_start[0] = p[0][0];
    track.p_start[1] = p[0][1];
    for (int j = 0; j < n_points; ++j) {
        const double p1 = std::max(p[j][0], p[j][1]);
        const double p1_0 = std::max(p[0][0], p[0][1]);
        track.p_variation = std::max(track.p_variation, std::abs(p1 - p1_0));
    }
    track.nontransition = track.p_variation < kTransitionPTol;

    // Order channels by overlap with the previous point, then parallel
    // transport: re-phase each vector to a real-positive overlap with its
    // predecessor.  The closure overlap onto the j = 0 vectors carries the
    // whole (wrapped) holonomy.
    auto transport = [&](std::vector<std::array<Eigen::Vector2cd, 2>>& v,
                         std::vector<std::array<double, 2>>& weights,
                         double out[2]) {
        for (int j = 1; j < n_points; ++j) {
            if (std::abs(v[j - 1][0].dot(v[j][0])) <
                std::abs(v[j - 1][0].dot(v[j][1]))) {
                std::swap(v[j][0], v[j][1]);
                std::swap(weights[j][0], weights[j][1]);
            }
            for (int k = 0; k < 2; ++k) {
                const complex<double> o = v[j - 1][k].dot(v[j][k]);
                if (std::abs(o) > 1e-14) v[j][k] *= std::conj(o) / std::abs(o);
            }
        }
        for (int k = 0; k < 2; ++k)
            out[k] = -std::arg(v[n_points - 1][k].dot(v[0][k]));
    };

    auto p_a = p;
    transport(va, p_a, track.Gamma_a);
    {
        auto p_b = p;
        auto vb_indep = vb;
        transport(vb_indep, p_b, track.Gamma_b);
    }

    // Weighted phases.  The co-vectors derived from the transported
    // a-eigenvectors keep sum_k sqrt(p_k) a_k (x) b_k = Psi exact at every
    // grid point, so sum_k (Gamma~_a;k + Gamma~_b;k) reassembles the
    // composite phase: per-step arguments are small and the a/b closure
    // arguments cancel pairwise.
    std::array<Eigen::Vector2cd, 2> b_first{derived_covector(states[0], va[0], 0),
                                            derived_covector(states[0], va[0], 1)};
    std::array<Eigen::Vector2cd, 2> b_prev = b_first;
    for (int j = 1; j <= n_points; ++j) {
        const int jj = j % n_points;
        const std::array<Eigen::Vector2cd, 2> b_cur =
            (jj == 0) ? b_first
                      : std::array<Eigen::Vector2cd, 2>{
                            derived_covector(states[jj], va[jj], 0),
                            derived_covector(states[jj], va[jj], 1)};
        for (int k = 0; k < 2; ++k) {
            const double w = std::sqrt(p_a[j - 1][k] * p_a[jj][k]);
            const complex<double> oa = va[j - 1][k].dot(va[jj][k]);
            const complex<double> ob = b_prev[k].dot(b_cur[k]);
            if (std::abs(oa) > 1e-14) track.Gamma_tilde_a[k] -= w * std::arg(oa);
            if (std::abs(ob) > 1e-14) track.Gamma_tilde_b[k] -= w * std::arg(ob);
        }
        b_prev = b_cur;
    }

    return track;
}

double composite_from_schmidt(const SchmidtTrack& track) {
    return track.Gamma_tilde_a[0] + track.Gamma_tilde_a[1] +
           track.Gamma_tilde_b[0] + track.Gamma_tilde_b[1];
}

std::pair<double, double> mixed_state_phase_numeric(const SchmidtTrack& track) {
    if (!track.nontransition) {
        std::ostringstream msg;
        msg << "Schmidt coefficients vary along the path (max deviation "
            << track.p_variation << "): subsystem phase undefined";
        throw TransitionPath(msg.str());
    }
    auto average = [&](const double gamma[2]) {
        const complex<double> z = track.p_start[0] * std::exp(1i * gamma[0]) +
                                  track.p_start[1] * std::exp(1i * gamma[1]);
        return std::arg(z);
    };
    const double ga = average(track.Gamma_a);
    const double gb = average(track.Gamma_b);
    if (std::abs(wrap_angle(ga - gb)) > 1e-6)
        throw DomainError("permutation symmetry violated in numeric tracking");
    return {ga, gb};
}

} // namespace cberry
