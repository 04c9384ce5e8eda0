#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "cberry/oracles.hpp"

using namespace cberry;
using namespace std::complex_literals;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("wilson loop of a zero-length path vanishes") {
    const LoopPath still = LoopPath::parametrized([](double) { return 0.7; },
                                                  [](double) { return 0.3; });
    CHECK(std::abs(wilson_loop_phase(still, 1.0, Branch::plus, 128)) < 1e-12);
}

TEST_CASE("wilson loop reproduces the uncoupled Berry value") {
    const double wilson = wilson_loop_phase(LoopPath::constant_polar(kPi / 3.0), 0.0,
                                            Branch::plus, 4096);
    CHECK(std::abs(wrap_angle(wilson + kPi)) < 1e-4);
}

TEST_CASE("wilson loop agrees with the closed form at finite coupling") {
    const double th = kPi / 4.0, g = 2.0;
    const double wilson =
        wilson_loop_phase(LoopPath::constant_polar(th), g, Branch::plus, 4096);
    const double analytic = composite_phase_constant_theta(th, g, Branch::plus);
    CHECK(std::abs(wrap_angle(wilson - analytic)) < 1e-4);
}

TEST_CASE("wilson loop converges at second order") {
    const LoopPath path = LoopPath::constant_polar(0.4 * kPi);
    std::vector<double> gamma;
    for (int n = 256; n <= 8192; n *= 2)
        gamma.push_back(wilson_loop_phase(path, 1.0, Branch::plus, n));
    for (size_t k = 0; k + 2 < gamma.size(); ++k) {
        const double e1 = std::abs(wrap_angle(gamma[k] - gamma[k + 1]));
        const double e2 = std::abs(wrap_angle(gamma[k + 1] - gamma[k + 2]));
        CHECK(std::log2(e1 / e2) > 1.9);
    }
}

TEST_CASE("wilson loop is gauge invariant under random per-point phases") {
    const int n = 512;
    const LoopPath path = LoopPath::constant_polar(1.1);
    std::vector<Eigen::Vector3cd> states;
    for (int j = 0; j < n; ++j) {
        auto [sol, st] = instantaneous_eigenstate(
            ModelParams::canonical(1.5, 1.1, 2.0 * kPi * j / n), Branch::plus);
        states.push_back(st.amps);
    }
    const double bare = wilson_loop_from_states(states);

    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uphase(0.0, 2.0 * kPi);
    for (auto& v : states) v *= std::exp(1i * uphase(rng));
    const double twisted = wilson_loop_from_states(states);

    CHECK(std::abs(wrap_angle(bare - twisted)) < 1e-10);
    CHECK(std::abs(wrap_angle(bare - wilson_loop_phase(path, 1.5, Branch::plus, n))) <
          1e-10);
}

TEST_CASE("wilson loop flags gap closure on the path") {
    CHECK_THROWS_AS(
        wilson_loop_phase(LoopPath::polar_sine_loop(), 0.5, Branch::zero, 256),
        DegenerateAlongPath);
}

TEST_CASE("static field accumulates a purely dynamical phase") {
    const LoopPath still = LoopPath::parametrized([](double) { return 0.9; },
                                                  [](double) { return 0.2; });
    const PropagationResult prop =
        adiabatic_propagate(still, 1.0, Branch::plus, 50.0, 100'000);
    CHECK(std::abs(prop.geometric_phase) < 1e-9);
    CHECK(std::abs(wrap_angle(prop.total_phase - wrap_angle(prop.dynamical_phase))) <
          1e-9);
    CHECK(prop.populations_drift < 1e-12);
}

TEST_CASE("adiabatic propagation reproduces the uncoupled Berry value") {
    const PropagationResult prop = adiabatic_propagate(
        LoopPath::constant_polar(kPi / 3.0), 0.0, Branch::plus, 2000.0, 2'000'000);
    CHECK(std::abs(wrap_angle(prop.geometric_phase + kPi)) < 1e-2);
    CHECK(prop.populations_drift < 1e-3);
    CHECK(std::abs(prop.final_state.amps.norm() - 1.0) < 1e-9);
}

TEST_CASE("adiabatic propagation sees the strong-coupling quench") {
    const PropagationResult prop = adiabatic_propagate(
        LoopPath::constant_polar(kPi / 6.0), 100.0, Branch::plus, 2000.0, 2'000'000);
    CHECK(std::abs(prop.geometric_phase) < 0.05);
    CHECK(prop.populations_drift < 1e-3);
}

TEST_CASE("doubling the period suppresses the populations drift") {
    for (const double g : {0.5, 2.0}) {
        const LoopPath path = LoopPath::constant_polar(kPi / 3.0);
        const double d2000 =
            adiabatic_propagate(path, g, Branch::plus, 2000.0, 1'000'000)
                .populations_drift;
        const double d4000 =
            adiabatic_propagate(path, g, Branch::plus, 4000.0, 2'000'000)
                .populations_drift;
        CHECK(d4000 <= 0.5 * d2000);
    }
}

TEST_CASE("a sweep far too fast fails the adiabaticity contract") {
    CHECK_THROWS_AS(adiabatic_propagate(LoopPath::constant_polar(kPi / 3.0), 1.0,
                                        Branch::plus, 5.0, 50'000),
                    AdiabaticityFailure);
}

TEST_CASE("an unstable step size fails the norm contract") {
    CHECK_THROWS_AS(adiabatic_propagate(LoopPath::constant_polar(kPi / 3.0), 1.0,
                                        Branch::plus, 2000.0, 500),
                    NormDrift);
}

TEST_CASE("singlet acquires no geometric phase") {
    CHECK(std::abs(singlet_geometric_phase(LoopPath::constant_polar(kPi / 3.0), 1.0,
                                           200.0, 200'000)) < 1e-9);
    CHECK(std::abs(singlet_geometric_phase(LoopPath::polar_sine_loop(), 2.0, 200.0,
                                           200'000)) < 1e-9);
}

TEST_CASE("schmidt track on a constant-polar loop") {
    const SchmidtTrack track = schmidt_track(LoopPath::constant_polar(kPi / 3.0), 0.0,
                                             Branch::plus, 2048);
    CHECK(track.nontransition);
    CHECK(std::abs(wrap_angle(track.Gamma_a[0] + kPi / 2.0)) < 1e-4);
    CHECK(std::abs(wrap_angle(track.Gamma_a[0] + track.Gamma_a[1])) < 1e-4);
}

TEST_CASE("schmidt track matches the analytic schmidt-vector phase") {
    const double th = 0.4 * kPi, g = 1.5;
    const SchmidtTrack track =
        schmidt_track(LoopPath::constant_polar(th), g, Branch::plus, 4096);
    const auto [g1, g2] = schmidt_vector_phase(th, g, Branch::plus);
    CHECK(std::abs(wrap_angle(track.Gamma_a[0] - g1)) < 1e-4);
    CHECK(std::abs(wrap_angle(track.Gamma_a[1] - g2)) < 1e-4);
    CHECK(std::abs(wrap_angle(track.Gamma_b[0] - g1)) < 1e-4);
}

TEST_CASE("pole-crossing path is classified as a transition evolution") {
    const SchmidtTrack track =
        schmidt_track(LoopPath::polar_sine_loop(), 1.0, Branch::plus, 2048);
    CHECK(!track.nontransition);
    CHECK(track.p_variation > 1e-3);
    CHECK_THROWS_AS(mixed_state_phase_numeric(track), TransitionPath);
}

TEST_CASE("numeric mixed-state phase against the closed form") {
    for (const double th : {kPi / 6.0, 0.4 * kPi}) {
        for (const double g : {0.5, 2.0}) {
            const SchmidtTrack track =
                schmidt_track(LoopPath::constant_polar(th), g, Branch::plus, 4096);
            const auto [ga, gb] = mixed_state_phase_numeric(track);
            CHECK(std::abs(wrap_angle(ga - gb)) < 1e-6);
            const double analytic = subsystem_phase_constant_theta(th, g, Branch::plus);
            CHECK(std::abs(wrap_angle(ga - analytic)) < 1e-3);
        }
    }
}

TEST_CASE("numeric mixed-state phase at zero coupling") {
    const double th = 0.4 * kPi;
    const SchmidtTrack track =
        schmidt_track(LoopPath::constant_polar(th), 0.0, Branch::plus, 4096);
    const double ga = mixed_state_phase_numeric(track).first;
    const double omega = 2.0 * kPi * (1.0 - std::cos(th));
    CHECK(std::abs(wrap_angle(ga + omega / 2.0)) < 1e-3);
}

TEST_CASE("weighted schmidt phases reassemble the composite phase") {
    // single-channel product branch: the sum is the whole phase
    {
        const LoopPath path = LoopPath::constant_polar(kPi / 3.0);
        const SchmidtTrack track = schmidt_track(path, 0.0, Branch::plus, 2048);
        const double wilson = wilson_loop_phase(path, 0.0, Branch::plus, 2048);
        CHECK(std::abs(wrap_angle(composite_from_schmidt(track) - wilson)) < 1e-3);
    }
    {
        const LoopPath path = LoopPath::constant_polar(kPi / 4.0);
        const SchmidtTrack track = schmidt_track(path, 1.0, Branch::plus, 8192);
        const double wilson = wilson_loop_phase(path, 1.0, Branch::plus, 8192);
        CHECK(std::abs(wrap_angle(composite_from_schmidt(track) - wilson)) < 1e-3);
    }
    {
        const LoopPath path = LoopPath::polar_sine_loop();
        const SchmidtTrack track = schmidt_track(path, 2.0, Branch::plus, 8192);
        const double wilson = wilson_loop_phase(path, 2.0, Branch::plus, 8192);
        const double quad = transition_path_phase(path, 2.0, Branch::plus);
        CHECK(std::abs(wrap_angle(composite_from_schmidt(track) - wilson)) < 1e-3);
        CHECK(std::abs(wrap_angle(composite_from_schmidt(track) - quad)) < 1e-3);
    }
}

TEST_CASE("propagation follows the continuously tracked branch on a transition path") {
    // Distinguishes adiabatic continuation from character locking: the
    // transported state picks up the quadrature/wilson value (~ +2.10 at
    // g = 2), far from zero.
    const LoopPath path = LoopPath::polar_sine_loop();
    const PropagationResult prop =
        adiabatic_propagate(path, 2.0, Branch::plus, 4000.0, 4'000'000);
    const double quad = transition_path_phase(path, 2.0, Branch::plus);
    CHECK(prop.populations_drift < 5e-3);
    CHECK(std::abs(wrap_angle(prop.geometric_phase - quad)) < 0.1);
    CHECK(std::abs(prop.geometric_phase) > 2.0);
}

TEST_CASE("numeric mixed-state phase quenches at strong coupling") {
    const SchmidtTrack track = schmidt_track(LoopPath::constant_polar(kPi / 6.0),
                                             100.0, Branch::plus, 4096);
    CHECK(std::abs(wrap_angle(mixed_state_phase_numeric(track).first)) < 1e-3);
}

TEST_CASE("oracle triangle at a generic point") {
    const double th = kPi / 3.0, g = 2.0;
    const LoopPath path = LoopPath::constant_polar(th);
    const double analytic = composite_phase_constant_theta(th, g, Branch::zero);
    const double wilson = wilson_loop_phase(path, g, Branch::zero, 4096);
    const PropagationResult prop =
        adiabatic_propagate(path, g, Branch::zero, 2000.0, 2'000'000);
    CHECK(std::abs(wrap_angle(analytic - wilson)) < 1e-4);
    CHECK(std::abs(wrap_angle(wilson - prop.geometric_phase)) < 1e-2);
}
