#include <doctest.h>

#include <cmath>

#include "dcemon/errors.hpp"
#include "dcemon/evolve.hpp"
#include "dcemon/spectral.hpp"
#include "helpers.hpp"
#include "support/oracles.hpp"

using namespace dcemon;
using doctest::Approx;

namespace {

EvolutionConfig evolution(int n_max, double t_end, int samples)
{
    EvolutionConfig cfg;
    cfg.n_max = n_max;
    cfg.t_end = t_end;
    cfg.samples = samples;
    return cfg;
}

}  // namespace

TEST_CASE("decoupled excited detector stays excited")
{
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.0});
    auto cfg = evolution(40, 1000.0, 20);
    cfg.initial.terms = {{2, 0, 1.0}};
    const auto res = run_experiment(det, unit::modulation(1e-3), cfg);
    for (const auto& p : res.series.level_populations)
        CHECK(p[1] == Approx(1.0).epsilon(1e-12));
    CHECK(res.series.n_mean.back() > 0.0);
}

TEST_CASE("vacuum Rabi oscillation")
{
    const double g = 0.01;
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {g});
    auto cfg = evolution(4, 700.0, 70);
    cfg.margin_layers = 1;
    cfg.initial.terms = {{2, 0, 1.0}};
    const auto res = run_experiment(det, unit::modulation(0.0), cfg);
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        const double c = std::cos(g * res.series.times[i]);
        CHECK(res.series.level_populations[i][1] == Approx(c * c).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("zero-duration run returns the initial observables")
{
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.01});
    const auto res = run_experiment(det, unit::modulation(1e-3), evolution(10, 0.0, 10));
    REQUIRE(res.series.size() >= 1);
    CHECK(res.series.times[0] == 0.0);
    CHECK(res.series.n_mean.back() == 0.0);
    CHECK(res.series.xvar_plus.back() == Approx(0.5));
    CHECK(res.series.xvar_minus.back() == Approx(0.5));
    CHECK(res.series.level_populations.back()[0] == Approx(1.0));
    CHECK_FALSE(res.series.mandel_q.back().has_value());
}

TEST_CASE("agrees with a dense matrix exponential")
{
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.01, 0.012}, {0.003, -0.002});
    const auto mod = unit::modulation(2e-3);
    auto cfg = evolution(12, 300.0, 3);
    const auto h = experiment_hamiltonian(det, mod, cfg);
    const auto initial = unit::random_state(h.space(), 11);
    cfg.dt = default_time_step(det, mod, h, cfg.n_max) / 4;
    cfg.truncation_tol = 1.0;
    const auto res = unitary_evolve(h, initial, cfg);
    const auto exact = testsupport::dense_propagate(h.constant_part(), initial.amplitudes(), 300.0);
    CHECK((res.final_state.amplitudes() - exact).norm() < 1e-8);
}

TEST_CASE("step halving converges")
{
    std::vector<double> g;
    for (int l = 1; l < 4; ++l)
        g.push_back(1e-2 * std::sqrt(double(l)));
    const auto det = DetectorSpec::ladder_from_detunings(1.0, g);
    const auto mod = unit::modulation(1e-3);
    auto cfg = evolution(30, 3.0 / mod.epsilon, 4);
    const auto coarse = run_experiment(det, mod, cfg);
    cfg.dt = coarse.dt / 2;
    const auto fine = run_experiment(det, mod, cfg);
    CHECK(std::abs(fine.series.n_mean.back() - coarse.series.n_mean.back())
          < 1e-8 * std::abs(fine.series.n_mean.back()));
}

TEST_CASE("norm, parity and energy are conserved")
{
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.01, 0.01 * std::sqrt(2.0), 0.01 * std::sqrt(3.0)});
    const auto mod = unit::modulation(1e-3);
    auto cfg = evolution(30, 3.0 / mod.epsilon, 50);
    const auto h = experiment_hamiltonian(det, mod, cfg);
    REQUIRE(h.time_independent());
    const auto space = h.space();
    const auto& hop = h.constant_part();
    double odd = 0.0, energy_drift = 0.0;
    // energy stays ~beta0 in magnitude; compare against the coupling scale
    const double scale = 0.01;
    const double e0 = expectation(StateVector::basis(space, 1, 0), hop).real();
    run_experiment(det, mod, cfg, [&](double, const StateVector& s) {
        for (Index i = 0; i < space.dim(); ++i) {
            const auto [j, n] = space.level_photons(i);
            if ((n + j - 1) % 2)
                odd = std::max(odd, std::abs(s.amplitudes()[i]));
        }
        energy_drift = std::max(energy_drift, std::abs(expectation(s, hop).real() - e0) / scale);
        CHECK(s.norm() == Approx(1.0).epsilon(1e-9));
    });
    CHECK(odd < 1e-10);
    CHECK(energy_drift < 1e-9);
}

TEST_CASE("truncation guard")
{
    const auto det = DetectorSpec::empty_cavity();
    const auto mod = unit::modulation(1e-3);
    CHECK_THROWS_AS(run_experiment(det, mod, evolution(10, 6.0 / mod.epsilon, 10)), TruncationError);
}

TEST_CASE("frame mismatch and unnormalized input are rejected")
{
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.01});
    auto cfg = evolution(5, 1.0, 1);
    const auto h = experiment_hamiltonian(det, unit::modulation(0.0), cfg);
    auto lab = cfg;
    lab.frame = Frame::lab;
    CHECK_THROWS_AS(unitary_evolve(h, StateVector::basis(h.space(), 1, 0), lab), PhysicsError);
    StateVector half(h.space(), 0.5 * StateVector::basis(h.space(), 1, 0).amplitudes());
    CHECK_THROWS_AS(unitary_evolve(h, half, cfg), PhysicsError);
}

TEST_CASE("rotated two-level frame reproduces the interaction frame")
{
    const double g = 1e-2, eps = 3e-4;
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {g}, {8 * g});
    auto mod = unit::modulation(eps);
    mod.r = two_level_resonance_shift(g, 8 * g, +1, -eps / 2);
    auto cfg = evolution(40, 1.0 / eps, 1);
    cfg.dt = 0.5;
    const auto ref = run_experiment(det, mod, cfg);
    cfg.frame = Frame::two_level_rotated;
    const auto rot = run_experiment(det, mod, cfg);
    const auto mapped = two_level_to_interaction_frame(rot.final_state, mod.r, cfg.t_end);
    CHECK((mapped.amplitudes() - ref.final_state.amplitudes()).norm() < 1e-8);
    CHECK(rot.series.n_mean.back() == Approx(ref.series.n_mean.back()).epsilon(1e-8));
}

TEST_CASE("oscillator detector follows its closed form at early times")
{
    const double g = 1e-2, eps = 1e-3;
    const auto mod = unit::modulation(eps);
    const double t_end = 0.3 / mod.beta0();
    auto cfg = evolution(60, t_end, 12);
    const auto res = run_experiment(DetectorSpec::harmonic_oscillator(g, 1.0), mod, cfg);
    for (std::size_t i = 0; i < res.series.size(); ++i) {
        const auto cf = ho_closed_form_check(g, mod, res.series.times[i]);
        CHECK(res.series.xvar_plus[i] == Approx(cf.xvar_plus).epsilon(1e-4));
        CHECK(res.series.xvar_minus[i] == Approx(cf.xvar_minus).epsilon(1e-4));
    }
    CHECK_THROWS_AS(ho_closed_form_check(g, unit::modulation(eps, g), 1.0), DomainError);
}

TEST_CASE("output grid merges samples and snapshots")
{
    auto cfg = evolution(5, 10.0, 5);
    cfg.snapshot_times = {3.0, 4.0};
    const auto grid = output_grid(cfg);
    CHECK(grid == std::vector<double>{0.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0});
}
