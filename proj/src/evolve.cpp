#include "dcemon/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "dcemon/errors.hpp"

namespace dcemon {

StateVector InitialState::build(const HilbertSpace& space) const
{
    if (terms.empty())
        throw PhysicsError("initial state needs at least one term");
    Vector v = Vector::Zero(space.dim());
    for (const auto& term : terms)
        v[space.index(term.level, term.photons)] += term.amplitude;
    StateVector state(space, std::move(v));
    if (state.norm() == 0.0)
        throw PhysicsError("initial state amplitudes cancel to zero");
    state.normalize();
    return state;
}

Rk4Stepper::Rk4Stepper(const TimeDependentOperator& generator)
    : generator_(generator)
{
    const Index n = generator.space().dim();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    tmp_.resize(n);
}

void Rk4Stepper::step(double t, double h, Vector& psi)
{
    const cplx mi(0.0, -1.0);
    generator_.apply(t, psi, k1_);
    k1_ *= mi;
    tmp_ = psi + (0.5 * h) * k1_;
    generator_.apply(t + 0.5 * h, tmp_, k2_);
    k2_ *= mi;
    tmp_ = psi + (0.5 * h) * k2_;
    generator_.apply(t + 0.5 * h, tmp_, k3_);
    k3_ *= mi;
    tmp_ = psi + h * k3_;
    generator_.apply(t + h, tmp_, k4_);
    k4_ *= mi;
    psi += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

double default_time_step(const DetectorSpec& det, const ModulationSpec& mod,
                         const TimeDependentOperator& h, int n_max)
{
    const double stability = 2.0 / std::max(h.spectral_radius_estimate(), 1e-300);
    // lab frame: 1/8 of the RK4 stability limit
    if (h.frame() == Frame::lab)
        return std::min(2.0 * std::numbers::pi / (64.0 * mod.eta()), stability / 8.0);
    const auto ladder = as_ladder(det, n_max);
    double fastest = std::max({std::abs(mod.beta_r()), std::abs(mod.r), 1e-6 * mod.omega0});
    // the oscillator is characterized by its single g; its g sqrt(l) growth is left to the stability cap
    if (det.kind == DetectorKind::harmonic_oscillator)
        fastest = std::max(fastest, std::abs(det.g));
    else
        for (double g : ladder.couplings)
            fastest = std::max(fastest, std::abs(g));
    for (double d : ladder.detunings(mod.omega0))
        fastest = std::max(fastest, std::abs(d));
    return std::min(0.01 / fastest, stability);
}

std::vector<double> output_grid(const EvolutionConfig& cfg)
{
    if (!(cfg.t_end >= 0.0))
        throw PhysicsError("t_end must be non-negative");
    std::vector<double> grid;
    if (!cfg.sample_times.empty()) {
        grid = cfg.sample_times;
    } else {
        const int samples = std::max(cfg.samples, 1);
        for (int i = 0; i <= samples; ++i)
            grid.push_back(cfg.t_end * i / samples);
    }
    for (double t : cfg.snapshot_times) {
        if (t < 0.0 || t > cfg.t_end * (1.0 + 1e-12))
            throw PhysicsError("snapshot time " + std::to_string(t) + " outside [0, t_end]");
        grid.push_back(std::min(t, cfg.t_end));
    }
    for (double t : grid)
        if (t < 0.0 || t > cfg.t_end * (1.0 + 1e-12))
            throw PhysicsError("sample time " + std::to_string(t) + " outside [0, t_end]");
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

double detector_truncation(const StateVector& state, int margin)
{
    const auto pops = level_populations(state);
    double top = 0.0;
    const int levels = int(pops.size());
    for (int j = std::max(0, levels - margin); j < levels; ++j)
        top += pops[j];
    return top;
}

namespace {

std::string scientific(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

bool is_snapshot(double t, const std::vector<double>& snapshots)
{
    return std::any_of(snapshots.begin(), snapshots.end(),
                       [t](double s) { return std::abs(s - t) <= 1e-12 * std::max(1.0, std::abs(t)); });
}

}  // namespace

EvolutionResult unitary_evolve(const TimeDependentOperator& h, const StateVector& initial,
                               const EvolutionConfig& cfg, double epsilon, const SampleObserver& observer)
{
    if (h.frame() != cfg.frame)
        throw PhysicsError(std::string("Hamiltonian frame ") + to_string(h.frame())
                           + " does not match configured frame " + to_string(cfg.frame));
    if (!(initial.space() == h.space()))
        throw PhysicsError("initial state and Hamiltonian live in different spaces");
    if (std::abs(initial.norm() - 1.0) > 1e-9)
        throw PhysicsError("initial state must be normalized");
    const double dt = cfg.dt > 0.0 ? cfg.dt : 1.0 / std::max(h.gershgorin_bound(), 1e-300);
    const auto grid = output_grid(cfg);

    EvolutionResult result{ObservableSeries{}, initial, dt};
    auto& series = result.series;
    series.frame = h.frame();
    series.epsilon = epsilon;
    series.n_levels = h.space().n_levels();

    Rk4Stepper stepper(h);
    Vector& psi = result.final_state.amplitudes();
    double t = 0.0;

    auto visit = [&](double at) {
        const auto& state = result.final_state;
        const double top = truncation_check(state, cfg.margin_layers);
        if (top > cfg.truncation_tol)
            throw TruncationError("photon truncation overflow (top-layer population "
                                  + scientific(top) + ")", at);
        if (cfg.check_detector_truncation) {
            const double det_top = detector_truncation(state, cfg.margin_layers);
            if (det_top > cfg.truncation_tol)
                throw TruncationError("detector truncation overflow (top-level population "
                                      + scientific(det_top) + ")", at);
        }
        series.record(at, state);
        if (is_snapshot(at, cfg.snapshot_times))
            series.snapshot(at, state);
        if (observer)
            observer(at, state);
    };

    visit(0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double target = grid[i];
        const double span = target - t;
        const long steps = std::max(1L, long(std::ceil(span / dt - 1e-9)));
        const double step = span / double(steps);
        for (long s = 0; s < steps; ++s) {
            const double now = t + step * double(s);
            stepper.step(now, step, psi);
            const double drift = std::abs(psi.norm() - 1.0);
            if (drift > cfg.renorm_tol)
                throw NormDriftError("norm drift " + scientific(drift) + " exceeds tolerance; reduce dt",
                                     now + step);
            psi.normalize();
        }
        t = target;
        visit(t);
    }
    return result;
}

TimeDependentOperator experiment_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                                             const EvolutionConfig& cfg)
{
    const auto space = make_space(det, cfg.n_max);
    switch (cfg.frame) {
    case Frame::lab:
        return lab_hamiltonian(det, mod, space);
    case Frame::rwa_interaction:
        return interaction_hamiltonian(det, mod, space, cfg.counter_rotating);
    case Frame::two_level_rotated:
        return two_level_rotated_hamiltonian(det, mod, space);
    }
    throw PhysicsError("unknown frame");
}

EvolutionResult run_experiment(const DetectorSpec& det, const ModulationSpec& mod,
                               const EvolutionConfig& cfg, const SampleObserver& observer)
{
    mod.validate();
    const auto h = experiment_hamiltonian(det, mod, cfg);
    EvolutionConfig effective = cfg;
    if (effective.dt <= 0.0)
        effective.dt = default_time_step(det, mod, h, cfg.n_max);
    if (det.kind == DetectorKind::harmonic_oscillator)
        effective.check_detector_truncation = true;
    return unitary_evolve(h, cfg.initial.build(h.space()), effective, mod.epsilon, observer);
}

oracle::HoClosedForm ho_closed_form_check(double g, const ModulationSpec& mod, double t)
{
    if (mod.r != 0.0)
        throw DomainError("oscillator closed form holds at r = 0");
    return oracle::ho_variances(g, mod.beta0(), t);
}

}  // namespace dcemon
