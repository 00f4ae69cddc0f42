#pragma once

#include <functional>
#include <vector>

#include "dcemon/fock.hpp"
#include "dcemon/model.hpp"
#include "dcemon/oracle.hpp"

namespace dcemon {

struct InitialTerm {
    int level;
    int photons;
    cplx amplitude;
};

// Superposition of bare states; normalized when built. Defaults to |1,0>.
struct InitialState {
    std::vector<InitialTerm> terms{{1, 0, 1.0}};

    StateVector build(const HilbertSpace& space) const;
};

struct EvolutionConfig {
    Frame frame = Frame::rwa_interaction;
    int n_max = 64;
    double t_end = 0.0;  // absolute time, units of 1/omega0
    double dt = 0.0;     // 0 selects default_time_step
    int samples = 100;   // uniform output intervals when sample_times is empty
    std::vector<double> sample_times;
    std::vector<double> snapshot_times;
    double renorm_tol = 1e-9;
    double truncation_tol = 1e-8;
    int margin_layers = 4;
    // also bound the population of the top detector levels (oscillator detectors)
    bool check_detector_truncation = false;
    bool counter_rotating = false;
    InitialState initial;
};

// Classical RK4 for d psi/dt = -i G(t) psi; envelopes re-evaluated at the substeps.
class Rk4Stepper {
public:
    explicit Rk4Stepper(const TimeDependentOperator& generator);
    void step(double t, double h, Vector& psi);

private:
    const TimeDependentOperator& generator_;
    Vector k1_, k2_, k3_, k4_, tmp_;
};

// Interaction frames: 0.01 / max(|g_j|, |beta_r|, |r|, |Delta_j|), lab frame: 2 pi / (64 eta);
// both capped by 2 / (estimated spectral radius of H) to keep RK4 inside its stability region.
double default_time_step(const DetectorSpec& det, const ModulationSpec& mod,
                         const TimeDependentOperator& h, int n_max);

// Output grid: sample_times (or uniform samples) merged with snapshot_times.
std::vector<double> output_grid(const EvolutionConfig& cfg);

using SampleObserver = std::function<void(double t, const StateVector& state)>;

struct EvolutionResult {
    ObservableSeries series;
    StateVector final_state;
    double dt;
};

// Fixed-step Schroedinger evolution. Renormalizes when the per-step norm drift
// is below renorm_tol and throws NormDriftError otherwise; throws
// TruncationError when the top Fock layers exceed truncation_tol at an output time.
EvolutionResult unitary_evolve(const TimeDependentOperator& h, const StateVector& initial,
                               const EvolutionConfig& cfg, double epsilon = 0.0,
                               const SampleObserver& observer = {});

TimeDependentOperator experiment_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                                             const EvolutionConfig& cfg);

EvolutionResult run_experiment(const DetectorSpec& det, const ModulationSpec& mod,
                               const EvolutionConfig& cfg, const SampleObserver& observer = {});

// Population of the top `margin` detector levels.
double detector_truncation(const StateVector& state, int margin);

// Harmonic-oscillator detector at r = 0; delegates to oracle::ho_variances.
oracle::HoClosedForm ho_closed_form_check(double g, const ModulationSpec& mod, double t);

}  // namespace dcemon
