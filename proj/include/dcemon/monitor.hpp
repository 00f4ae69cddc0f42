#pragma once

// Continuous read-out of the detector: jump operators, no-count propagation,
// Monte Carlo trajectories and projective post-selection.

#include <cstdint>
#include <optional>
#include <vector>

#include "dcemon/evolve.hpp"
#include "dcemon/fock.hpp"
#include "dcemon/model.hpp"

namespace dcemon {

class JumpModel {
public:
    explicit JumpModel(std::vector<LinearOperator> jumps);

    const std::vector<LinearOperator>& jumps() const noexcept { return jumps_; }
    // R = sum_i L_i^dag L_i
    const LinearOperator& rates() const noexcept { return rates_; }
    // Upper bound on <R> over normalized states.
    double max_rate() const noexcept { return max_rate_; }
    const HilbertSpace& space() const { return rates_.space(); }
    // <psi|R|psi> for an unnormalized psi.
    double expected_rate(const Vector& psi) const;

private:
    std::vector<LinearOperator> jumps_;
    LinearOperator rates_;
    double max_rate_;
    Eigen::VectorXd diagonal_;  // empty unless R is diagonal
};

// L_j = sqrt(rate_j) sigma_{j,j+1}, j = 1..N-1.
JumpModel default_jump_model(const HilbertSpace& space, double rate);
JumpModel default_jump_model(const HilbertSpace& space, const std::vector<double>& rates);

// Propagates under H - iR/2 over [t0, t1]; the squared norm of the result is
// the probability of recording no click. Throws ExtinctTrajectoryError when
// the squared norm drops below 1e-15.
StateVector no_count_evolve(const TimeDependentOperator& h, const JumpModel& jumps,
                            const StateVector& state, double t0, double t1, double dt);

struct TrajectoryConfig {
    double t_end = 0.0;
    double dt = 0.0;
    std::vector<double> sample_times;  // conditioned observables recorded here
    std::vector<double> snapshot_times;  // conditioned states kept here
    int max_clicks = 0;  // stop after this many clicks; 0 = no limit
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::vector<double> click_times;
    std::vector<int> channels;
    ObservableSeries series;
    std::vector<std::pair<double, StateVector>> snapshots;
    std::optional<StateVector> final_state;
    bool stopped_early = false;  // max_clicks reached before t_end
};

// First-order jump unraveling: per step a click happens with probability <R> dt
// and applies L_i chosen with weight ||L_i psi||^2; otherwise the state takes a
// no-count step and is renormalized. Deterministic for a given seed.
TrajectoryRecord sample_trajectory(const TimeDependentOperator& h, const JumpModel& jumps,
                                   const StateVector& initial, const TrajectoryConfig& cfg,
                                   std::uint64_t seed);

// Seed of trajectory `index` derived from the master seed.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

struct EnsembleSeries {
    std::vector<double> times;
    std::vector<double> n_mean;
    std::vector<double> n_stderr;
    std::vector<std::vector<double>> level_populations;
    std::vector<std::vector<double>> level_stderr;
};

struct EnsembleResult {
    std::vector<TrajectoryRecord> trajectories;
    EnsembleSeries averages;
};

// Runs `count` independent trajectories on `threads` workers. The reduction is
// done in trajectory order, so results do not depend on the thread count.
EnsembleResult run_ensemble(const TimeDependentOperator& h, const JumpModel& jumps,
                            const StateVector& initial, const TrajectoryConfig& cfg,
                            std::uint64_t master_seed, int count, int threads = 1,
                            bool keep_states = false);

struct PostSelection {
    std::vector<int> levels;  // detector levels kept by the projector
};

struct PostSelectionResult {
    StateVector state;
    double probability;
};

PostSelectionResult postselect(const StateVector& state, const PostSelection& selection);

}  // namespace dcemon
