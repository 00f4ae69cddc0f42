#include "dcemon/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "dcemon/errors.hpp"

namespace dcemon {

namespace {

bool is_diagonal(const SparseMatrix& m)
{
    for (Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            if (it.row() != it.col() && it.value() != 0.0)
                return false;
    return true;
}

LinearOperator sum_of_rates(const std::vector<LinearOperator>& jumps)
{
    if (jumps.empty())
        throw PhysicsError("jump model needs at least one jump operator");
    const auto& space = jumps.front().space();
    SparseMatrix r(space.dim(), space.dim());
    for (const auto& l : jumps) {
        if (!(l.space() == space))
            throw PhysicsError("jump operators live in different spaces");
        r += SparseMatrix(l.matrix().adjoint() * l.matrix());
    }
    return LinearOperator(space, std::move(r), Symmetry::hermitian);
}

}  // namespace

JumpModel::JumpModel(std::vector<LinearOperator> jumps)
    : jumps_(std::move(jumps)), rates_(sum_of_rates(jumps_)), max_rate_(0.0)
{
    const auto& r = rates_.matrix();
    if (is_diagonal(r)) {
        double lo = 0.0;
        diagonal_.resize(r.rows());
        for (Index i = 0; i < r.rows(); ++i) {
            const double d = r.coeff(i, i).real();
            diagonal_[i] = d;
            max_rate_ = std::max(max_rate_, d);
            lo = std::min(lo, d);
        }
        if (lo < -1e-12)
            throw PhysicsError("rate operator R is not positive semi-definite");
        return;
    }
    max_rate_ = rates_.gershgorin_bound();
    if (r.rows() <= 2048) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(r), Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -1e-12)
            throw PhysicsError("rate operator R is not positive semi-definite");
        max_rate_ = solver.eigenvalues().maxCoeff();
    }
}

double JumpModel::expected_rate(const Vector& psi) const
{
    if (diagonal_.size())
        return diagonal_.dot(psi.cwiseAbs2());
    return psi.dot(rates_.matrix() * psi).real();
}

JumpModel default_jump_model(const HilbertSpace& space, double rate)
{
    return default_jump_model(space, std::vector<double>(std::max(space.n_levels() - 1, 0), rate));
}

JumpModel default_jump_model(const HilbertSpace& space, const std::vector<double>& rates)
{
    if (space.n_levels() < 2)
        throw PhysicsError("read-out needs a detector with at least two levels");
    if (int(rates.size()) != space.n_levels() - 1)
        throw PhysicsError("need one read-out rate per adjacent transition");
    std::vector<LinearOperator> jumps;
    for (int j = 1; j < space.n_levels(); ++j) {
        const double rate = rates[j - 1];
        if (rate < 0.0)
            throw PhysicsError("read-out rate must be non-negative");
        jumps.push_back(build_sigma(space, j, j + 1).scaled(std::sqrt(rate)));
    }
    return JumpModel(std::move(jumps));
}

StateVector no_count_evolve(const TimeDependentOperator& h, const JumpModel& jumps,
                            const StateVector& state, double t0, double t1, double dt)
{
    if (!(h.space() == jumps.space()) || !(state.space() == h.space()))
        throw PhysicsError("Hamiltonian, jump model and state must share a space");
    if (state.norm_squared() > 1.0 + 1e-12)
        throw PhysicsError("no-count propagation expects norm <= 1");
    if (!(dt > 0.0) || t1 < t0)
        throw PhysicsError("no-count propagation needs dt > 0 and t1 >= t0");
    const auto generator = h.with_decay(jumps.rates());
    Rk4Stepper stepper(generator);
    StateVector out = state;
    const long steps = std::max(1L, long(std::ceil((t1 - t0) / dt - 1e-9)));
    const double step = (t1 - t0) / double(steps);
    if (t1 == t0)
        return out;
    for (long s = 0; s < steps; ++s) {
        const double now = t0 + step * double(s);
        stepper.step(now, step, out.amplitudes());
        if (out.norm_squared() < 1e-15)
            throw ExtinctTrajectoryError("no-count norm underflow", now + step);
    }
    return out;
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index)
{
    std::seed_seq seq{std::uint32_t(master_seed), std::uint32_t(master_seed >> 32),
                      std::uint32_t(index), std::uint32_t(index >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (std::uint64_t(words[0]) << 32) | words[1];
}

namespace {

double uniform(std::mt19937_64& rng)
{
    return double(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> trajectory_grid(const TrajectoryConfig& cfg)
{
    std::vector<double> grid{0.0, cfg.t_end};
    for (const auto* list : {&cfg.sample_times, &cfg.snapshot_times})
        for (double t : *list) {
            if (t < 0.0 || t > cfg.t_end * (1.0 + 1e-12))
                throw PhysicsError("trajectory output time " + std::to_string(t) + " outside [0, t_end]");
            grid.push_back(std::min(t, cfg.t_end));
        }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

bool contains(const std::vector<double>& times, double t)
{
    return std::any_of(times.begin(), times.end(),
                       [t](double s) { return std::abs(s - t) <= 1e-12 * std::max(1.0, std::abs(t)); });
}

}  // namespace

TrajectoryRecord sample_trajectory(const TimeDependentOperator& h, const JumpModel& jumps,
                                   const StateVector& initial, const TrajectoryConfig& cfg,
                                   std::uint64_t seed)
{
    if (!(h.space() == jumps.space()) || !(initial.space() == h.space()))
        throw PhysicsError("Hamiltonian, jump model and state must share a space");
    if (std::abs(initial.norm() - 1.0) > 1e-9)
        throw PhysicsError("trajectories start from a normalized state");
    if (!(cfg.dt > 0.0))
        throw PhysicsError("trajectory time step must be positive");
    if (cfg.dt * jumps.max_rate() > 0.1)
        throw PhysicsError("dt * max<R> = " + std::to_string(cfg.dt * jumps.max_rate())
                           + " exceeds 0.1; first-order click probability invalid");

    const auto generator = h.with_decay(jumps.rates());
    Rk4Stepper stepper(generator);
    std::mt19937_64 rng(seed);

    TrajectoryRecord rec;
    rec.seed = seed;
    rec.series.frame = h.frame();
    rec.series.n_levels = h.space().n_levels();
    StateVector state = initial;
    Vector& psi = state.amplitudes();

    const auto grid = trajectory_grid(cfg);
    auto visit = [&](double at) {
        if (cfg.sample_times.empty() || contains(cfg.sample_times, at))
            rec.series.record(at, state);
        if (contains(cfg.snapshot_times, at))
            rec.snapshots.emplace_back(at, state);
    };

    double t = 0.0;
    visit(0.0);
    for (std::size_t i = 1; i < grid.size() && !rec.stopped_early; ++i) {
        const double target = grid[i];
        const long steps = std::max(1L, long(std::ceil((target - t) / cfg.dt - 1e-9)));
        const double step = (target - t) / double(steps);
        for (long s = 0; s < steps; ++s) {
            const double now = t + step * double(s);
            const double click_probability = jumps.expected_rate(psi) * step;
            if (uniform(rng) < click_probability) {
                double total = 0.0;
                std::vector<double> weights;
                for (const auto& l : jumps.jumps()) {
                    weights.push_back((l.matrix() * psi).squaredNorm());
                    total += weights.back();
                }
                const double pick = uniform(rng) * total;
                std::size_t channel = 0;
                double acc = weights[0];
                while (acc <= pick && channel + 1 < weights.size())
                    acc += weights[++channel];
                psi = jumps.jumps()[channel].matrix() * psi;
                psi.normalize();
                rec.click_times.push_back(now + step);
                rec.channels.push_back(int(channel));
                if (cfg.max_clicks > 0 && int(rec.click_times.size()) >= cfg.max_clicks) {
                    rec.stopped_early = true;
                    break;
                }
            } else {
                stepper.step(now, step, psi);
                if (psi.squaredNorm() < 1e-15)
                    throw ExtinctTrajectoryError("no-count norm underflow", now + step);
                psi.normalize();
            }
        }
        if (rec.stopped_early)
            break;
        t = target;
        visit(t);
    }
    rec.final_state = state;
    return rec;
}

EnsembleResult run_ensemble(const TimeDependentOperator& h, const JumpModel& jumps,
                            const StateVector& initial, const TrajectoryConfig& cfg,
                            std::uint64_t master_seed, int count, int threads, bool keep_states)
{
    if (count < 1)
        throw PhysicsError("ensemble needs at least one trajectory");
    threads = std::clamp(threads, 1, count);
    std::vector<std::optional<TrajectoryRecord>> slots(count);
    std::vector<std::exception_ptr> failures(threads);

    auto worker = [&](int w) {
        try {
            for (int i = w; i < count; i += threads) {
                auto rec = sample_trajectory(h, jumps, initial, cfg, trajectory_seed(master_seed, i));
                if (!keep_states) {
                    rec.snapshots.clear();
                    rec.final_state.reset();
                }
                slots[i] = std::move(rec);
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back(worker, w);
        for (auto& th : pool)
            th.join();
    }
    for (const auto& f : failures)
        if (f)
            std::rethrow_exception(f);

    EnsembleResult out;
    for (auto& slot : slots)
        out.trajectories.push_back(std::move(*slot));

    // reduce in trajectory order; trajectories stopped early contribute to the times they reached
    std::size_t points = 0;
    for (const auto& rec : out.trajectories)
        points = std::max(points, rec.series.size());
    const int levels = h.space().n_levels();
    auto& avg = out.averages;
    for (std::size_t p = 0; p < points; ++p) {
        std::vector<const TrajectoryRecord*> live;
        for (const auto& rec : out.trajectories)
            if (p < rec.series.size())
                live.push_back(&rec);
        const double k = double(live.size());
        // two-pass mean and standard error
        auto reduce = [&](auto&& value, double& mean, double& err) {
            mean = 0.0;
            for (const auto* rec : live)
                mean += value(*rec);
            mean /= k;
            double ss = 0.0;
            for (const auto* rec : live) {
                const double d = value(*rec) - mean;
                ss += d * d;
            }
            err = live.size() > 1 ? std::sqrt(ss / (k - 1.0) / k) : 0.0;
        };
        double n_mean, n_err;
        reduce([p](const TrajectoryRecord& r) { return r.series.n_mean[p]; }, n_mean, n_err);
        avg.times.push_back(live.front()->series.times[p]);
        avg.n_mean.push_back(n_mean);
        avg.n_stderr.push_back(n_err);
        std::vector<double> pm(levels), pe(levels);
        for (int j = 0; j < levels; ++j)
            reduce([p, j](const TrajectoryRecord& r) { return r.series.level_populations[p][j]; }, pm[j], pe[j]);
        avg.level_populations.push_back(std::move(pm));
        avg.level_stderr.push_back(std::move(pe));
    }
    return out;
}

PostSelectionResult postselect(const StateVector& state, const PostSelection& selection)
{
    const auto& space = state.space();
    if (std::abs(state.norm() - 1.0) > 1e-9)
        throw PhysicsError("post-selection expects a normalized state");
    std::vector<bool> keep(space.n_levels(), false);
    for (int level : selection.levels) {
        if (level < 1 || level > space.n_levels())
            throw PhysicsError("post-selection level " + std::to_string(level) + " out of range");
        keep[level - 1] = true;
    }
    Vector projected = Vector::Zero(space.dim());
    const int layers = space.photon_layers();
    for (int j = 0; j < space.n_levels(); ++j)
        if (keep[j])
            projected.segment(Index(j) * layers, layers) = state.amplitudes().segment(Index(j) * layers, layers);
    const double probability = projected.squaredNorm();
    if (probability < 1e-15)
        throw PhysicsError("post-selection outcome has vanishing probability");
    projected /= std::sqrt(probability);
    return {StateVector(space, std::move(projected)), probability};
}

}  // namespace dcemon
