#include "dcemon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dcemon/errors.hpp"
#include "dcemon/oracle.hpp"

namespace dcemon {

const char* to_string(RegimeKind kind)
{
    switch (kind) {
    case RegimeKind::unbounded:
        return "unbounded";
    case RegimeKind::bounded:
        return "bounded";
    case RegimeKind::two_state_oscillation:
        return "two_state_oscillation";
    case RegimeKind::dispersive:
        return "dispersive";
    }
    return "unknown";
}

ExcitationBlock excitation_block(const Ladder& ladder, double omega0, int m)
{
    if (m < 0)
        throw PhysicsError("excitation number must be non-negative");
    const int size = std::min(ladder.levels(), m + 1);
    const auto detunings = ladder.detunings(omega0);
    ExcitationBlock block{m, {}, Eigen::MatrixXd::Zero(size, size)};
    double shift = 0.0;
    for (int j = 1; j <= size; ++j) {
        if (j >= 2)
            shift -= detunings[j - 2];
        block.basis.push_back({j, m - (j - 1)});
        block.matrix(j - 1, j - 1) = shift;
        if (j < size) {
            const double amp = ladder.couplings[j - 1] * std::sqrt(double(m - (j - 1)));
            block.matrix(j - 1, j) = amp;
            block.matrix(j, j - 1) = amp;
        }
    }
    return block;
}

StateVector DressedState::embed(const HilbertSpace& space) const
{
    Vector v = Vector::Zero(space.dim());
    for (std::size_t i = 0; i < basis.size(); ++i)
        v[space.index(basis[i].level, basis[i].photons)] = amplitudes[i];
    return StateVector(space, std::move(v));
}

namespace {

void fix_sign(std::vector<double>& amplitudes)
{
    for (double a : amplitudes)
        if (std::abs(a) > 1e-12) {
            if (a < 0.0)
                for (auto& x : amplitudes)
                    x = -x;
            return;
        }
}

}  // namespace

std::vector<DressedState> block_eigenstates(const Ladder& ladder, double omega0, int m)
{
    const auto block = excitation_block(ladder, omega0, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.matrix);
    if (solver.info() != Eigen::Success)
        throw PhysicsError("block diagonalization failed at m=" + std::to_string(m));
    const auto& values = solver.eigenvalues();
    const double zero_tol = 1e-10 * (1.0 + block.matrix.cwiseAbs().maxCoeff());

    const Index size = values.size();
    int negatives = 0;
    for (Index i = 0; i < size; ++i)
        if (values[i] < -zero_tol)
            ++negatives;
    bool has_zero = false;
    for (Index i = 0; i < size; ++i)
        has_zero = has_zero || std::abs(values[i]) <= zero_tol;

    std::vector<DressedState> states;
    for (Index i = 0; i < size; ++i) {
        DressedState s{m, 0, values[i], block.basis, {}};
        s.amplitudes.resize(size);
        for (Index c = 0; c < size; ++c)
            s.amplitudes[c] = solver.eigenvectors()(c, i);
        fix_sign(s.amplitudes);
        if (i < negatives)
            s.k = int(i) - negatives;
        else
            s.k = int(i) - negatives + (has_zero ? 0 : 1);
        states.push_back(std::move(s));
    }
    return states;
}

double eigen_residual(const ExcitationBlock& block, const DressedState& state)
{
    const Eigen::Map<const Eigen::VectorXd> v(state.amplitudes.data(), Index(state.amplitudes.size()));
    return (block.matrix * v - state.eigenvalue * v).norm();
}

JcEigensystem jc_eigensystem(double g1, double delta1, int n)
{
    if (n < 1)
        throw PhysicsError("JC doublets start at n = 1; the ground state |1,0> has eigenvalue 0");
    const double half = delta1 / 2.0;
    const double z = std::sqrt(half * half + g1 * g1 * n);
    JcEigensystem out;
    out.n = n;
    out.z = z;
    out.lambda_plus = -half + z;
    out.lambda_minus = -half - z;
    // tan(theta) = sqrt((z + D/2)/(z - D/2)); atan2 keeps theta in (0, pi/2) when z -> |D/2|
    out.theta = std::atan2(std::sqrt(z + half), std::sqrt(std::max(z - half, 0.0)));
    const double s = std::sin(out.theta);
    const double c = std::cos(out.theta);
    const double sign = g1 < 0.0 ? -1.0 : 1.0;
    out.phi_plus = {s, sign * c};
    out.phi_minus = {c, -sign * s};
    return out;
}

ThreeLevelEigensystem three_level_eigensystem(double g1, double g2, int n)
{
    if (n < 1)
        throw PhysicsError("three-level dressed doublets start at n = 1");
    const double lambda = std::sqrt(n * g1 * g1 + (n - 1) * g2 * g2);
    if (lambda == 0.0)
        throw PhysicsError("three-level eigensystem needs nonzero couplings");
    const double norm = std::numbers::sqrt2 * lambda;
    const double c1 = std::sqrt(double(n)) * g1 / norm;
    const double c3 = g2 * std::sqrt(double(n - 1)) / norm;
    ThreeLevelEigensystem out;
    out.n = n;
    out.lambda = lambda;
    out.phi_plus = {c1, lambda / norm, c3};
    out.phi_minus = {c1, -lambda / norm, c3};
    return out;
}

std::optional<DressedState> null_eigenstate(const DetectorSpec& det, int m, double omega0, int n_max_hint)
{
    if (m < 0)
        throw PhysicsError("excitation number must be non-negative");
    const int n_max = std::max(n_max_hint, m + 1);
    const auto ladder = as_ladder(det, n_max);
    for (double d : ladder.detunings(omega0))
        if (std::abs(d) > 1e-12 * omega0)
            throw PhysicsError("null eigenstate construction requires a resonant ladder");

    const int size = std::min(ladder.levels(), m + 1);
    if (size % 2 == 0)
        return std::nullopt;

    // alternating odd levels |2k+1, m-2k>
    std::vector<double> alpha{1.0};
    for (int k = 0; 2 * k + 3 <= size; ++k) {
        const double upper = ladder.couplings[2 * k + 1];
        if (upper == 0.0)
            throw PhysicsError("null-state recursion needs nonzero couplings");
        alpha.push_back(-alpha[k] * ladder.couplings[2 * k] * std::sqrt(double(m - 2 * k))
                        / (upper * std::sqrt(double(m - 2 * k - 1))));
    }
    double norm = 0.0;
    for (double a : alpha)
        norm += a * a;
    norm = std::sqrt(norm);

    DressedState s{m, 0, 0.0, {}, {}};
    for (int j = 1; j <= size; ++j) {
        s.basis.push_back({j, m - (j - 1)});
        s.amplitudes.push_back(j % 2 == 1 ? alpha[(j - 1) / 2] / norm : 0.0);
    }
    return s;
}

DressedCouplings dressed_coupling_matrix(const DetectorSpec& det, const ModulationSpec& mod,
                                         int m_cap, int n_max, double resonance_window)
{
    if (m_cap < 0)
        throw PhysicsError("m_cap must be non-negative");
    if (m_cap > n_max)
        throw PhysicsError("m_cap=" + std::to_string(m_cap) + " exceeds the photon truncation n_max="
                           + std::to_string(n_max));
    const auto ladder = as_ladder(det, n_max);

    DressedCouplings out;
    std::vector<std::size_t> block_start;
    for (int m = 0; m <= m_cap; ++m) {
        block_start.push_back(out.states.size());
        for (auto& s : block_eigenstates(ladder, mod.omega0, m))
            out.states.push_back(std::move(s));
    }
    block_start.push_back(out.states.size());

    const double beta = mod.beta0();
    std::vector<Eigen::Triplet<double>> triplets;
    for (int m = 0; m + 2 <= m_cap; ++m) {
        for (std::size_t q = block_start[m]; q < block_start[m + 1]; ++q) {
            const auto& low = out.states[q];
            for (std::size_t p = block_start[m + 2]; p < block_start[m + 3]; ++p) {
                const auto& high = out.states[p];
                // <high| a^dag^2 |low>: same level, photons + 2
                double overlap = 0.0;
                for (std::size_t i = 0; i < low.basis.size(); ++i) {
                    const int photons = low.basis[i].photons;
                    for (std::size_t h = 0; h < high.basis.size(); ++h)
                        if (high.basis[h].level == low.basis[i].level) {
                            overlap += high.amplitudes[h] * low.amplitudes[i]
                                       * std::sqrt(double(photons + 1) * (photons + 2));
                            break;
                        }
                }
                const double element = beta * overlap;
                if (std::abs(element) < 1e-14)
                    continue;
                const double gap = high.eigenvalue - low.eigenvalue;
                const bool resonant = std::abs(gap) < resonance_window * std::abs(element);
                triplets.emplace_back(Index(p), Index(q), element);
                triplets.emplace_back(Index(q), Index(p), -element);
                out.entries.push_back({p, q, element, -gap, resonant});
                out.entries.push_back({q, p, -element, gap, resonant});
            }
        }
    }
    out.matrix.resize(Index(out.states.size()), Index(out.states.size()));
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

double two_level_resonance_shift(double g1, double delta1, int branch, double y)
{
    if (branch != 1 && branch != -1)
        throw PhysicsError("two-level resonance branch must be +1 or -1");
    const double z2 = std::sqrt(delta1 * delta1 / 4.0 + 2.0 * g1 * g1);
    return (branch * z2 - delta1 / 2.0 + y) / 2.0;
}

std::vector<ResonanceEntry> resonance_catalog(const DetectorSpec& det, const ModulationSpec& mod)
{
    det.validate();
    std::vector<ResonanceEntry> entries;
    auto beta_at = [&mod](double r) {
        ModulationSpec shifted = mod;
        shifted.r = r;
        return shifted.beta_r();
    };

    if (det.kind == DetectorKind::none) {
        entries.push_back({0.0, {RegimeKind::unbounded}, "empty_cavity: <n> = sinh^2(2 beta0 t)"});
        return entries;
    }
    if (det.kind == DetectorKind::harmonic_oscillator) {
        if (std::abs(mod.omega0 - det.omega) <= 1e-12 * mod.omega0)
            entries.push_back({0.0, {RegimeKind::unbounded}, "ho_r0: growth rate 2 beta0"});
        for (int s : {1, -1})
            entries.push_back({s * det.g, {RegimeKind::unbounded}, "ho_shifted: <n> = sinh^2(beta0 t)/2"});
        return entries;
    }

    const auto ladder = as_ladder(det, 0);
    const int levels = ladder.levels();
    const auto detunings = ladder.detunings(mod.omega0);
    const bool resonant = std::all_of(detunings.begin(), detunings.end(),
                                      [&](double d) { return std::abs(d) <= 1e-12 * mod.omega0; });

    if (levels == 1) {
        entries.push_back({0.0, {RegimeKind::unbounded}, "empty_cavity: <n> = sinh^2(2 beta0 t)"});
        return entries;
    }
    if (resonant) {
        if (levels % 2 == 1)
            entries.push_back({0.0, {RegimeKind::unbounded}, "null_chain: odd N"});
        else
            entries.push_back({0.0, {RegimeKind::bounded, levels - 2}, "null_chain: even N, at most N-2 photons"});
    }
    if (levels >= 3) {
        const double g1 = ladder.couplings[0];
        const double g2 = ladder.couplings[1];
        const double lambda2 = std::sqrt(2.0 * g1 * g1 + g2 * g2);
        for (int s : {1, -1}) {
            const double r = s * lambda2 / 2.0;
            Regime regime{RegimeKind::two_state_oscillation};
            regime.frequency = oracle::three_level_oscillation_frequency(g1, g2, beta_at(r));
            entries.push_back({r, regime, "two_photon: 2r = +-sqrt(2 g1^2 + g2^2)"});
        }
    }
    if (levels == 2) {
        const double g1 = ladder.couplings[0];
        const double delta1 = detunings[0];
        for (int s : {1, -1}) {
            const double r = two_level_resonance_shift(g1, delta1, s, mod.y);
            Regime regime{RegimeKind::bounded, 2};
            if (delta1 != 0.0 && (delta1 > 0.0) == (s > 0))
                regime = {RegimeKind::unbounded};
            entries.push_back({r, regime, "two_level: 2r = S z2 - Delta1/2 + y"});
        }
        if (delta1 != 0.0) {
            const auto shift = oracle::dispersive_shift(g1, delta1);
            entries.push_back({shift.delta, {RegimeKind::dispersive}, "dispersive: 2r = 2 delta, delta = g1^2/Delta1"});
        }
    }
    return entries;
}

}  // namespace dcemon
