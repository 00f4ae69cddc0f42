#include "dcemon/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "dcemon/errors.hpp"

namespace dcemon {

const char* to_string(DetectorKind kind)
{
    switch (kind) {
    case DetectorKind::none:
        return "none";
    case DetectorKind::ladder:
        return "ladder";
    case DetectorKind::harmonic_oscillator:
        return "harmonic_oscillator";
    case DetectorKind::dicke_network:
        return "dicke_network";
    }
    return "unknown";
}

DetectorSpec DetectorSpec::empty_cavity()
{
    return {};
}

DetectorSpec DetectorSpec::ladder(std::vector<double> energies, std::vector<double> couplings)
{
    DetectorSpec d;
    d.kind = DetectorKind::ladder;
    d.energies = std::move(energies);
    d.couplings = std::move(couplings);
    d.validate();
    return d;
}

DetectorSpec DetectorSpec::ladder_from_detunings(double omega0, std::vector<double> couplings,
                                                 std::vector<double> detunings)
{
    const std::size_t transitions = couplings.size();
    if (detunings.size() > transitions)
        throw PhysicsError("more detunings than ladder transitions");
    detunings.resize(transitions, 0.0);
    std::vector<double> energies(transitions + 1, 0.0);
    for (std::size_t j = 0; j < transitions; ++j)
        energies[j + 1] = energies[j] + omega0 - detunings[j];
    return ladder(std::move(energies), std::move(couplings));
}

DetectorSpec DetectorSpec::harmonic_oscillator(double g, double omega, int levels)
{
    DetectorSpec d;
    d.kind = DetectorKind::harmonic_oscillator;
    d.g = g;
    d.omega = omega;
    d.ho_levels = levels;
    d.validate();
    return d;
}

DetectorSpec DetectorSpec::dicke_network(int atoms, double omega, double g)
{
    DetectorSpec d;
    d.kind = DetectorKind::dicke_network;
    d.atoms = atoms;
    d.omega = omega;
    d.g = g;
    d.validate();
    return d;
}

void DetectorSpec::validate() const
{
    switch (kind) {
    case DetectorKind::none:
        return;
    case DetectorKind::ladder:
        if (energies.empty())
            throw PhysicsError("ladder detector needs at least one level");
        if (couplings.size() + 1 != energies.size())
            throw PhysicsError("ladder with " + std::to_string(energies.size()) + " levels needs "
                               + std::to_string(energies.size() - 1) + " couplings, got "
                               + std::to_string(couplings.size()));
        for (std::size_t j = 1; j < energies.size(); ++j)
            if (energies[j] < energies[j - 1])
                throw PhysicsError("ladder energies must be non-decreasing");
        return;
    case DetectorKind::harmonic_oscillator:
        if (ho_levels != 0 && ho_levels < 2)
            throw PhysicsError("harmonic-oscillator detector needs at least 2 levels");
        return;
    case DetectorKind::dicke_network:
        if (atoms < 1)
            throw PhysicsError("atomic network needs at least one atom");
        if (!atom_omegas.empty() && int(atom_omegas.size()) != atoms)
            throw PhysicsError("per-atom frequencies must list every atom");
        if (!atom_couplings.empty() && int(atom_couplings.size()) != atoms)
            throw PhysicsError("per-atom couplings must list every atom");
        return;
    }
}

bool DetectorSpec::identical_atoms() const
{
    auto all_equal = [](const std::vector<double>& v, double ref) {
        return std::all_of(v.begin(), v.end(), [ref](double x) { return x == ref; });
    };
    return all_equal(atom_omegas, omega) && all_equal(atom_couplings, g);
}

int DetectorSpec::level_count(int n_max) const
{
    switch (kind) {
    case DetectorKind::none:
        return 1;
    case DetectorKind::ladder:
        return int(energies.size());
    case DetectorKind::harmonic_oscillator:
        return ho_levels > 0 ? ho_levels : n_max + 1;
    case DetectorKind::dicke_network:
        return atoms + 1;
    }
    return 1;
}

std::vector<double> Ladder::detunings(double omega0) const
{
    std::vector<double> d;
    for (std::size_t j = 0; j + 1 < energies.size(); ++j)
        d.push_back(omega0 - (energies[j + 1] - energies[j]));
    return d;
}

DetectorSpec dicke_to_ladder(const DetectorSpec& network)
{
    if (network.kind != DetectorKind::dicke_network)
        throw PhysicsError("dicke_to_ladder expects an atomic network");
    network.validate();
    if (!network.identical_atoms())
        throw PhysicsError("non-identical atoms do not map onto a symmetric ladder");
    const int levels = network.atoms + 1;
    std::vector<double> energies(levels), couplings(levels - 1);
    for (int j = 1; j <= levels; ++j)
        energies[j - 1] = network.omega * (j - 1);
    for (int j = 1; j < levels; ++j)
        couplings[j - 1] = network.g * std::sqrt(double(j) * (levels - j));
    return DetectorSpec::ladder(std::move(energies), std::move(couplings));
}

Ladder as_ladder(const DetectorSpec& det, int n_max)
{
    det.validate();
    switch (det.kind) {
    case DetectorKind::none:
        return {{0.0}, {}};
    case DetectorKind::ladder:
        return {det.energies, det.couplings};
    case DetectorKind::harmonic_oscillator: {
        const int levels = det.level_count(n_max);
        Ladder l;
        for (int j = 1; j <= levels; ++j)
            l.energies.push_back(det.omega * (j - 1));
        for (int j = 1; j < levels; ++j)
            l.couplings.push_back(det.g * std::sqrt(double(j)));
        return l;
    }
    case DetectorKind::dicke_network: {
        const auto mapped = dicke_to_ladder(det);
        return {mapped.energies, mapped.couplings};
    }
    }
    return {};
}

double ModulationSpec::omega_t(double t) const
{
    return omega0 + epsilon * std::sin(eta() * t);
}

double ModulationSpec::chi(double t) const
{
    const double e = eta();
    if (chi_form == ChiForm::approximate)
        return epsilon * e / (4.0 * omega0) * std::cos(e * t);
    return epsilon * e * std::cos(e * t) / (4.0 * omega_t(t));
}

std::vector<std::string> ModulationSpec::validate() const
{
    if (!(omega0 > 0.0))
        throw PhysicsError("omega0 must be positive");
    const double ratio = std::abs(epsilon) / omega0;
    if (ratio >= 0.1) {
        std::ostringstream msg;
        msg << "modulation depth |epsilon|/omega0 = " << ratio << " violates |epsilon| << omega0 (limit 0.1)";
        throw PhysicsError(msg.str());
    }
    std::vector<std::string> warnings;
    if (ratio > 0.01) {
        std::ostringstream msg;
        msg << "|epsilon|/omega0 = " << ratio << " exceeds 0.01; weak-modulation approximations degrade";
        warnings.push_back(msg.str());
    }
    return warnings;
}

std::vector<std::string> rwa_warnings(const DetectorSpec& det, const ModulationSpec& mod, int n_max)
{
    std::vector<std::string> warnings;
    const auto ladder = as_ladder(det, n_max);
    const auto detunings = ladder.detunings(mod.omega0);
    for (std::size_t j = 0; j < ladder.couplings.size(); ++j) {
        if (std::abs(ladder.couplings[j]) > 0.1 * mod.omega0)
            warnings.push_back("|g_" + std::to_string(j + 1) + "| is not small compared to omega0; RWA questionable");
        if (std::abs(detunings[j]) > 0.1 * mod.omega0)
            warnings.push_back("|Delta_" + std::to_string(j + 1) + "| is not small compared to omega0; RWA questionable");
    }
    return warnings;
}

TimeDependentOperator::TimeDependentOperator(LinearOperator constant, Frame frame)
    : constant_(std::move(constant)), frame_(frame)
{
}

void TimeDependentOperator::add_term(LinearOperator op, std::function<cplx(double)> envelope,
                                     double envelope_bound)
{
    if (!(op.space() == constant_.space()))
        throw PhysicsError("time-dependent term lives in a different space");
    terms_.push_back({std::move(op), std::move(envelope), envelope_bound});
}

LinearOperator TimeDependentOperator::at(double t) const
{
    SparseMatrix m = constant_.matrix();
    for (const auto& term : terms_)
        m += term.envelope(t) * term.op.matrix();
    return LinearOperator(space(), std::move(m));
}

void TimeDependentOperator::apply(double t, const Vector& x, Vector& out) const
{
    out.noalias() = constant_.matrix() * x;
    for (const auto& term : terms_) {
        const cplx f = term.envelope(t);
        if (f != 0.0)
            out.noalias() += f * (term.op.matrix() * x);
    }
}

double TimeDependentOperator::gershgorin_bound() const
{
    double bound = constant_.gershgorin_bound();
    for (const auto& term : terms_)
        bound += term.envelope_bound * term.op.gershgorin_bound();
    return bound;
}

double TimeDependentOperator::spectral_radius_estimate() const
{
    double bound = 0.0;
    const auto& m = constant_.matrix();
    const Index n = m.rows();
    if (constant_.symmetry() == Symmetry::hermitian && n > 1) {
        // Lanczos: extreme Ritz values approach the spectrum edges from inside
        const int steps = int(std::min<Index>(n, 60));
        std::mt19937_64 rng(12345);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        Vector v(n), w(n), prev = Vector::Zero(n);
        for (Index i = 0; i < n; ++i)
            v[i] = cplx(unit(rng), unit(rng));
        v.normalize();
        std::vector<double> alpha, beta;
        double b = 0.0;
        for (int k = 0; k < steps; ++k) {
            w.noalias() = m * v;
            const double a = v.dot(w).real();
            w -= a * v + b * prev;
            alpha.push_back(a);
            b = w.norm();
            if (b < 1e-14 * std::max(1.0, std::abs(a)))
                break;
            beta.push_back(b);
            prev = v;
            v = w / b;
        }
        const Index k = Index(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
        for (Index i = 0; i < k; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < k)
                t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t, Eigen::EigenvaluesOnly);
        bound = 1.05 * solver.eigenvalues().cwiseAbs().maxCoeff();
    } else {
        bound = constant_.gershgorin_bound();
    }
    for (const auto& term : terms_)
        bound += term.envelope_bound * term.op.gershgorin_bound();
    return std::min(bound, gershgorin_bound());
}

TimeDependentOperator TimeDependentOperator::with_decay(const LinearOperator& rates) const
{
    TimeDependentOperator out(constant_ - rates.scaled(cplx(0.0, 0.5)), frame_);
    out.terms_ = terms_;
    return out;
}

HilbertSpace make_space(const DetectorSpec& det, int n_max)
{
    det.validate();
    return HilbertSpace(n_max, det.level_count(n_max));
}

namespace {

using Triplet = Eigen::Triplet<cplx>;

LinearOperator make_operator(const HilbertSpace& space, const std::vector<Triplet>& entries,
                             Symmetry symmetry)
{
    SparseMatrix m(space.dim(), space.dim());
    m.setFromTriplets(entries.begin(), entries.end());
    return LinearOperator(space, std::move(m), symmetry);
}

void require_levels(const HilbertSpace& space, int levels)
{
    if (space.n_levels() != levels)
        throw PhysicsError("space has " + std::to_string(space.n_levels())
                           + " detector levels but the detector needs " + std::to_string(levels));
}

// a^dag^2 - a^2 on the field factor.
LinearOperator squeeze_generator(const HilbertSpace& space)
{
    std::vector<Triplet> entries;
    for (int j = 1; j <= space.n_levels(); ++j)
        for (int n = 0; n + 2 <= space.n_max(); ++n) {
            const double amp = std::sqrt(double(n + 1) * (n + 2));
            entries.emplace_back(space.index(j, n + 2), space.index(j, n), amp);
            entries.emplace_back(space.index(j, n), space.index(j, n + 2), -amp);
        }
    return make_operator(space, entries, Symmetry::anti_hermitian);
}

LinearOperator field_power(const HilbertSpace& space, bool create)
{
    std::vector<Triplet> entries;
    for (int j = 1; j <= space.n_levels(); ++j)
        for (int n = 0; n + 2 <= space.n_max(); ++n) {
            const double amp = std::sqrt(double(n + 1) * (n + 2));
            if (create)
                entries.emplace_back(space.index(j, n + 2), space.index(j, n), amp);
            else
                entries.emplace_back(space.index(j, n), space.index(j, n + 2), amp);
        }
    return make_operator(space, entries, Symmetry::general);
}

// Adds c * (a sigma_{l+1,l} + a^dag sigma_{l,l+1}) for every transition.
void add_jc_coupling(const HilbertSpace& space, const std::vector<double>& couplings,
                     std::vector<Triplet>& entries)
{
    for (std::size_t l = 0; l < couplings.size(); ++l) {
        const int lower = int(l) + 1;
        for (int n = 1; n <= space.n_max(); ++n) {
            const double amp = couplings[l] * std::sqrt(double(n));
            // a sigma_{l+1,l}: |l, n> -> |l+1, n-1>
            entries.emplace_back(space.index(lower + 1, n - 1), space.index(lower, n), amp);
            entries.emplace_back(space.index(lower, n), space.index(lower + 1, n - 1), amp);
        }
    }
}

}  // namespace

TimeDependentOperator lab_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                                      const HilbertSpace& space)
{
    const auto ladder = as_ladder(det, space.n_max());
    require_levels(space, ladder.levels());

    std::vector<Triplet> entries;
    for (int j = 1; j <= space.n_levels(); ++j)
        for (int n = 0; n <= space.n_max(); ++n) {
            const double diag = mod.omega0 * n + ladder.energies[j - 1];
            if (diag != 0.0)
                entries.emplace_back(space.index(j, n), space.index(j, n), diag);
        }
    // dipole coupling g_j (a + a^dag)(sigma_{j+1,j} + sigma_{j,j+1})
    for (std::size_t l = 0; l < ladder.couplings.size(); ++l) {
        const int lower = int(l) + 1;
        for (int n = 1; n <= space.n_max(); ++n) {
            const double amp = ladder.couplings[l] * std::sqrt(double(n));
            for (auto [up_n, low_n] : {std::pair{n - 1, n}, std::pair{n, n - 1}}) {
                entries.emplace_back(space.index(lower + 1, up_n), space.index(lower, low_n), amp);
                entries.emplace_back(space.index(lower, low_n), space.index(lower + 1, up_n), amp);
            }
        }
    }
    TimeDependentOperator h(make_operator(space, entries, Symmetry::hermitian), Frame::lab);

    const double eta = mod.eta();
    const double eps = mod.epsilon;
    h.add_term(build_number(space), [eps, eta](double t) { return cplx(eps * std::sin(eta * t)); },
               std::abs(eps));
    const double chi_bound = std::abs(eps * eta) / (4.0 * (mod.omega0 - std::abs(eps)));
    h.add_term(squeeze_generator(space).scaled(cplx(0.0, 1.0)),
               [mod](double t) { return cplx(mod.chi(t)); }, chi_bound);
    return h;
}

LinearOperator rwa_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                               const HilbertSpace& space)
{
    const auto ladder = as_ladder(det, space.n_max());
    require_levels(space, ladder.levels());
    const auto detunings = ladder.detunings(mod.omega0);

    std::vector<Triplet> entries;
    double level_shift = 0.0;  // -sum_{j<=l} (Delta_j + r) on level l+1
    for (int j = 1; j <= space.n_levels(); ++j) {
        if (j >= 2)
            level_shift -= detunings[j - 2] + mod.r;
        for (int n = 0; n <= space.n_max(); ++n) {
            const double diag = -mod.r * n + level_shift;
            if (diag != 0.0)
                entries.emplace_back(space.index(j, n), space.index(j, n), diag);
        }
    }
    add_jc_coupling(space, ladder.couplings, entries);
    const double beta = mod.beta_r();
    for (int j = 1; j <= space.n_levels(); ++j)
        for (int n = 0; n + 2 <= space.n_max(); ++n) {
            const double amp = beta * std::sqrt(double(n + 1) * (n + 2));
            entries.emplace_back(space.index(j, n + 2), space.index(j, n), cplx(0.0, amp));
            entries.emplace_back(space.index(j, n), space.index(j, n + 2), cplx(0.0, -amp));
        }
    return make_operator(space, entries, Symmetry::hermitian);
}

TimeDependentOperator interaction_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                                              const HilbertSpace& space, bool counter_rotating)
{
    TimeDependentOperator h(rwa_hamiltonian(det, mod, space), Frame::rwa_interaction);
    if (!counter_rotating)
        return h;
    const auto ladder = as_ladder(det, space.n_max());
    // g_l a sigma_{l,l+1} (with e^{-i eta t}) and its conjugate a^dag sigma_{l+1,l} (e^{+i eta t})
    std::vector<Triplet> lower_both;
    for (std::size_t l = 0; l < ladder.couplings.size(); ++l) {
        const int lower = int(l) + 1;
        for (int n = 1; n <= space.n_max(); ++n)
            lower_both.emplace_back(space.index(lower, n - 1), space.index(lower + 1, n),
                                    ladder.couplings[l] * std::sqrt(double(n)));
    }
    const auto counter = make_operator(space, lower_both, Symmetry::general);
    const double eta = mod.eta();
    h.add_term(counter, [eta](double t) { return std::exp(cplx(0.0, -eta * t)); }, 1.0);
    h.add_term(counter.adjoint(), [eta](double t) { return std::exp(cplx(0.0, eta * t)); }, 1.0);
    return h;
}

LinearOperator strong_modulation_generator(const DetectorSpec& det, const ModulationSpec& mod,
                                           const HilbertSpace& space)
{
    const auto ladder = as_ladder(det, space.n_max());
    require_levels(space, ladder.levels());
    const double beta = mod.beta_r();
    if (beta == 0.0)
        throw PhysicsError("strong-modulation frame needs a nonzero modulation");
    std::vector<Triplet> entries;
    for (std::size_t l = 0; l < ladder.couplings.size(); ++l) {
        const double xi = ladder.couplings[l] / (2.0 * beta);
        const int lower = int(l) + 1;
        // a sigma_{l,l+1}: |l+1, n> -> |l, n-1>
        for (int n = 1; n <= space.n_max(); ++n) {
            const double amp = xi * std::sqrt(double(n));
            entries.emplace_back(space.index(lower, n - 1), space.index(lower + 1, n), amp);
            entries.emplace_back(space.index(lower + 1, n), space.index(lower, n - 1), amp);
        }
    }
    return make_operator(space, entries, Symmetry::hermitian);
}

LinearOperator effective_strong_modulation_hamiltonian(const DetectorSpec& det,
                                                       const ModulationSpec& mod,
                                                       const HilbertSpace& space, double xi_cap)
{
    if (mod.r != 0.0)
        throw PhysicsError("strong-modulation effective Hamiltonian is derived for r = 0");
    const auto ladder = as_ladder(det, space.n_max());
    require_levels(space, ladder.levels());
    const double beta = mod.beta0();
    if (beta == 0.0)
        throw PhysicsError("strong-modulation effective Hamiltonian needs epsilon != 0");

    std::vector<double> xi;
    for (double g : ladder.couplings)
        xi.push_back(g / (2.0 * mod.beta_r()));
    for (std::size_t l = 0; l < xi.size(); ++l)
        if (std::abs(xi[l]) > xi_cap) {
            std::ostringstream msg;
            msg << "|xi_" << l + 1 << "| = " << std::abs(xi[l]) << " exceeds the validity cap " << xi_cap;
            throw PhysicsError(msg.str());
        }

    // theta = 1 + sum_l xi_l^2 (sigma_{l+1} - sigma_l), diagonal on the detector
    const int levels = ladder.levels();
    std::vector<double> theta(levels, 1.0);
    for (std::size_t l = 0; l < xi.size(); ++l) {
        theta[l + 1] += xi[l] * xi[l];
        theta[l] -= xi[l] * xi[l];
    }

    std::vector<Triplet> entries;
    for (int j = 1; j <= levels; ++j)
        for (int n = 0; n + 2 <= space.n_max(); ++n) {
            const double amp = beta * theta[j - 1] * std::sqrt(double(n + 1) * (n + 2));
            entries.emplace_back(space.index(j, n + 2), space.index(j, n), cplx(0.0, amp));
            entries.emplace_back(space.index(j, n), space.index(j, n + 2), cplx(0.0, -amp));
        }
    // i beta0 xi_l xi_{l+1} (sigma_{l,l+2} - sigma_{l+2,l})
    for (int l = 1; l + 2 <= levels; ++l) {
        const double amp = beta * xi[l - 1] * xi[l];
        for (int n = 0; n <= space.n_max(); ++n) {
            entries.emplace_back(space.index(l, n), space.index(l + 2, n), cplx(0.0, amp));
            entries.emplace_back(space.index(l + 2, n), space.index(l, n), cplx(0.0, -amp));
        }
    }
    return make_operator(space, entries, Symmetry::hermitian);
}

TimeDependentOperator two_level_rotated_hamiltonian(const DetectorSpec& det,
                                                    const ModulationSpec& mod,
                                                    const HilbertSpace& space)
{
    const auto ladder = as_ladder(det, space.n_max());
    if (ladder.levels() != 2)
        throw PhysicsError("rotated two-level frame requires N = 2, got N = "
                           + std::to_string(ladder.levels()));
    require_levels(space, 2);
    const double delta1 = ladder.detunings(mod.omega0)[0];

    std::vector<Triplet> entries;
    for (int n = 0; n <= space.n_max(); ++n)
        if (delta1 != 0.0)
            entries.emplace_back(space.index(2, n), space.index(2, n), -delta1);
    add_jc_coupling(space, ladder.couplings, entries);
    TimeDependentOperator h(make_operator(space, entries, Symmetry::hermitian), Frame::two_level_rotated);

    const double beta = mod.beta_r();
    const double r = mod.r;
    h.add_term(field_power(space, true),
               [beta, r](double t) { return cplx(0.0, beta) * std::exp(cplx(0.0, -2.0 * r * t)); },
               std::abs(beta));
    h.add_term(field_power(space, false),
               [beta, r](double t) { return cplx(0.0, -beta) * std::exp(cplx(0.0, 2.0 * r * t)); },
               std::abs(beta));
    return h;
}

StateVector two_level_to_interaction_frame(const StateVector& rotated, double r, double t)
{
    const auto& space = rotated.space();
    if (space.n_levels() != 2)
        throw PhysicsError("two-level frame transformation requires N = 2");
    Vector out = rotated.amplitudes();
    for (Index i = 0; i < space.dim(); ++i) {
        const auto [level, photons] = space.level_photons(i);
        const double excitations = photons + (level == 2 ? 1.0 : 0.0);
        out[i] *= std::exp(cplx(0.0, r * t * excitations));
    }
    return StateVector(space, std::move(out));
}

namespace {

void check_network(const DetectorSpec& network, int max_atoms)
{
    if (network.kind != DetectorKind::dicke_network)
        throw PhysicsError("expected an atomic network detector");
    network.validate();
    if (network.atoms > max_atoms)
        throw PhysicsError("explicit network of " + std::to_string(network.atoms)
                           + " atoms exceeds the cap of " + std::to_string(max_atoms));
}

double binomial(int n, int k)
{
    double c = 1.0;
    for (int i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return c;
}

}  // namespace

LinearOperator dicke_network_hamiltonian(const DetectorSpec& network, const ModulationSpec& mod,
                                         int n_max, int max_atoms)
{
    check_network(network, max_atoms);
    const int atoms = network.atoms;
    const HilbertSpace space(n_max, 1 << atoms);
    std::vector<double> omegas(atoms, network.omega), gs(atoms, network.g);
    if (!network.atom_omegas.empty())
        omegas = network.atom_omegas;
    if (!network.atom_couplings.empty())
        gs = network.atom_couplings;

    std::vector<Triplet> entries;
    const double beta = mod.beta_r();
    for (unsigned mask = 0; mask < (1u << atoms); ++mask) {
        const int level = int(mask) + 1;
        double atom_shift = 0.0;
        for (int i = 0; i < atoms; ++i)
            if (mask & (1u << i))
                atom_shift -= (mod.omega0 - omegas[i]) + mod.r;
        for (int n = 0; n <= n_max; ++n) {
            const double diag = -mod.r * n + atom_shift;
            if (diag != 0.0)
                entries.emplace_back(space.index(level, n), space.index(level, n), diag);
            if (n + 2 <= n_max) {
                const double amp = beta * std::sqrt(double(n + 1) * (n + 2));
                entries.emplace_back(space.index(level, n + 2), space.index(level, n), cplx(0.0, amp));
                entries.emplace_back(space.index(level, n), space.index(level, n + 2), cplx(0.0, -amp));
            }
        }
        // g_i (a sigma_{2,1}^{(i)} + h.c.): absorb a photon, excite atom i
        for (int i = 0; i < atoms; ++i) {
            if (mask & (1u << i))
                continue;
            const int excited = int(mask | (1u << i)) + 1;
            for (int n = 1; n <= n_max; ++n) {
                const double amp = gs[i] * std::sqrt(double(n));
                entries.emplace_back(space.index(excited, n - 1), space.index(level, n), amp);
                entries.emplace_back(space.index(level, n), space.index(excited, n - 1), amp);
            }
        }
    }
    return make_operator(space, entries, Symmetry::hermitian);
}

Eigen::SparseMatrix<double> dicke_symmetric_embedding(int atoms, int n_max)
{
    const HilbertSpace ladder(n_max, atoms + 1);
    const HilbertSpace network(n_max, 1 << atoms);
    std::vector<Eigen::Triplet<double>> entries;
    for (unsigned mask = 0; mask < (1u << atoms); ++mask) {
        const int excitations = std::popcount(mask);
        const double weight = 1.0 / std::sqrt(binomial(atoms, excitations));
        for (int n = 0; n <= n_max; ++n)
            entries.emplace_back(network.index(int(mask) + 1, n), ladder.index(excitations + 1, n), weight);
    }
    Eigen::SparseMatrix<double> m(network.dim(), ladder.dim());
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

LinearOperator collective_sz(int atoms, int n_max)
{
    const HilbertSpace space(n_max, 1 << atoms);
    std::vector<Triplet> entries;
    for (unsigned mask = 0; mask < (1u << atoms); ++mask)
        for (int n = 0; n <= n_max; ++n)
            if (std::popcount(mask) > 0)
                entries.emplace_back(space.index(int(mask) + 1, n), space.index(int(mask) + 1, n),
                                     double(std::popcount(mask)));
    return make_operator(space, entries, Symmetry::hermitian);
}

LinearOperator collective_lowering(int atoms, int n_max)
{
    const HilbertSpace space(n_max, 1 << atoms);
    std::vector<Triplet> entries;
    for (unsigned mask = 0; mask < (1u << atoms); ++mask)
        for (int i = 0; i < atoms; ++i)
            if (mask & (1u << i))
                for (int n = 0; n <= n_max; ++n)
                    entries.emplace_back(space.index(int(mask & ~(1u << i)) + 1, n),
                                         space.index(int(mask) + 1, n), 1.0);
    return make_operator(space, entries, Symmetry::general);
}

std::vector<double> network_excitation_populations(const StateVector& state, int atoms)
{
    const auto& space = state.space();
    if (space.n_levels() != (1 << atoms))
        throw PhysicsError("state does not live in a " + std::to_string(atoms) + "-atom network space");
    const auto per_config = level_populations(state);
    std::vector<double> pops(atoms + 1, 0.0);
    for (unsigned mask = 0; mask < (1u << atoms); ++mask)
        pops[std::popcount(mask)] += per_config[mask];
    return pops;
}

}  // namespace dcemon
