#pragma once

// Detector/modulation parameters and the Hamiltonians of the modulated cavity
// in the lab frame, the rotating-wave interaction picture, the strong-modulation
// effective frame, the rotated two-level frame and the explicit atomic network.

#include <functional>
#include <string>
#include <vector>

#include "dcemon/fock.hpp"

namespace dcemon {

enum class DetectorKind { none, ladder, harmonic_oscillator, dicke_network };

const char* to_string(DetectorKind kind);

struct DetectorSpec {
    DetectorKind kind = DetectorKind::none;

    // ladder: E_1..E_N and g_1..g_{N-1}
    std::vector<double> energies;
    std::vector<double> couplings;

    // harmonic oscillator and network: transition frequency and coupling
    double omega = 0.0;
    double g = 0.0;
    // harmonic oscillator truncation; 0 means n_max + 1 levels
    int ho_levels = 0;

    // network: atom count, optional per-atom overrides (non-identical atoms)
    int atoms = 0;
    std::vector<double> atom_omegas;
    std::vector<double> atom_couplings;

    static DetectorSpec empty_cavity();
    static DetectorSpec ladder(std::vector<double> energies, std::vector<double> couplings);
    // Ladder with E_{j+1} - E_j = omega0 - Delta_j, E_1 = 0. Missing detunings are zero.
    static DetectorSpec ladder_from_detunings(double omega0, std::vector<double> couplings,
                                              std::vector<double> detunings = {});
    static DetectorSpec harmonic_oscillator(double g, double omega, int levels = 0);
    static DetectorSpec dicke_network(int atoms, double omega, double g);

    // Throws PhysicsError on structural problems.
    void validate() const;
    int level_count(int n_max) const;
    bool identical_atoms() const;
};

// Ladder parameters after resolving harmonic-oscillator / network variants.
struct Ladder {
    std::vector<double> energies;
    std::vector<double> couplings;

    int levels() const noexcept { return int(energies.size()); }
    // Delta_j = omega0 - (E_{j+1} - E_j)
    std::vector<double> detunings(double omega0) const;
};

Ladder as_ladder(const DetectorSpec& det, int n_max);

// Symmetric Dicke states of identical atoms: E_j = Omega (j-1), g_j = g sqrt(j (N-j)).
DetectorSpec dicke_to_ladder(const DetectorSpec& network);

enum class ChiForm { approximate, exact };

struct ModulationSpec {
    double omega0 = 1.0;
    double epsilon = 0.0;
    double r = 0.0;  // eta = 2 omega0 + 2 r
    double y = 0.0;  // correctional shift, recorded for shifted-resonance runs
    ChiForm chi_form = ChiForm::approximate;

    double eta() const noexcept { return 2.0 * omega0 + 2.0 * r; }
    double beta_r() const noexcept { return (1.0 + r / omega0) * epsilon / 4.0; }
    double beta0() const noexcept { return epsilon / 4.0; }
    double omega_t(double t) const;
    // (4 omega_t)^-1 d omega_t/dt, or (eps eta / 4 omega0) cos(eta t) when approximate
    double chi(double t) const;

    // Throws for |eps|/omega0 >= 0.1; returns warnings for the weaker 0.01 bound.
    std::vector<std::string> validate() const;
};

std::vector<std::string> rwa_warnings(const DetectorSpec& det, const ModulationSpec& mod, int n_max);

struct EnvelopeTerm {
    LinearOperator op;
    std::function<cplx(double)> envelope;
    double envelope_bound;  // sup_t |envelope(t)|
};

// H(t) = C + sum_k f_k(t) O_k. The integrator rescales envelopes instead of
// rebuilding matrices.
class TimeDependentOperator {
public:
    TimeDependentOperator(LinearOperator constant, Frame frame);

    void add_term(LinearOperator op, std::function<cplx(double)> envelope, double envelope_bound);

    const LinearOperator& constant_part() const noexcept { return constant_; }
    const std::vector<EnvelopeTerm>& terms() const noexcept { return terms_; }
    const HilbertSpace& space() const noexcept { return constant_.space(); }
    Frame frame() const noexcept { return frame_; }
    bool time_independent() const noexcept { return terms_.empty(); }

    LinearOperator at(double t) const;
    // out = H(t) x
    void apply(double t, const Vector& x, Vector& out) const;
    double gershgorin_bound() const;
    // Lanczos estimate for a Hermitian constant part (5% margin) plus envelope bounds.
    double spectral_radius_estimate() const;

    // Adds -i R / 2 to the constant part (no-count generator).
    TimeDependentOperator with_decay(const LinearOperator& rates) const;

private:
    LinearOperator constant_;
    std::vector<EnvelopeTerm> terms_;
    Frame frame_;
};

HilbertSpace make_space(const DetectorSpec& det, int n_max);

// omega_t n + i chi_t (a^dag^2 - a^2) + sum E_j sigma_j + sum g_j (a + a^dag)(sigma_{j+1,j} + sigma_{j,j+1})
TimeDependentOperator lab_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                                      const HilbertSpace& space);

// Interaction-picture Hamiltonian under the rotating-wave approximation.
LinearOperator rwa_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                               const HilbertSpace& space);

// Same frame; optionally keeps g_l (e^{-i eta t} a sigma_{l,l+1} + h.c.).
TimeDependentOperator interaction_hamiltonian(const DetectorSpec& det, const ModulationSpec& mod,
                                              const HilbertSpace& space, bool counter_rotating);

inline constexpr double kXiCap = 0.3;

// Second-order effective Hamiltonian of the strong-modulation regime (r = 0).
LinearOperator effective_strong_modulation_hamiltonian(const DetectorSpec& det,
                                                       const ModulationSpec& mod,
                                                       const HilbertSpace& space,
                                                       double xi_cap = kXiCap);

// Generator S of U = exp(-i S), S = sum_l xi_l (a sigma_{l,l+1} + h.c.), xi_l = g_l / (2 beta_r).
LinearOperator strong_modulation_generator(const DetectorSpec& det, const ModulationSpec& mod,
                                           const HilbertSpace& space);

// -Delta_1 sigma_2 + (i beta_r a^dag^2 e^{-2irt} + g_1 a sigma_{2,1} + h.c.), N = 2 only.
TimeDependentOperator two_level_rotated_hamiltonian(const DetectorSpec& det,
                                                    const ModulationSpec& mod,
                                                    const HilbertSpace& space);

// Maps a rotated two-level state back to the interaction frame: psi = exp(irt(n + sigma_2)) psi_2.
StateVector two_level_to_interaction_frame(const StateVector& rotated, double r, double t);

inline constexpr int kMaxNetworkAtoms = 4;

// Explicit tensor-product network in the interaction frame. Detector index
// 1 + bitmask encodes which atoms are excited (bit i set = atom i in |2>).
LinearOperator dicke_network_hamiltonian(const DetectorSpec& network, const ModulationSpec& mod,
                                         int n_max, int max_atoms = kMaxNetworkAtoms);

// Isometry from the (atoms+1)-level ladder space into the explicit network space,
// sending |j, n> to the normalized symmetric Dicke state with j-1 excitations.
Eigen::SparseMatrix<double> dicke_symmetric_embedding(int atoms, int n_max);

// Collective operators on the explicit network space.
LinearOperator collective_sz(int atoms, int n_max);
LinearOperator collective_lowering(int atoms, int n_max);

// P(k excitations) for k = 0..atoms; matches the ladder populations P_{k+1}.
std::vector<double> network_excitation_populations(const StateVector& state, int atoms);

}  // namespace dcemon
