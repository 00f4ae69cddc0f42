#pragma once

// Dressed-state analysis of the unmodulated (epsilon = 0, r = 0) interaction-frame
// Hamiltonian. The excitation number m = n + (j - 1) is conserved there, so every
// m-excitation block is at most N x N and is diagonalized on its own.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dcemon/fock.hpp"
#include "dcemon/model.hpp"

namespace dcemon {

struct BareLabel {
    int level;
    int photons;
    bool operator==(const BareLabel&) const = default;
};

struct ExcitationBlock {
    int m;
    std::vector<BareLabel> basis;  // ordered by level: |1,m>, |2,m-1>, ...
    Eigen::MatrixXd matrix;
};

// Block of H(eps=0, r=0) with m excitations.
ExcitationBlock excitation_block(const Ladder& ladder, double omega0, int m);

struct DressedState {
    int m;
    int k;  // 0 = null branch; negative/positive branches ordered by eigenvalue
    double eigenvalue;
    std::vector<BareLabel> basis;
    std::vector<double> amplitudes;

    StateVector embed(const HilbertSpace& space) const;
};

// All eigenstates of the m-excitation block, ascending in eigenvalue.
std::vector<DressedState> block_eigenstates(const Ladder& ladder, double omega0, int m);

// ||H phi - lambda phi|| evaluated on the block.
double eigen_residual(const ExcitationBlock& block, const DressedState& state);

struct JcEigensystem {
    int n;
    double z;  // sqrt((Delta1/2)^2 + g1^2 n)
    double lambda_plus;
    double lambda_minus;
    double theta;  // in (0, pi/2)
    // coefficients on (|1,n>, |2,n-1>)
    std::array<double, 2> phi_plus;
    std::array<double, 2> phi_minus;
};

JcEigensystem jc_eigensystem(double g1, double delta1, int n);

struct ThreeLevelEigensystem {
    int n;
    double lambda;  // eigenvalues are +lambda and -lambda
    // coefficients on (|1,n>, |2,n-1>, |3,n-2>)
    std::array<double, 3> phi_plus;
    std::array<double, 3> phi_minus;
};

// Resonant three-level ladder (Delta1 = Delta2 = 0).
ThreeLevelEigensystem three_level_eigensystem(double g1, double g2, int n);

// Zero-eigenvalue dressed state of a resonant ladder with m excitations, built
// from the alternating-level recursion with alpha_0 = +1. Returns nullopt when
// the m-block has no null vector (even block dimension).
std::optional<DressedState> null_eigenstate(const DetectorSpec& det, int m, double omega0 = 1.0,
                                            int n_max_hint = 0);

inline constexpr double kResonanceWindow = 0.2;

struct DressedCoupling {
    std::size_t row;
    std::size_t col;
    double element;  // beta0 <phi_row| (a^dag^2 - a^2) |phi_col>
    double gap;      // lambda_col - lambda_row
    bool resonant;
};

struct DressedCouplings {
    std::vector<DressedState> states;
    Eigen::SparseMatrix<double> matrix;
    std::vector<DressedCoupling> entries;
};

// Couplings between dressed states of blocks 0..m_cap. m_cap must not exceed n_max.
DressedCouplings dressed_coupling_matrix(const DetectorSpec& det, const ModulationSpec& mod,
                                         int m_cap, int n_max,
                                         double resonance_window = kResonanceWindow);

enum class RegimeKind { unbounded, bounded, two_state_oscillation, dispersive };

const char* to_string(RegimeKind kind);

struct Regime {
    RegimeKind kind;
    int max_photons = 0;     // bounded
    double frequency = 0.0;  // two_state_oscillation
};

struct ResonanceEntry {
    double r;
    Regime regime;
    std::string formula;
};

// Shift of the two-level resonance 2r = S z_2 - Delta1/2 + y (branch = +1 or -1).
double two_level_resonance_shift(double g1, double delta1, int branch, double y);

std::vector<ResonanceEntry> resonance_catalog(const DetectorSpec& det, const ModulationSpec& mod);

}  // namespace dcemon
