#pragma once

// Truncated atom (x) field Hilbert space, ladder/Pauli operators and observables.
//
// Basis ordering is detector-major: index = (level - 1) * (n_max + 1) + photons,
// with detector levels numbered from 1. A level population is therefore a
// contiguous slice of the amplitude vector.

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dcemon {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Index = Eigen::Index;

enum class Frame { lab, rwa_interaction, two_level_rotated };

const char* to_string(Frame frame);

class HilbertSpace {
public:
    HilbertSpace(int n_max, int n_levels);

    int n_max() const noexcept { return n_max_; }
    int n_levels() const noexcept { return n_levels_; }
    int photon_layers() const noexcept { return n_max_ + 1; }
    Index dim() const noexcept { return Index(n_levels_) * (n_max_ + 1); }

    Index index(int level, int photons) const;
    std::pair<int, int> level_photons(Index idx) const;

    bool operator==(const HilbertSpace&) const = default;

private:
    int n_max_;
    int n_levels_;
};

class StateVector {
public:
    StateVector(HilbertSpace space, Vector amplitudes);

    // |level, photons>
    static StateVector basis(const HilbertSpace& space, int level, int photons);

    const HilbertSpace& space() const noexcept { return space_; }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    Vector& amplitudes() noexcept { return amplitudes_; }

    double norm() const { return amplitudes_.norm(); }
    double norm_squared() const { return amplitudes_.squaredNorm(); }
    void normalize();

private:
    HilbertSpace space_;
    Vector amplitudes_;
};

enum class Symmetry { hermitian, anti_hermitian, general };

class LinearOperator {
public:
    // Throws PhysicsError when the claimed symmetry does not hold to 1e-12.
    LinearOperator(HilbertSpace space, SparseMatrix matrix, Symmetry symmetry = Symmetry::general);

    const HilbertSpace& space() const noexcept { return space_; }
    const SparseMatrix& matrix() const noexcept { return matrix_; }
    Symmetry symmetry() const noexcept { return symmetry_; }

    LinearOperator adjoint() const;
    Vector apply(const Vector& x) const;

    LinearOperator operator*(const LinearOperator& rhs) const;
    LinearOperator operator+(const LinearOperator& rhs) const;
    LinearOperator operator-(const LinearOperator& rhs) const;
    LinearOperator scaled(cplx factor) const;

    // Largest absolute row sum; an upper bound on the spectral radius.
    double gershgorin_bound() const;

    // max |M - M^dagger| elementwise.
    double hermiticity_defect() const;

private:
    HilbertSpace space_;
    SparseMatrix matrix_;
    Symmetry symmetry_;
};

LinearOperator identity(const HilbertSpace& space);
LinearOperator build_annihilation(const HilbertSpace& space);
LinearOperator build_creation(const HilbertSpace& space);
LinearOperator build_number(const HilbertSpace& space);
// |k><j| on the detector, identity on the field. Levels are 1-based.
LinearOperator build_sigma(const HilbertSpace& space, int k, int j);
LinearOperator build_projector(const HilbertSpace& space, int level);
// (-1)^(n + sum_j (j-1) sigma_j)
LinearOperator build_parity(const HilbertSpace& space);

// <psi|O|psi> / <psi|psi>; normalized so that it stays meaningful for
// sub-unit-norm states during no-count propagation.
cplx expectation(const StateVector& state, const LinearOperator& op);

inline constexpr double kMandelFloor = 1e-12;

// [<(dn)^2> - <n>] / <n>, or nullopt when <n> < kMandelFloor.
std::optional<double> mandel_q(const StateVector& state);

struct QuadratureVariances {
    double plus;
    double minus;
};

// Variances of x_+ = (a + a^dag)/sqrt(2) and x_- = (a - a^dag)/(i sqrt(2)); vacuum gives 1/2.
QuadratureVariances quadrature_variances(const StateVector& state);

// Population held in the top `margin_layers` Fock layers (all detector levels).
double truncation_check(const StateVector& state, int margin_layers);

double mean_photon_number(const StateVector& state);
std::vector<double> level_populations(const StateVector& state);
std::vector<double> photon_distribution(const StateVector& state);

// Field density matrix after tracing out the detector.
Eigen::MatrixXcd reduced_field_density(const StateVector& state);

struct PhotonSnapshot {
    double time;
    std::vector<double> probabilities;
};

// Time-indexed observables. Times are absolute (units of 1/omega0); `epsilon`
// converts them to the dimensionless axis epsilon*t.
struct ObservableSeries {
    Frame frame = Frame::rwa_interaction;
    double epsilon = 0.0;
    int n_levels = 1;
    std::vector<double> times;
    std::vector<double> n_mean;
    std::vector<std::optional<double>> mandel_q;
    std::vector<double> xvar_plus;
    std::vector<double> xvar_minus;
    std::vector<std::vector<double>> level_populations;
    std::vector<PhotonSnapshot> snapshots;

    std::size_t size() const noexcept { return times.size(); }
    double dimensionless_time(std::size_t i) const { return epsilon * times[i]; }

    void record(double t, const StateVector& state);
    // Stores p(n) up to the first n whose cumulative tail is below 1e-12.
    void snapshot(double t, const StateVector& state);
};

}  // namespace dcemon
