#include "dcemon/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcemon/errors.hpp"

namespace dcemon {

const char* to_string(Frame frame)
{
    switch (frame) {
    case Frame::lab:
        return "lab";
    case Frame::rwa_interaction:
        return "rwa_interaction";
    case Frame::two_level_rotated:
        return "two_level_rotated";
    }
    return "unknown";
}

HilbertSpace::HilbertSpace(int n_max, int n_levels) : n_max_(n_max), n_levels_(n_levels)
{
    if (n_max < 2)
        throw PhysicsError("photon cutoff n_max must be >= 2, got " + std::to_string(n_max));
    if (n_levels < 1)
        throw PhysicsError("detector level count must be >= 1, got " + std::to_string(n_levels));
}

Index HilbertSpace::index(int level, int photons) const
{
    if (level < 1 || level > n_levels_ || photons < 0 || photons > n_max_)
        throw PhysicsError("basis label |" + std::to_string(level) + "," + std::to_string(photons)
                           + "> outside the truncated space");
    return Index(level - 1) * (n_max_ + 1) + photons;
}

std::pair<int, int> HilbertSpace::level_photons(Index idx) const
{
    const auto layers = Index(n_max_ + 1);
    return {int(idx / layers) + 1, int(idx % layers)};
}

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(space), amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.size() != space_.dim())
        throw PhysicsError("state length " + std::to_string(amplitudes_.size())
                           + " does not match space dimension " + std::to_string(space_.dim()));
}

StateVector StateVector::basis(const HilbertSpace& space, int level, int photons)
{
    Vector v = Vector::Zero(space.dim());
    v[space.index(level, photons)] = 1.0;
    return StateVector(space, std::move(v));
}

void StateVector::normalize()
{
    const double n = amplitudes_.norm();
    if (n == 0.0)
        throw PhysicsError("cannot normalize the zero vector");
    amplitudes_ /= n;
}

namespace {

double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b)
{
    const SparseMatrix diff = a - b;
    double worst = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

void require_same_space(const HilbertSpace& a, const HilbertSpace& b)
{
    if (!(a == b))
        throw PhysicsError("operator/state spaces do not match");
}

}  // namespace

LinearOperator::LinearOperator(HilbertSpace space, SparseMatrix matrix, Symmetry symmetry)
    : space_(space), matrix_(std::move(matrix)), symmetry_(symmetry)
{
    if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
        throw PhysicsError("operator shape does not match space dimension");
    matrix_.makeCompressed();
    if (symmetry_ == Symmetry::hermitian) {
        const SparseMatrix adj = matrix_.adjoint();
        if (max_abs_difference(matrix_, adj) >= 1e-12)
            throw PhysicsError("operator flagged hermitian fails the hermiticity check");
    } else if (symmetry_ == Symmetry::anti_hermitian) {
        const SparseMatrix adj = matrix_.adjoint();
        if (max_abs_difference(matrix_, -adj) >= 1e-12)
            throw PhysicsError("operator flagged anti-hermitian fails the check");
    }
}

LinearOperator LinearOperator::adjoint() const
{
    return LinearOperator(space_, SparseMatrix(matrix_.adjoint()), symmetry_);
}

Vector LinearOperator::apply(const Vector& x) const
{
    if (x.size() != matrix_.cols())
        throw PhysicsError("dimension mismatch in operator application");
    return matrix_ * x;
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const
{
    require_same_space(space_, rhs.space_);
    return LinearOperator(space_, SparseMatrix(matrix_ * rhs.matrix_));
}

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const
{
    require_same_space(space_, rhs.space_);
    const auto sym = symmetry_ == rhs.symmetry_ ? symmetry_ : Symmetry::general;
    return LinearOperator(space_, SparseMatrix(matrix_ + rhs.matrix_), sym);
}

LinearOperator LinearOperator::operator-(const LinearOperator& rhs) const
{
    require_same_space(space_, rhs.space_);
    const auto sym = symmetry_ == rhs.symmetry_ ? symmetry_ : Symmetry::general;
    return LinearOperator(space_, SparseMatrix(matrix_ - rhs.matrix_), sym);
}

LinearOperator LinearOperator::scaled(cplx factor) const
{
    auto sym = Symmetry::general;
    if (factor.imag() == 0.0)
        sym = symmetry_;
    else if (factor.real() == 0.0 && symmetry_ == Symmetry::hermitian)
        sym = Symmetry::anti_hermitian;
    else if (factor.real() == 0.0 && symmetry_ == Symmetry::anti_hermitian)
        sym = Symmetry::hermitian;
    return LinearOperator(space_, SparseMatrix(matrix_ * factor), sym);
}

double LinearOperator::gershgorin_bound() const
{
    double worst = 0.0;
    for (Index k = 0; k < matrix_.outerSize(); ++k) {
        double row = 0.0;
        for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
            row += std::abs(it.value());
        worst = std::max(worst, row);
    }
    return worst;
}

double LinearOperator::hermiticity_defect() const
{
    return max_abs_difference(matrix_, SparseMatrix(matrix_.adjoint()));
}

namespace {

using Triplet = Eigen::Triplet<cplx>;

LinearOperator from_triplets(const HilbertSpace& space, const std::vector<Triplet>& entries,
                             Symmetry symmetry)
{
    SparseMatrix m(space.dim(), space.dim());
    m.setFromTriplets(entries.begin(), entries.end());
    return LinearOperator(space, std::move(m), symmetry);
}

}  // namespace

LinearOperator identity(const HilbertSpace& space)
{
    std::vector<Triplet> entries;
    for (Index i = 0; i < space.dim(); ++i)
        entries.emplace_back(i, i, 1.0);
    return from_triplets(space, entries, Symmetry::hermitian);
}

LinearOperator build_annihilation(const HilbertSpace& space)
{
    std::vector<Triplet> entries;
    for (int j = 1; j <= space.n_levels(); ++j)
        for (int n = 1; n <= space.n_max(); ++n)
            entries.emplace_back(space.index(j, n - 1), space.index(j, n), std::sqrt(double(n)));
    return from_triplets(space, entries, Symmetry::general);
}

LinearOperator build_creation(const HilbertSpace& space)
{
    return build_annihilation(space).adjoint();
}

LinearOperator build_number(const HilbertSpace& space)
{
    std::vector<Triplet> entries;
    for (int j = 1; j <= space.n_levels(); ++j)
        for (int n = 1; n <= space.n_max(); ++n)
            entries.emplace_back(space.index(j, n), space.index(j, n), double(n));
    return from_triplets(space, entries, Symmetry::hermitian);
}

LinearOperator build_sigma(const HilbertSpace& space, int k, int j)
{
    if (k < 1 || k > space.n_levels() || j < 1 || j > space.n_levels())
        throw PhysicsError("sigma level index out of range: (" + std::to_string(k) + ","
                           + std::to_string(j) + ") with N=" + std::to_string(space.n_levels()));
    std::vector<Triplet> entries;
    for (int n = 0; n <= space.n_max(); ++n)
        entries.emplace_back(space.index(k, n), space.index(j, n), 1.0);
    return from_triplets(space, entries, k == j ? Symmetry::hermitian : Symmetry::general);
}

LinearOperator build_projector(const HilbertSpace& space, int level)
{
    return build_sigma(space, level, level);
}

LinearOperator build_parity(const HilbertSpace& space)
{
    std::vector<Triplet> entries;
    for (int j = 1; j <= space.n_levels(); ++j)
        for (int n = 0; n <= space.n_max(); ++n)
            entries.emplace_back(space.index(j, n), space.index(j, n), (n + j - 1) % 2 ? -1.0 : 1.0);
    return from_triplets(space, entries, Symmetry::hermitian);
}

cplx expectation(const StateVector& state, const LinearOperator& op)
{
    require_same_space(state.space(), op.space());
    const Vector& psi = state.amplitudes();
    const double weight = psi.squaredNorm();
    if (weight == 0.0)
        throw PhysicsError("expectation of the zero vector");
    return psi.dot(op.matrix() * psi) / weight;
}

namespace {

struct FieldMoments {
    double n = 0.0;
    double n2 = 0.0;
    cplx a = 0.0;
    cplx a2 = 0.0;
};

// Moments of the field operators evaluated directly on the amplitudes.
FieldMoments field_moments(const StateVector& state)
{
    const auto& space = state.space();
    const Vector& psi = state.amplitudes();
    const int layers = space.photon_layers();
    FieldMoments m;
    double weight = 0.0;
    for (int j = 0; j < space.n_levels(); ++j) {
        const cplx* c = psi.data() + Index(j) * layers;
        for (int n = 0; n < layers; ++n) {
            const double p = std::norm(c[n]);
            weight += p;
            m.n += n * p;
            m.n2 += double(n) * n * p;
            if (n >= 1)
                m.a += std::conj(c[n - 1]) * std::sqrt(double(n)) * c[n];
            if (n >= 2)
                m.a2 += std::conj(c[n - 2]) * std::sqrt(double(n) * (n - 1)) * c[n];
        }
    }
    if (weight == 0.0)
        throw PhysicsError("observables of the zero vector");
    m.n /= weight;
    m.n2 /= weight;
    m.a /= weight;
    m.a2 /= weight;
    return m;
}

}  // namespace

std::optional<double> mandel_q(const StateVector& state)
{
    const auto m = field_moments(state);
    if (m.n < kMandelFloor)
        return std::nullopt;
    const double variance = m.n2 - m.n * m.n;
    return (variance - m.n) / m.n;
}

QuadratureVariances quadrature_variances(const StateVector& state)
{
    const auto m = field_moments(state);
    const double re_a2 = m.a2.real();
    const double mean_plus = std::sqrt(2.0) * m.a.real();
    const double mean_minus = std::sqrt(2.0) * m.a.imag();
    return {(2.0 * re_a2 + 2.0 * m.n + 1.0) / 2.0 - mean_plus * mean_plus,
            (2.0 * m.n + 1.0 - 2.0 * re_a2) / 2.0 - mean_minus * mean_minus};
}

double mean_photon_number(const StateVector& state)
{
    return field_moments(state).n;
}

double truncation_check(const StateVector& state, int margin_layers)
{
    if (margin_layers < 1)
        throw PhysicsError("truncation margin must be >= 1 layer");
    const auto& space = state.space();
    const int layers = space.photon_layers();
    const int first = std::max(0, layers - margin_layers);
    const Vector& psi = state.amplitudes();
    double top = 0.0;
    for (int j = 0; j < space.n_levels(); ++j)
        for (int n = first; n < layers; ++n)
            top += std::norm(psi[Index(j) * layers + n]);
    return top / psi.squaredNorm();
}

std::vector<double> level_populations(const StateVector& state)
{
    const auto& space = state.space();
    const int layers = space.photon_layers();
    const Vector& psi = state.amplitudes();
    const double weight = psi.squaredNorm();
    std::vector<double> pops(space.n_levels());
    for (int j = 0; j < space.n_levels(); ++j)
        pops[j] = psi.segment(Index(j) * layers, layers).squaredNorm() / weight;
    return pops;
}

std::vector<double> photon_distribution(const StateVector& state)
{
    const auto& space = state.space();
    const int layers = space.photon_layers();
    const Vector& psi = state.amplitudes();
    const double weight = psi.squaredNorm();
    std::vector<double> p(layers, 0.0);
    for (int j = 0; j < space.n_levels(); ++j)
        for (int n = 0; n < layers; ++n)
            p[n] += std::norm(psi[Index(j) * layers + n]);
    for (auto& x : p)
        x /= weight;
    return p;
}

Eigen::MatrixXcd reduced_field_density(const StateVector& state)
{
    const auto& space = state.space();
    const int layers = space.photon_layers();
    const Vector& psi = state.amplitudes();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(layers, layers);
    for (int j = 0; j < space.n_levels(); ++j) {
        const Vector block = psi.segment(Index(j) * layers, layers);
        rho += block * block.adjoint();
    }
    return rho / psi.squaredNorm();
}

void ObservableSeries::record(double t, const StateVector& state)
{
    const auto m = field_moments(state);
    times.push_back(t);
    n_mean.push_back(m.n);
    mandel_q.push_back(dcemon::mandel_q(state));
    const auto q = quadrature_variances(state);
    xvar_plus.push_back(q.plus);
    xvar_minus.push_back(q.minus);
    level_populations.push_back(dcemon::level_populations(state));
}

void ObservableSeries::snapshot(double t, const StateVector& state)
{
    auto p = photon_distribution(state);
    double tail = 0.0;
    std::size_t keep = p.size();
    // walk back from the top while the discarded tail stays below 1e-12
    while (keep > 1 && tail + p[keep - 1] < 1e-12) {
        tail += p[keep - 1];
        --keep;
    }
    p.resize(keep);
    snapshots.push_back({t, std::move(p)});
}

}  // namespace dcemon
