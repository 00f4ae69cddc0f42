#pragma once

#include <cmath>
#include <random>

#include "dcemon/fock.hpp"
#include "dcemon/model.hpp"

namespace unit {

inline dcemon::ModulationSpec modulation(double epsilon, double r = 0.0)
{
    dcemon::ModulationSpec m;
    m.epsilon = epsilon;
    m.r = r;
    return m;
}

inline dcemon::Vector random_vector(Eigen::Index dim, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    dcemon::Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        v[i] = {normal(rng), normal(rng)};
    return v.normalized();
}

inline dcemon::StateVector random_state(const dcemon::HilbertSpace& space, std::uint64_t seed)
{
    return {space, random_vector(space.dim(), seed)};
}

// Coherent state |alpha> on the field with the detector in level 1.
inline dcemon::StateVector coherent(const dcemon::HilbertSpace& space, double alpha)
{
    dcemon::Vector v = dcemon::Vector::Zero(space.dim());
    double c = std::exp(-alpha * alpha / 2);
    for (int n = 0; n <= space.n_max(); ++n) {
        v[space.index(1, n)] = c;
        c *= alpha / std::sqrt(double(n + 1));
    }
    return {space, v.normalized()};
}

}  // namespace unit
