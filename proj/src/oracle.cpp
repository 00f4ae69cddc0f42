#include "dcemon/oracle.hpp"

#include <cmath>
#include <sstream>

#include "dcemon/errors.hpp"

namespace dcemon::oracle {

double empty_cavity_mean_n(double beta0, double t)
{
    const double s = std::sinh(2.0 * beta0 * t);
    return s * s;
}

Quadratures empty_cavity_quadratures(double beta0, double t)
{
    return {std::exp(4.0 * beta0 * t) / 2.0, std::exp(-4.0 * beta0 * t) / 2.0};
}

double empty_cavity_mandel_q(double mean_n)
{
    if (!(mean_n > 0.0))
        throw DomainError("squeezed-vacuum Mandel factor needs <n> > 0");
    return 1.0 + 2.0 * mean_n;
}

double thermal_mandel_q(double mean_n)
{
    if (!(mean_n >= 0.0))
        throw DomainError("thermal Mandel factor needs <n> >= 0");
    return mean_n;
}

Validity ho_domain(double g, double beta0)
{
    if (!std::isfinite(g) || !std::isfinite(beta0))
        return {false, "non-finite parameters"};
    if (std::abs(g) <= std::abs(beta0)) {
        std::ostringstream msg;
        msg << "gamma = sqrt(g^2 - beta0^2) is not real for g=" << g << ", beta0=" << beta0;
        return {false, msg.str()};
    }
    return {true, {}};
}

double ho_gamma(double g, double beta0)
{
    const auto v = ho_domain(g, beta0);
    if (!v.ok)
        throw DomainError(v.reason);
    return std::sqrt(g * g - beta0 * beta0);
}

HoClosedForm ho_variances(double g, double beta0, double t)
{
    const double gamma = ho_gamma(g, beta0);
    const double s = std::sin(gamma * t);
    const double ratio = beta0 / gamma;
    const double oscillating = ratio / 2.0 * std::sin(2.0 * gamma * t);
    const double common = 0.5 + ratio * ratio * s * s;
    const double excess = g * beta0 / (gamma * gamma);
    return {std::exp(2.0 * beta0 * t) * (common + oscillating),
            std::exp(-2.0 * beta0 * t) * (common - oscillating),
            0.25 + excess * excess * s * s * s * s};
}

double ho_shifted_resonance_mean_n(double beta0, double t)
{
    const double s = std::sinh(beta0 * t);
    return s * s / 2.0;
}

double three_level_oscillation_frequency(double g1, double g2, double beta_r)
{
    if (g1 == 0.0)
        throw DomainError("three-level oscillation frequency needs g1 != 0");
    const double q = g2 / (2.0 * g1);
    return beta_r / std::sqrt(1.0 + q * q);
}

DispersiveShift dispersive_shift(double g1, double delta1, int n)
{
    if (delta1 == 0.0)
        throw DomainError("dispersive shift needs Delta1 != 0");
    const double half = delta1 / 2.0;
    return {g1 * g1 / delta1, half * half >= kDispersiveMargin * g1 * g1 * n};
}

}  // namespace dcemon::oracle
