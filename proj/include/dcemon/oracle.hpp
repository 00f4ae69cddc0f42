#pragma once

// Closed-form results for the modulated cavity. Nothing here calls simulation
// code. Formulas derived at r = 0 take beta0 = epsilon/4; the shifted-resonance
// ones take beta_r = (1 + r/omega0) epsilon/4, as noted per function.

#include <string>

namespace dcemon::oracle {

struct Validity {
    bool ok;
    std::string reason;
};

// sinh^2(2 beta0 t)
double empty_cavity_mean_n(double beta0, double t);

struct Quadratures {
    double plus;
    double minus;
};

// exp(+-4 beta0 t) / 2
Quadratures empty_cavity_quadratures(double beta0, double t);

// 1 + 2 <n>; DomainError for mean_n <= 0.
double empty_cavity_mandel_q(double mean_n);
double thermal_mandel_q(double mean_n);

Validity ho_domain(double g, double beta0);
double ho_gamma(double g, double beta0);

struct HoClosedForm {
    double xvar_plus;
    double xvar_minus;
    double uncertainty_product;
};

// Harmonic-oscillator detector at r = 0 (beta0): quadrature variances and
// 1/4 + (g beta0/gamma^2)^2 sin^4(gamma t), gamma = sqrt(g^2 - beta0^2).
// DomainError unless |g| > |beta0|.
HoClosedForm ho_variances(double g, double beta0, double t);

// Harmonic-oscillator detector at r = +-g: sinh^2(beta0 t) / 2.
double ho_shifted_resonance_mean_n(double beta0, double t);

// beta_r [1 + (g2/2g1)^2]^{-1/2}; DomainError for g1 = 0.
double three_level_oscillation_frequency(double g1, double g2, double beta_r);

// (Delta1/2)^2 must exceed g1^2 n by this factor to call the regime dispersive.
inline constexpr double kDispersiveMargin = 10.0;

struct DispersiveShift {
    double delta;
    bool dispersive;  // (Delta1/2)^2 >> g1^2 n for the requested n
};

DispersiveShift dispersive_shift(double g1, double delta1, int n = 1);

}  // namespace dcemon::oracle
