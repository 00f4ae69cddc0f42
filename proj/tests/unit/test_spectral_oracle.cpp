#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "dcemon/errors.hpp"
#include "dcemon/oracle.hpp"
#include "dcemon/spectral.hpp"
#include "helpers.hpp"
#include "support/oracles.hpp"

using namespace dcemon;
using doctest::Approx;

namespace {

DetectorSpec harmonic_ladder(int levels, double g)
{
    std::vector<double> couplings;
    for (int l = 1; l < levels; ++l)
        couplings.push_back(g * std::sqrt(double(l)));
    return DetectorSpec::ladder_from_detunings(1.0, couplings);
}

}  // namespace

TEST_CASE("Jaynes-Cummings eigensystem")
{
    const double g = 0.01;
    const auto res = jc_eigensystem(g, 0.0, 1);
    CHECK(res.lambda_plus == Approx(g));
    CHECK(res.lambda_minus == Approx(-g));
    CHECK(res.theta == Approx(std::numbers::pi / 4));

    const auto det = jc_eigensystem(g, 8 * g, 1);
    CHECK(det.z == Approx(g * std::sqrt(17.0)));
    CHECK(det.lambda_plus == Approx(-4 * g + g * std::sqrt(17.0)));
    CHECK(det.lambda_minus == Approx(-4 * g - g * std::sqrt(17.0)));
    const Ladder lad{{0.0, 1.0 - 8 * g}, {g}};
    const auto block = excitation_block(lad, 1.0, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block.matrix);
    CHECK(solver.eigenvalues()[0] == Approx(det.lambda_minus));
    CHECK(solver.eigenvalues()[1] == Approx(det.lambda_plus));

    // dispersive ladder spacing 2|delta|
    const double big = 400 * g;
    const double delta = g * g / big;
    for (int n = 1; n <= 3; ++n) {
        const auto lo = jc_eigensystem(g, big, n), hi = jc_eigensystem(g, big, n + 2);
        CHECK(std::abs(hi.lambda_plus - lo.lambda_plus) == Approx(2 * delta).epsilon(0.01));
        CHECK(std::abs(hi.lambda_minus - lo.lambda_minus) == Approx(2 * delta).epsilon(0.01));
    }
}

TEST_CASE("three-level eigensystem")
{
    const double g = 0.01;
    const auto one = three_level_eigensystem(g, 0.5 * g, 1);
    CHECK(one.lambda == Approx(g));
    CHECK(one.phi_plus[0] == Approx(1 / std::sqrt(2.0)));
    CHECK(std::abs(one.phi_plus[1]) == Approx(1 / std::sqrt(2.0)));
    CHECK(three_level_eigensystem(g, g, 2).lambda == Approx(g * std::sqrt(3.0)));
}

TEST_CASE("dressed states satisfy the eigen-residual bound")
{
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.01, 0.013, 0.007}, {0.002, -0.001, 0.0});
    const auto lad = as_ladder(det, 0);
    for (int m = 0; m <= 20; ++m) {
        const auto block = excitation_block(lad, 1.0, m);
        for (const auto& s : block_eigenstates(lad, 1.0, m)) {
            CHECK(eigen_residual(block, s) < 1e-12);
            double norm = 0.0;
            for (double a : s.amplitudes)
                norm += a * a;
            CHECK(norm == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("null eigenstates")
{
    const double g = 0.01;
    SUBCASE("three levels, two excitations")
    {
        const auto s = null_eigenstate(DetectorSpec::ladder_from_detunings(1.0, {g, g}), 2);
        REQUIRE(s);
        REQUIRE(s->basis.size() == 3);
        CHECK(s->basis[0] == BareLabel{1, 2});
        CHECK(s->amplitudes[0] == Approx(1 / std::sqrt(3.0)));
        CHECK(std::abs(s->amplitudes[1]) < 1e-15);
        CHECK(s->amplitudes[2] == Approx(-std::sqrt(2.0 / 3.0)));
    }
    SUBCASE("vacuum of a two-level ladder")
    {
        const auto s = null_eigenstate(DetectorSpec::ladder_from_detunings(1.0, {g}), 0);
        REQUIRE(s);
        CHECK(s->eigenvalue == 0.0);
        CHECK(s->basis == std::vector<BareLabel>{{1, 0}});
    }
    SUBCASE("even ladders create at most N-2 photons")
    {
        CHECK_FALSE(null_eigenstate(harmonic_ladder(4, g), 3));
        for (int levels : {2, 4, 6}) {
            const auto det = harmonic_ladder(levels, g);
            const auto lad = as_ladder(det, 0);
            for (int m = 0; m <= 12; ++m) {
                const int brute = testsupport::nullity(excitation_block(lad, 1.0, m).matrix);
                CHECK((brute > 0) == (m <= levels - 2 && m % 2 == 0));
                CHECK(bool(null_eigenstate(det, m)) == (brute > 0));
            }
        }
    }
    SUBCASE("orthogonal to the nonzero branches")
    {
        for (int levels : {3, 5}) {
            const auto det = harmonic_ladder(levels, g);
            const auto lad = as_ladder(det, 0);
            for (int m = 0; m <= 12; m += 2) {
                const auto null = null_eigenstate(det, m);
                REQUIRE(null);
                for (const auto& s : block_eigenstates(lad, 1.0, m)) {
                    if (std::abs(s.eigenvalue) < 1e-12)
                        continue;
                    double overlap = 0.0;
                    for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
                        overlap += s.amplitudes[i] * null->amplitudes[i];
                    CHECK(std::abs(overlap) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("dressed coupling matrix")
{
    const double g = 1e-2;
    const auto mod = unit::modulation(1e-3);
    SUBCASE("selection rule")
    {
        const auto c = dressed_coupling_matrix(harmonic_ladder(3, g), mod, 6, 10);
        for (const auto& e : c.entries)
            CHECK(std::abs(c.states[e.row].m - c.states[e.col].m) == 2);
    }
    SUBCASE("odd ladder null chain is resonant, other branches are not")
    {
        const auto c = dressed_coupling_matrix(harmonic_ladder(3, g), mod, 8, 12);
        int null_links = 0;
        for (const auto& e : c.entries) {
            const auto& a = c.states[e.row];
            const auto& b = c.states[e.col];
            if (a.k == 0 && b.k == 0) {
                ++null_links;
                CHECK(e.resonant);
            } else if (a.k != 0 && b.k != 0) {
                CHECK_FALSE(e.resonant);
            }
        }
        CHECK(null_links > 0);
    }
    SUBCASE("cap must fit the cutoff")
    {
        CHECK_THROWS_AS(dressed_coupling_matrix(harmonic_ladder(3, g), mod, 12, 8), PhysicsError);
    }
}

TEST_CASE("resonance catalog")
{
    const double g = 1e-2;
    const auto mod = unit::modulation(1e-3);
    auto has = [](const std::vector<ResonanceEntry>& entries, double r) {
        for (const auto& e : entries)
            if (std::abs(e.r - r) < 1e-12)
                return true;
        return false;
    };
    const auto ho = resonance_catalog(DetectorSpec::harmonic_oscillator(g, 1.0), mod);
    CHECK(has(ho, g));
    CHECK(has(ho, -g));
    const auto three = resonance_catalog(DetectorSpec::ladder_from_detunings(1.0, {g, g}), mod);
    CHECK(has(three, g * std::sqrt(3.0) / 2));
    CHECK(has(three, -g * std::sqrt(3.0) / 2));
    for (const auto& e : three)
        if (std::abs(std::abs(e.r) - g * std::sqrt(3.0) / 2) < 1e-12) {
            CHECK(e.regime.kind == RegimeKind::two_state_oscillation);
            CHECK(e.regime.frequency == Approx(oracle::three_level_oscillation_frequency(g, g, (1 + e.r) * 2.5e-4)));
        }
    const double y = -1e-4;
    CHECK(2 * two_level_resonance_shift(g, 0.0, +1, y) == Approx(g * std::sqrt(2.0) + y));
    CHECK(2 * two_level_resonance_shift(g, 0.0, -1, y) == Approx(-g * std::sqrt(2.0) + y));
}

TEST_CASE("empty-cavity closed forms")
{
    const double beta0 = 2.5e-4;
    CHECK(oracle::empty_cavity_mean_n(beta0, 0.0) == 0.0);
    CHECK(oracle::empty_cavity_mean_n(beta0, 1.0 / (2 * beta0)) == Approx(std::pow(std::sinh(1.0), 2)));
    const double late = 6.0 / beta0;
    CHECK(oracle::empty_cavity_mean_n(beta0, late) == Approx(std::exp(4 * beta0 * late) / 4).epsilon(1e-9));
    const auto q = oracle::empty_cavity_quadratures(beta0, 100.0);
    CHECK(q.plus * q.minus == Approx(0.25));
    CHECK(oracle::empty_cavity_mandel_q(1.0) == Approx(3.0));
    CHECK(oracle::empty_cavity_mandel_q(1e-12) == Approx(1.0));
    CHECK(oracle::thermal_mandel_q(2.5) == Approx(2.5));
    CHECK_THROWS_AS(oracle::empty_cavity_mandel_q(0.0), DomainError);
}

TEST_CASE("oscillator detector closed forms")
{
    const double g = 1e-2, beta0 = 2.5e-4;
    const auto start = oracle::ho_variances(g, beta0, 0.0);
    CHECK(start.xvar_plus == Approx(0.5));
    CHECK(start.xvar_minus == Approx(0.5));
    CHECK(start.uncertainty_product == Approx(0.25));
    const double gamma = oracle::ho_gamma(g, beta0);
    CHECK(gamma == Approx(std::sqrt(g * g - beta0 * beta0)));
    CHECK(oracle::ho_variances(g, beta0, std::numbers::pi / gamma).uncertainty_product == Approx(0.25));
    const auto mid = oracle::ho_variances(g, beta0, 0.5 * std::numbers::pi / gamma);
    CHECK(mid.uncertainty_product > 0.25);
    CHECK_THROWS_AS(oracle::ho_variances(beta0, beta0, 1.0), DomainError);
    CHECK_THROWS_AS(oracle::ho_variances(0.5 * beta0, beta0, 1.0), DomainError);

    CHECK(oracle::ho_shifted_resonance_mean_n(beta0, 0.0) == 0.0);
    CHECK(oracle::ho_shifted_resonance_mean_n(beta0, 1.0 / beta0) == Approx(std::pow(std::sinh(1.0), 2) / 2));
}

TEST_CASE("validity predicates are total")
{
    const double inf = std::numeric_limits<double>::infinity();
    for (double g : {0.0, -1.0, 1e-300, 1e300, inf, -inf})
        for (double b : {0.0, 1.0, -1e-3, inf})
            CHECK_NOTHROW(oracle::ho_domain(g, b));
    CHECK(oracle::ho_domain(1e-2, 2.5e-4).ok);
    CHECK_FALSE(oracle::ho_domain(1e-4, 2.5e-4).ok);
}

TEST_CASE("three-level oscillation frequency")
{
    const double beta = 2.5e-4, g = 1e-2;
    CHECK(oracle::three_level_oscillation_frequency(g, 0.0, beta) == Approx(beta));
    CHECK(oracle::three_level_oscillation_frequency(g, g, beta) == Approx(beta / std::sqrt(1.25)));
    double previous = beta;
    for (double ratio : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double w = oracle::three_level_oscillation_frequency(g, ratio * g, beta);
        CHECK(w < previous);
        previous = w;
    }
    CHECK_THROWS_AS(oracle::three_level_oscillation_frequency(0.0, g, beta), DomainError);
}

TEST_CASE("dispersive shift")
{
    const double g = 1e-2;
    const auto d = oracle::dispersive_shift(g, 8 * g, 1);
    CHECK(d.delta == Approx(g / 8));
    CHECK(d.dispersive);
    CHECK(oracle::dispersive_shift(g, -8 * g, 1).delta < 0);
    CHECK_FALSE(oracle::dispersive_shift(g, 8 * g, 100).dispersive);
    CHECK_THROWS_AS(oracle::dispersive_shift(g, 0.0, 1), DomainError);
}
