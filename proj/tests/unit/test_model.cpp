#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "dcemon/errors.hpp"
#include "dcemon/model.hpp"
#include "helpers.hpp"

using namespace dcemon;
using doctest::Approx;
using Eigen::MatrixXcd;

namespace {

double max_abs(const MatrixXcd& m)
{
    return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

Eigen::VectorXd sorted_eigenvalues(const MatrixXcd& m)
{
    Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

}  // namespace

TEST_CASE("modulation derived quantities")
{
    auto mod = unit::modulation(1e-3, 2e-3);
    CHECK(mod.eta() == Approx(2.004));
    CHECK(mod.beta0() == Approx(2.5e-4));
    CHECK(mod.beta_r() == Approx(1.002 * 2.5e-4));
    CHECK(mod.chi(0.0) == Approx(1e-3 * mod.eta() / 4.0));

    // exact and approximate forms differ at relative order epsilon
    auto exact = mod;
    exact.chi_form = ChiForm::exact;
    const double scale = mod.epsilon * mod.eta() / 4.0;
    for (double t : {0.1, 0.7, 3.3, 10.0})
        CHECK(std::abs(exact.chi(t) - mod.chi(t)) / scale < 5 * mod.epsilon);
}

TEST_CASE("modulation strength bounds")
{
    CHECK_THROWS_AS(unit::modulation(0.5).validate(), PhysicsError);
    CHECK(unit::modulation(1e-3).validate().empty());
    CHECK_FALSE(unit::modulation(0.05).validate().empty());
}

TEST_CASE("static empty cavity spectrum")
{
    const auto det = DetectorSpec::empty_cavity();
    const auto space = make_space(det, 6);
    const auto h = lab_hamiltonian(det, unit::modulation(0.0), space);
    const auto ev = sorted_eigenvalues(MatrixXcd(h.at(0.3).matrix()));
    for (int n = 0; n <= 6; ++n)
        CHECK(ev[n] == Approx(double(n)));
}

TEST_CASE("assembled Hamiltonians are Hermitian at random times")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> when(0.0, 1e4);
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.01, 0.014}, {0.002, 0.0});
    const auto mod = unit::modulation(1e-3, 3e-3);
    const auto space = make_space(det, 15);
    const auto lab = lab_hamiltonian(det, mod, space);
    const auto cr = interaction_hamiltonian(det, mod, space, true);
    auto two = DetectorSpec::ladder_from_detunings(1.0, {0.01}, {0.08});
    const auto rot = two_level_rotated_hamiltonian(two, mod, make_space(two, 15));
    for (int k = 0; k < 10; ++k) {
        const double t = when(rng);
        CHECK(lab.at(t).hermiticity_defect() < 1e-12);
        CHECK(cr.at(t).hermiticity_defect() < 1e-12);
        CHECK(rot.at(t).hermiticity_defect() < 1e-12);
    }
    CHECK(rwa_hamiltonian(det, mod, space).hermiticity_defect() < 1e-12);
}

TEST_CASE("empty-cavity RWA Hamiltonian is the squeeze generator")
{
    const auto det = DetectorSpec::empty_cavity();
    const auto space = make_space(det, 8);
    const auto mod = unit::modulation(1e-3);
    const MatrixXcd h(rwa_hamiltonian(det, mod, space).matrix());
    const MatrixXcd ad(build_creation(space).matrix());
    const MatrixXcd a(build_annihilation(space).matrix());
    const MatrixXcd expected = cplx(0.0, mod.beta0()) * (ad * ad - a * a);
    CHECK(max_abs(h - expected) < 1e-15);
}

TEST_CASE("resonant dressed spectra")
{
    const double g = 0.01;
    SUBCASE("two-level doublet")
    {
        const auto det = DetectorSpec::ladder_from_detunings(1.0, {g});
        const auto space = make_space(det, 2);
        const MatrixXcd h(rwa_hamiltonian(det, unit::modulation(0.0), space).matrix());
        MatrixXcd block(2, 2);
        const Index idx[2] = {space.index(1, 1), space.index(2, 0)};
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                block(i, k) = h(idx[i], idx[k]);
        const auto ev = sorted_eigenvalues(block);
        CHECK(ev[0] == Approx(-g));
        CHECK(ev[1] == Approx(g));
    }
    SUBCASE("three-level, two excitations")
    {
        const auto det = DetectorSpec::ladder_from_detunings(1.0, {g, g});
        const auto space = make_space(det, 2);
        const MatrixXcd h(rwa_hamiltonian(det, unit::modulation(0.0), space).matrix());
        MatrixXcd block(3, 3);
        const Index idx[3] = {space.index(1, 2), space.index(2, 1), space.index(3, 0)};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                block(i, k) = h(idx[i], idx[k]);
        const auto ev = sorted_eigenvalues(block);
        CHECK(ev[0] == Approx(-g * std::sqrt(3.0)));
        CHECK(std::abs(ev[1]) < 1e-15);
        CHECK(ev[2] == Approx(g * std::sqrt(3.0)));
    }
}

TEST_CASE("strong-modulation effective Hamiltonian")
{
    const auto mod = unit::modulation(1e-3);
    SUBCASE("decoupled limit is the empty-cavity generator")
    {
        const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.0, 0.0});
        const auto space = make_space(det, 10);
        const MatrixXcd diff = MatrixXcd(effective_strong_modulation_hamiltonian(det, mod, space).matrix())
                               - MatrixXcd(rwa_hamiltonian(det, mod, space).matrix());
        CHECK(max_abs(diff) < 1e-15);
    }
    SUBCASE("two levels carry no sigma_13 term")
    {
        const double g = 0.2 * 2 * mod.beta0();
        const auto det = DetectorSpec::ladder_from_detunings(1.0, {g});
        const auto space = make_space(det, 10);
        const MatrixXcd h(effective_strong_modulation_hamiltonian(det, mod, space).matrix());
        for (Index i = 0; i < h.rows(); ++i)
            for (Index k = 0; k < h.cols(); ++k)
                if (space.level_photons(i).first != space.level_photons(k).first)
                    CHECK(std::abs(h(i, k)) == 0.0);
    }
    SUBCASE("sigma_13 coefficient is beta0 xi1 xi2")
    {
        const double xi = 0.2, g = xi * 2 * mod.beta0();
        const auto det = DetectorSpec::ladder_from_detunings(1.0, {g, g});
        const auto space = make_space(det, 10);
        const MatrixXcd h(effective_strong_modulation_hamiltonian(det, mod, space).matrix());
        CHECK(std::abs(h(space.index(1, 3), space.index(3, 3))) == Approx(mod.beta0() * xi * xi));
    }
    SUBCASE("transformed RWA Hamiltonian agrees to third order in xi")
    {
        auto deviation = [&](double xi) {
            const double g = xi * 2 * mod.beta0();
            const auto det = DetectorSpec::ladder_from_detunings(1.0, {g, g});
            const auto space = make_space(det, 40);
            const MatrixXcd h(rwa_hamiltonian(det, mod, space).matrix());
            const MatrixXcd s(strong_modulation_generator(det, mod, space).matrix());
            const MatrixXcd u = (cplx(0.0, -1.0) * s).exp();
            const MatrixXcd d = u.adjoint() * h * u
                                - MatrixXcd(effective_strong_modulation_hamiltonian(det, mod, space).matrix());
            double worst = 0.0;
            for (Index i = 0; i < d.rows(); ++i)
                for (Index k = 0; k < d.cols(); ++k)
                    if (space.level_photons(i).second <= 10 && space.level_photons(k).second <= 10)
                        worst = std::max(worst, std::abs(d(i, k)));
            return worst / mod.beta0();
        };
        const double d1 = deviation(0.1), d2 = deviation(0.05);
        CHECK(d1 < 0.05);
        CHECK(d1 / d2 == Approx(8.0).epsilon(0.1));
    }
    SUBCASE("validity cap")
    {
        const auto det = DetectorSpec::ladder_from_detunings(1.0, {0.01});
        CHECK_THROWS_AS(effective_strong_modulation_hamiltonian(det, mod, make_space(det, 5)), PhysicsError);
    }
}

TEST_CASE("rotated two-level frame")
{
    const double g = 0.01;
    const auto det = DetectorSpec::ladder_from_detunings(1.0, {g}, {0.08});
    const auto space = make_space(det, 12);
    SUBCASE("coincides with the RWA frame at r = 0")
    {
        const auto mod = unit::modulation(3e-4);
        const auto rot = two_level_rotated_hamiltonian(det, mod, space);
        const MatrixXcd rwa(rwa_hamiltonian(det, mod, space).matrix());
        for (double t : {0.0, 17.0, 1234.5})
            CHECK(max_abs(MatrixXcd(rot.at(t).matrix()) - rwa) < 1e-15);
    }
    SUBCASE("unmodulated ground state")
    {
        const auto rot = two_level_rotated_hamiltonian(det, unit::modulation(0.0), space);
        const Vector v = rot.at(0.0).apply(StateVector::basis(space, 1, 0).amplitudes());
        CHECK(v.norm() < 1e-15);
    }
    SUBCASE("frame map is unitary and identity at t = 0")
    {
        const auto s = unit::random_state(space, 3);
        CHECK((two_level_to_interaction_frame(s, 0.01, 0.0).amplitudes() - s.amplitudes()).norm() < 1e-15);
        CHECK(two_level_to_interaction_frame(s, 0.01, 42.0).norm() == Approx(1.0));
    }
}

TEST_CASE("Dicke network maps to a ladder")
{
    const double g = 0.01;
    SUBCASE("coupling law")
    {
        const auto one = dicke_to_ladder(DetectorSpec::dicke_network(1, 1.0, g));
        CHECK(one.couplings.size() == 1);
        CHECK(one.couplings[0] == Approx(g));
        const auto two = dicke_to_ladder(DetectorSpec::dicke_network(2, 1.0, g));
        REQUIRE(two.couplings.size() == 2);
        CHECK(two.couplings[0] == Approx(g * std::sqrt(2.0)));
        CHECK(two.couplings[1] == Approx(g * std::sqrt(2.0)));
        CHECK(two.energies == std::vector<double>{0.0, 1.0, 2.0});
        const auto three = dicke_to_ladder(DetectorSpec::dicke_network(3, 1.0, g));
        REQUIRE(three.couplings.size() == 3);
        CHECK(three.couplings[0] == Approx(g * std::sqrt(3.0)));
        CHECK(three.couplings[1] == Approx(2 * g));
        CHECK(three.couplings[2] == Approx(g * std::sqrt(3.0)));
    }
    SUBCASE("collective operators on symmetric states")
    {
        for (int atoms : {2, 3}) {
            const int n_max = 2;
            const Eigen::MatrixXd e(dicke_symmetric_embedding(atoms, n_max));
            const MatrixXcd sz(collective_sz(atoms, n_max).matrix());
            const MatrixXcd sm(collective_lowering(atoms, n_max).matrix());
            const HilbertSpace ladder(n_max, atoms + 1);
            const int levels = atoms + 1;
            for (int j = 1; j <= levels; ++j) {
                const Eigen::VectorXcd v = e.col(ladder.index(j, 1)).cast<cplx>();
                CHECK((sz * v - double(j - 1) * v).norm() < 1e-12);
                if (j > 1) {
                    const Eigen::VectorXcd lower = e.col(ladder.index(j - 1, 1)).cast<cplx>();
                    const double c = std::sqrt(double((j - 1) * (levels - j + 1)));
                    CHECK((sm * v - c * lower).norm() < 1e-12);
                }
            }
        }
    }
    SUBCASE("symmetric sector reproduces the ladder Hamiltonian")
    {
        for (int atoms : {2, 3}) {
            const auto network = DetectorSpec::dicke_network(atoms, 1.0, g);
            const auto ladder = dicke_to_ladder(network);
            const int n_max = 6;
            const auto mod = unit::modulation(0.0);
            const MatrixXcd hn(dicke_network_hamiltonian(network, mod, n_max).matrix());
            const MatrixXcd hl(rwa_hamiltonian(ladder, mod, make_space(ladder, n_max)).matrix());
            const MatrixXcd e = Eigen::MatrixXd(dicke_symmetric_embedding(atoms, n_max)).cast<cplx>();
            CHECK(max_abs(hn * e - e * hl) < 1e-12);
            CHECK(max_abs(e.adjoint() * e - MatrixXcd::Identity(e.cols(), e.cols())) < 1e-12);
        }
    }
    SUBCASE("atom count cap")
    {
        CHECK_THROWS_AS(dicke_network_hamiltonian(DetectorSpec::dicke_network(5, 1.0, g), unit::modulation(0.0), 2),
                        PhysicsError);
    }
}

TEST_CASE("detector validation")
{
    CHECK_THROWS_AS(DetectorSpec::ladder({0.0, 1.0, 0.5}, {0.01, 0.01}).validate(), PhysicsError);
    CHECK_THROWS_AS(DetectorSpec::ladder({0.0, 1.0}, {0.01, 0.01}).validate(), PhysicsError);
    CHECK_NOTHROW(DetectorSpec::ladder({0.0, 1.0}, {0.01}).validate());
    const auto lad = as_ladder(DetectorSpec::ladder_from_detunings(1.0, {0.01, 0.02}, {0.1, -0.2}), 0);
    const auto d = lad.detunings(1.0);
    CHECK(d[0] == Approx(0.1));
    CHECK(d[1] == Approx(-0.2));
}
