#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

#include "qres/effective.hpp"
#include "qres/resonances.hpp"

using namespace qres;
using qres::testing::max_abs;
using qres::testing::restrict_to;

namespace {

RotationGenerator counter_rotating_generator(const TwoSubsystem& d, double eps)
{
    const OperatorMatrix v = d.xplus() * d.yplus();
    return {v - v.adjoint(), eps};
}

}  // namespace

TEST_CASE("adjoint series against exact conjugation")
{
    const TwoSubsystem d = dicke_space(2, 6);
    const OperatorMatrix h = dicke_nonrwa(d, 1.3, 1.0, 0.05);
    const auto residual = [&](double eps) {
        const RotationGenerator gen = counter_rotating_generator(d, eps);
        return distance(bch_transform(h, gen, 6), exact_conjugate(h, gen));
    };
    const double r1 = residual(0.02);
    const double r2 = residual(0.01);
    CHECK(r1 / r2 == doctest::Approx(128.0).epsilon(0.2));

    const RotationGenerator zero = counter_rotating_generator(d, 0.0);
    CHECK(distance(bch_transform(h, zero, 3), h) == 0.0);
    CHECK(distance(exact_conjugate(h, zero), h) <= 1e-14);
    CHECK(bch_transform(h, counter_rotating_generator(d, 0.01), 2).is_hermitian());

    RotationGenerator bad{d.xplus(), 0.01};
    CHECK_THROWS(bch_transform(h, bad, 2));
    CHECK_THROWS_AS(bch_transform(h, counter_rotating_generator(d, 0.3), 2), RegimeError);
    std::vector<std::string> warnings;
    counter_rotating_generator(d, 0.1).validate(&warnings);
    CHECK(warnings.size() == 1);
}

TEST_CASE("first-order small rotation reproduces the structural-function shift")
{
    // H = Delta X0 + g (X+ + X-); the order-2 series with eta = g / Delta has
    // diagonal Delta X0 + eta g nabla phi(X0).
    for (int atoms : {1, 2, 3}) {
        const Ladder s = build_ladder(Representation::spin(atoms));
        const double delta = 1.0, g = 0.01, eta = g / delta;
        const OperatorMatrix h = delta * s.x0 + g * plus_hc(s.xplus);
        const RotationGenerator gen{s.xplus - s.xminus, eta};
        const Matrix out = bch_transform(h, gen, 2).matrix();

        RealVector expected(s.x0.dim());
        for (Index i = 0; i < expected.size(); ++i) {
            const double z = s.labels[static_cast<std::size_t>(i)];
            expected(i) = delta * z + eta * g * s.phi.nabla(z);
        }
        CHECK((out.diagonal().real() - expected).cwiseAbs().maxCoeff() <= 1e-14);
        // the linear coupling is gone; what remains off-diagonal is O(eta^2 g)
        const Matrix off = out - Matrix(out.diagonal().asDiagonal());
        CHECK(max_abs(off) <= 4.0 * eta * eta * g * atoms * atoms);
    }
}

TEST_CASE("eliminating the counter-rotating term")
{
    const TwoSubsystem d = dicke_space(1, 8);
    const double omega = 1.0, Omega = 1.0, g = 0.01;
    const OperatorMatrix h = dicke_nonrwa(d, omega, Omega, g);
    const auto r = eliminate_term(h, d, omega, Omega, {1, 1, true}, g, 0);
    CHECK(r.generator.epsilon == doctest::Approx(g / (omega + Omega)));
    CHECK(r.denominator == doctest::Approx(2.0));

    // the X+Y+ amplitude is now of second order
    const Matrix v = restrict_to((d.xplus() * d.yplus()).matrix(), d.interior_with_margin(2));
    const auto amplitude = [&](const OperatorMatrix& m) {
        return std::abs(v.cwiseProduct(m.matrix().conjugate()).sum()) / v.squaredNorm();
    };
    CHECK(amplitude(h) == doctest::Approx(g));
    CHECK(amplitude(r.hamiltonian) < 0.05 * g);

    const auto same = eliminate_term(h, d, omega, Omega, {1, 1, true}, 0.0, 0);
    CHECK(same.generator.epsilon == 0.0);
    CHECK(distance(same.hamiltonian, h) <= 1e-13);

    CHECK_THROWS_AS(eliminate_term(h, d, 1.0, 1.0, {1, 1, false}, g, 0), ResonantTermError);
    CHECK_THROWS_AS(eliminate_term(h, d, 1.0, 1.05, {1, 1, false}, g, 2), ResonantTermError);
    CHECK_NOTHROW(eliminate_term(h, d, 1.0, 1.2, {1, 1, false}, g, 2));
}

TEST_CASE("dispersive Dicke form")
{
    const TwoSubsystem d = dicke_space(1, 4);
    DickeRwaParams p{1.0, 1.5, 0.0};
    CHECK(distance(dicke_dispersive(d, p), p.detuning() * d.x0()) == 0.0);

    p.g = 0.01;
    const OperatorMatrix h = dicke_dispersive(d, p);
    CHECK(h.is_hermitian());
    CHECK(commutator(h, dicke_excitation_number(d)).max_abs() <= 1e-15);
    CHECK((h.matrix() - Matrix(h.matrix().diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

    // A=1, n=0: (g^2/Delta)(S_z - S_z^2) on |g,0> and |e,0>
    const double c = p.g * p.g / p.detuning();
    CHECK(h.matrix()(d.index_of(0, 0), d.index_of(0, 0)).real() == doctest::Approx(-0.5 * p.detuning() + c * (-0.5 - 0.25)));
    CHECK(h.matrix()(d.index_of(1, 0), d.index_of(1, 0)).real() == doctest::Approx(0.5 * p.detuning() + c * (0.5 - 0.25)));

    p.atom_frequency = p.field_frequency;
    CHECK_THROWS_AS(dicke_dispersive(d, p), ResonantTermError);
}

TEST_CASE("theta coefficients")
{
    const auto boson = StructuralFunction::boson();
    const auto euclid = StructuralFunction::euclidean();
    for (int atoms : {1, 2, 4}) {
        const auto spin = StructuralFunction::spin(atoms);
        for (double x : {-1.0, 0.0, 0.5, 2.0})
            for (double y : {0.0, 1.0, 3.0, 7.0}) {
                CHECK(theta_value(1, 0, spin, boson, x, y) == 1.0);
                for (int l = 0; l <= 3; ++l) {
                    CHECK(theta_value(1, l, spin, boson, x, y) == doctest::Approx(std::pow(2.0, l)));
                    CHECK(theta_value(2, l, spin, boson, x, y) == doctest::Approx(-std::pow(4.0, l + 1)));
                    CHECK(theta_value(1, l, spin, euclid, x, y) == doctest::Approx(std::pow(2.0, l)));
                    for (int k = 3; k <= 4; ++k) CHECK(std::abs(theta_value(k, l, spin, boson, x, y)) <= 1e-12);
                    for (int k = 2; k <= 4; ++k) CHECK(std::abs(theta_value(k, l, spin, euclid, x, y)) <= 1e-12);
                }
            }
    }
    // a cubic structural function supports fractional (k >= 3) terms
    const StructuralFunction cubic({0.0, 1.0, 0.5, 0.25});
    CHECK(std::abs(theta_value(3, 1, StructuralFunction::spin(3), cubic, 0.0, 4.0)) > 1e-6);

    const auto op = theta_coefficient(2, 1, StructuralFunction::spin(2), boson, {-1.0, 0.0, 1.0}, {0.0, 1.0});
    CHECK(op.dim() == 6);
    CHECK(op.is_hermitian());
    CHECK(op.matrix().diagonal().real().isApproxToConstant(-16.0));
    CHECK_THROWS(theta_value(0, 0, boson, boson, 0.0, 0.0));
}

TEST_CASE("series prefactor formula")
{
    const double g = 0.3, d = 0.2, e = 0.1;
    CHECK(series_prefactor(1, 0, g, d, e) == doctest::Approx(g));
    CHECK(series_prefactor(1, 2, g, d, e) == doctest::Approx(g * d * d * e * e / 2.0));
    CHECK(series_prefactor(2, 1, g, d, e) == doctest::Approx(g * d * d * e * e * e / 2.0));
    CHECK(series_prefactor(3, 2, g, d, e) == doctest::Approx(g * std::pow(-d, 4) * std::pow(e, 6) / (2.0 * 24.0)));
    CHECK(series_prefactor(2, 2, g, d, e) == doctest::Approx(-g * std::pow(d, 3) * std::pow(e, 4) / 6.0));
}

TEST_CASE("Dicke series reproduces the odd and even closed forms")
{
    const int atoms = 2;
    const TwoSubsystem d = dicke_space(atoms, 8);
    const double omega = 3.0, Omega = 1.0, g = 0.02;
    const auto s = nonrwa_series(d, omega, Omega, g, {3, 0, 1e-12});
    const double eps = g / (omega + Omega), delta = g / (2.0 * Omega);
    CHECK(s.epsilon == doctest::Approx(eps));
    CHECK(s.delta == doctest::Approx(delta));

    std::vector<std::pair<int, int>> kl;
    for (const auto& t : s.terms) kl.emplace_back(t.k, t.l);
    const std::vector<std::pair<int, int>> expected{{1, 0}, {1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 3}};
    CHECK(kl == expected);

    const OperatorMatrix& sz = d.x0();
    const OperatorMatrix& n = d.y0();
    const OperatorMatrix id = OperatorMatrix::identity(d.dim());
    const double cas = (1.0 + atoms / 2.0) * atoms / 2.0;
    const OperatorMatrix stark = omega * sz + Omega * n + (g * eps) * (sz * sz + (2.0 * n + id) * sz - cas * id);
    CHECK(distance(s.diagonal, stark) <= 1e-14);

    for (const auto& t : s.terms) {
        OperatorMatrix expected_op;
        if (t.k == 1) {
            expected_op = (g * std::pow(-2.0 * delta * eps, t.l) / std::tgamma(t.l + 1.0)) *
                          (power(d.yminus(), 2 * t.l + 1) * d.xplus());
        } else {
            const int two_m = t.l + 1;
            expected_op = (-g * eps * std::pow(4.0 * delta * eps, two_m) / std::tgamma(two_m + 1.0)) *
                          (power(d.yminus(), 2 * two_m) * power(d.xplus(), 2));
        }
        CAPTURE(t.k);
        CAPTURE(t.l);
        CHECK(distance(t.prefactor * t.operator_, expected_op) <= 1e-12 * expected_op.norm());
        CHECK(t.resonance_ratio() == doctest::Approx((2.0 * t.l + t.k) / t.k));
    }
    CHECK(s.assemble().is_hermitian());

    CHECK(nonrwa_series(d, omega, Omega, 0.0).terms.empty());
    CHECK_THROWS_AS(nonrwa_series(d, 0.9, 1.0, g), RegimeError);
    CHECK_THROWS_AS(nonrwa_series(d, 3.0, 1.0, 0.5), RegimeError);
    CHECK_FALSE(nonrwa_series(d, 3.0, 1.0, 0.15).warnings.empty());

    // a single atom has no S_+^2 terms
    const auto single = nonrwa_series(dicke_space(1, 8), omega, Omega, g, {2, 0, 1e-12});
    for (const auto& t : single.terms) CHECK(t.k == 1);
}

TEST_CASE("secular term selection near a resonance")
{
    const TwoSubsystem d = dicke_space(2, 10);
    const double Omega = 1.0, omega = 3.0;
    const auto s = nonrwa_series(d, omega, Omega, 0.02, {3, 0, 1e-12});
    int secular = 0;
    for (const auto& t : s.terms) {
        const double detuning = std::abs(t.k * omega - (2.0 * t.l + t.k) * Omega);
        if (detuning < 0.1 * Omega) {
            ++secular;
            CHECK(t.k == 1);
            CHECK(t.l == 1);
        }
    }
    CHECK(secular == 1);
}

TEST_CASE("classical-field series keeps only odd terms")
{
    const TwoSubsystem e = dicke_euclid_space(1, 10);
    const double omega = 3.0, Omega = 1.0, g = 0.02;
    const auto s = nonrwa_series(e, omega, Omega, g, {3, 0, 1e-12});
    REQUIRE(s.terms.size() == 4);
    const double eps = g / (omega + Omega), delta = g / (2.0 * Omega);
    for (const auto& t : s.terms) {
        CHECK(t.k == 1);
        const OperatorMatrix expected = (g * std::pow(-2.0 * delta * eps, t.l) / std::tgamma(t.l + 1.0)) *
                                        (power(e.yminus(), 2 * t.l + 1) * e.xplus());
        CHECK(distance(t.prefactor * t.operator_, expected) <= 1e-12 * expected.norm());
    }
    const OperatorMatrix diag = omega * e.x0() + Omega * e.y0() + (2.0 * g * eps) * e.x0();
    CHECK(distance(s.diagonal, diag) <= 1e-14);
}

TEST_CASE("integral of motion N^(kl)")
{
    const TwoSubsystem d = dicke_space(2, 6);
    const auto n0 = integral_of_motion_Nkl(1, 1, d, 0.0);
    CHECK(distance(n0.op, 3.0 * d.x0() + d.y0()) == 0.0);
    const auto n1 = integral_of_motion_Nkl(2, 1, d, 0.01);
    CHECK(n1.op.is_hermitian());
    CHECK(n1.op.hermiticity_defect() == 0.0);
    CHECK_THROWS(integral_of_motion_Nkl(1, 0, d, 0.01));
    CHECK_THROWS(integral_of_motion_Nkl(2, 2, d, 0.01));
    CHECK_THROWS(integral_of_motion_Nkl(3, 1, d, 0.01));
}

TEST_CASE("diamond first-order form")
{
    DiamondParams p;
    p.energies = {0.0, 0.7, 1.4, 2.3};
    p.omega = 0.2;
    p.atoms = 1;
    p.n_max = 4;
    const AtomFieldSpace space(diamond_model(p));

    // zero couplings give the free Hamiltonian
    const OperatorMatrix free = rwa_hamiltonian(diamond_model(p), space);
    CHECK(distance(diamond_first_order(p, space), free) == 0.0);

    p.g = {0.01, 0.011, 0.009, 0.012};
    const AtomFieldSpace sp(diamond_model(p));
    const OperatorMatrix h = diamond_first_order(p, sp);
    CHECK(h.is_hermitian());
    const auto eps = p.epsilons();
    CHECK(eps[0] == doctest::Approx(0.01 / 0.5));

    // one atom, vacuum: <3,0| H |2,0> = g_2 eps_1 (S^11 + 1) + g_4 eps_3 * 0 = g_2 eps_1
    const Index two = sp.basis_index({0, 1, 0, 0}, 0);
    const Index three = sp.basis_index({0, 0, 1, 0}, 0);
    CHECK(h.matrix()(three, two).real() == doctest::Approx(p.g[1] * eps[0]));
    // with one photon the S^44 - n factor contributes -g_4 eps_3
    const Index two1 = sp.basis_index({0, 1, 0, 0}, 1);
    const Index three1 = sp.basis_index({0, 0, 1, 0}, 1);
    CHECK(h.matrix()(three1, two1).real() == doctest::Approx(p.g[1] * eps[0] * 2.0 - p.g[3] * eps[2]));

    // exact conjugation minus the closed form is g eps^2: second order in units of the coupling
    const auto residual = [&](double scale) {
        DiamondParams q = p;
        for (auto& g : q.g) g *= scale;
        const AtomFieldSpace s(diamond_model(q));
        RealVector mask(s.dim());
        for (Index i = 0; i < s.dim(); ++i) mask(i) = (i % (q.n_max + 1)) <= q.n_max - 2 ? 1.0 : 0.0;
        const Matrix r = diamond_exact_conjugation(q, s).matrix() - diamond_first_order(q, s).matrix();
        return restrict_to(r, mask).norm();
    };
    const double raw = residual(1.0) / residual(0.5);
    CHECK(raw == doctest::Approx(8.0).epsilon(0.2));
    CHECK(raw / 2.0 == doctest::Approx(4.0).epsilon(0.2));

    DiamondParams res = p;
    res.omega = 0.7 - 0.05;  // E2 - E1 - omega = 0.05 < 10 g
    CHECK_THROWS_AS(diamond_first_order(res, AtomFieldSpace(diamond_model(res))), ResonantTermError);
}
