#include "doctest.h"
#include "helpers.hpp"

#include "qres/algebra.hpp"

using namespace qres;
using qres::testing::max_abs;
using qres::testing::restrict_to;

TEST_CASE("operator matrix basics")
{
    const OperatorMatrix a = OperatorMatrix::diagonal(RealVector::LinSpaced(3, 1.0, 3.0));
    CHECK(a.is_hermitian());
    CHECK(commutator(a, a).max_abs() == 0.0);
    CHECK((2.0 * a).is_hermitian());
    CHECK_FALSE((cplx(0.0, 1.0) * a).is_hermitian());
    CHECK(kron(a, OperatorMatrix::identity(4)).dim() == 12);
    CHECK_THROWS_AS(a + OperatorMatrix::identity(2), DimensionError);
    CHECK_THROWS_AS(OperatorMatrix::zero(0), DimensionError);

    Matrix nonh = Matrix::Zero(2, 2);
    nonh(0, 1) = 1.0;
    CHECK_THROWS_AS(OperatorMatrix::make_hermitian(nonh), Error);
    CHECK(plus_hc(OperatorMatrix(nonh)).is_hermitian());
    CHECK(power(OperatorMatrix(nonh), 2).max_abs() == 0.0);
    CHECK(power(OperatorMatrix(nonh), 0).matrix().isIdentity());
}

TEST_CASE("structural functions")
{
    const auto spin1 = StructuralFunction::spin(1);
    CHECK(spin1(-0.5) == doctest::Approx(0.0));
    CHECK(spin1(0.5) == doctest::Approx(1.0));
    const auto b = StructuralFunction::boson();
    for (double z : {0.0, 1.0, 5.0}) CHECK(b.nabla(z) == doctest::Approx(-1.0));
    CHECK(b.nabla(2.0, 2) == 0.0);
    CHECK(b.nabla(3.0, 0) == 3.0);
    CHECK(StructuralFunction::euclidean().nabla(1.0) == 0.0);
    CHECK(StructuralFunction::spin(4).degree() == 2);
    // nabla^2 of z^2 is the constant 2
    CHECK(StructuralFunction({0.0, 0.0, 1.0}).nabla(7.0, 2) == doctest::Approx(2.0));
}

TEST_CASE("representation labels and dimensions")
{
    CHECK(Representation::boson(3).dim() == 4);
    CHECK(Representation::spin(3).dim() == 4);
    CHECK(Representation::euclid(5).dim() == 11);
    CHECK(Representation::symmetric_uN(4, 3).dim() == 20);
    CHECK(Representation::spin(2).labels() == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(Representation::euclid(1).labels() == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK_THROWS_AS(Representation::boson(-1), DimensionError);
    CHECK_THROWS_AS(Representation::spin(0), DimensionError);
    CHECK_THROWS(Representation::symmetric_uN(3, 2).labels());

    const auto rep = Representation::symmetric_uN(3, 2);
    const auto& occ = rep.occupations();
    CHECK(std::is_sorted(occ.begin(), occ.end()));
    CHECK(occ.front() == std::vector<int>{0, 0, 2});
}

TEST_CASE("ladder identities on every representation")
{
    std::vector<Representation> reps;
    for (int n = 0; n <= 10; ++n) reps.push_back(Representation::boson(n));
    for (int a = 1; a <= 6; ++a) reps.push_back(Representation::spin(a));
    for (int m = 0; m <= 10; ++m) reps.push_back(Representation::euclid(m));
    for (int a = 1; a <= 3; ++a) reps.push_back(Representation::symmetric_uN(2, a));

    for (const auto& rep : reps) {
        CAPTURE(to_string(rep.kind()));
        CAPTURE(rep.size_parameter());
        const Ladder l = build_ladder(rep);
        CHECK(max_abs(commutator(l.x0, l.xplus).matrix() - l.xplus.matrix()) <= 1e-12);
        CHECK(max_abs(commutator(l.x0, l.xminus).matrix() + l.xminus.matrix()) <= 1e-12);
        CHECK(max_abs(l.xminus.matrix() - l.xplus.matrix().adjoint()) == 0.0);

        // X+ X- = phi(X0) and [X+, X-] = phi(X0) - phi(X0 + 1), away from truncation edges
        const Matrix phi0 = l.phi_of_x0(0.0).matrix();
        const Matrix phi1 = l.phi_of_x0(1.0).matrix();
        const Matrix pp = (l.xplus * l.xminus).matrix();
        const Matrix comm = commutator(l.xplus, l.xminus).matrix();
        if (rep.kind() == RepKind::euclid) {
            // lowering from the bottom label is truncated
            RealVector mask = RealVector::Ones(rep.dim());
            mask(0) = 0.0;
            CHECK(max_abs(restrict_to(pp - phi0, mask)) <= 1e-12);
        } else {
            CHECK(max_abs(pp - phi0) <= 1e-12);
        }
        CHECK(max_abs(restrict_to(comm - (phi0 - phi1), l.interior)) <= 1e-12);

        for (double z : l.labels) CHECK(l.phi(z) >= -1e-12);
    }
}

TEST_CASE("spin commutators")
{
    const Ladder s = build_ladder(Representation::spin(1));
    CHECK(max_abs(commutator(s.xplus, s.xminus).matrix() - 2.0 * s.x0.matrix()) <= 1e-15);

    const Ladder b = build_ladder(Representation::boson(5));
    // [a, a^dag] = 1 except in the truncated top row/column
    const Matrix c = commutator(b.xminus, b.xplus).matrix();
    CHECK(max_abs(restrict_to(c - Matrix::Identity(6, 6), b.interior)) <= 1e-12);
    CHECK(std::abs(c(5, 5) - cplx(1.0)) > 1.0);
}

TEST_CASE("u(N) structure relations")
{
    for (int levels = 2; levels <= 4; ++levels) {
        for (int atoms = 1; atoms <= 3; ++atoms) {
            const auto rep = Representation::symmetric_uN(levels, atoms);
            std::vector<std::vector<OperatorMatrix>> s(static_cast<std::size_t>(levels + 1));
            for (int i = 1; i <= levels; ++i) {
                s[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(levels + 1));
                for (int j = 1; j <= levels; ++j) s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = collective_uN(rep, i, j);
            }
            auto S = [&](int i, int j) -> const OperatorMatrix& {
                return s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            };
            Matrix total = Matrix::Zero(rep.dim(), rep.dim());
            for (int i = 1; i <= levels; ++i) total += S(i, i).matrix();
            CHECK(max_abs(total - atoms * Matrix::Identity(rep.dim(), rep.dim())) <= 1e-12);

            for (int i = 1; i <= levels; ++i)
                for (int j = 1; j <= levels; ++j) {
                    CHECK(max_abs(S(i, j).matrix().adjoint() - S(j, i).matrix()) == 0.0);
                    for (int k = 1; k <= levels; ++k)
                        for (int m = 1; m <= levels; ++m) {
                            Matrix expected = Matrix::Zero(rep.dim(), rep.dim());
                            if (i == m) expected += S(k, j).matrix();
                            if (k == j) expected -= S(i, m).matrix();
                            CHECK(max_abs(commutator(S(i, j), S(k, m)).matrix() - expected) <= 1e-12);
                        }
                }
        }
    }
    CHECK_THROWS(collective_uN(Representation::symmetric_uN(3, 1), 0, 1));
    CHECK_THROWS(collective_uN(Representation::symmetric_uN(3, 1), 1, 4));
    CHECK_THROWS(collective_uN(Representation::spin(2), 1, 2));
}

TEST_CASE("u(2) raising operator equals collective S+ up to basis order")
{
    for (int atoms = 1; atoms <= 5; ++atoms) {
        const auto rep = Representation::symmetric_uN(2, atoms);
        const Ladder spin = build_ladder(Representation::spin(atoms));
        const Matrix s12 = collective_uN(rep, 1, 2).matrix();
        // occupation (n1, n2) sorted lexicographically has m = (n2 - n1)/2 descending
        const Index d = atoms + 1;
        Eigen::PermutationMatrix<Eigen::Dynamic> rev(d);
        for (Index i = 0; i < d; ++i) rev.indices()(i) = static_cast<int>(d - 1 - i);
        const Matrix permuted = rev * s12 * rev.transpose();
        CHECK(max_abs(permuted - spin.xplus.matrix()) <= 1e-12);
    }
}

TEST_CASE("composite space lifting")
{
    const CompositeSpace space({Representation::spin(2), Representation::boson(3)});
    CHECK(space.dim() == 12);
    const Ladder s = build_ladder(space.factor(0));
    const Ladder b = build_ladder(space.factor(1));
    const OperatorMatrix sz = space.lift(0, s.x0);
    const OperatorMatrix a = space.lift(1, b.xminus);
    CHECK(commutator(sz, a).max_abs() == 0.0);
    CHECK(commutator(space.lift(0, s.xplus), space.lift(1, b.xplus)).max_abs() == 0.0);
    CHECK(space.lift(0, OperatorMatrix::identity(3)).matrix().isIdentity());
    CHECK_THROWS_AS(space.lift(2, s.x0), DimensionError);
    CHECK_THROWS_AS(space.lift(1, s.x0), DimensionError);
    CHECK(space.flat_index({1, 2}) == 6);
    CHECK(space.unflatten(6) == std::vector<Index>{1, 2});
}
