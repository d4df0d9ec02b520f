#include "doctest.h"
#include "helpers.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "qres/resonances.hpp"

using namespace qres;
using qres::testing::max_abs;
using qres::testing::restrict_to;

namespace {

AtomFieldModel diamond(int atoms, int n_max = 3)
{
    return AtomFieldModel::diamond({0.0, 0.9, 1.1, 2.0}, {0.01, 0.01, 0.01, 0.01}, 1.0, atoms, n_max);
}

std::vector<std::vector<int>> as_vectors(const std::vector<ResonanceVector>& v)
{
    std::vector<std::vector<int>> out;
    for (const auto& r : v) out.push_back(r.k);
    return out;
}

// Independent enumeration: all |k_i| <= A, every nonempty subset sum within
// [-A, A], coprime, first nonzero entry positive.
std::vector<std::vector<int>> brute_force(int len, int atoms)
{
    std::vector<std::vector<int>> out;
    const int width = 2 * atoms + 1;
    int total = 1;
    for (int i = 0; i < len; ++i) total *= width;
    for (int code = 0; code < total; ++code) {
        std::vector<int> k(static_cast<std::size_t>(len));
        int c = code;
        for (int i = len - 1; i >= 0; --i) {
            k[static_cast<std::size_t>(i)] = c % width - atoms;
            c /= width;
        }
        if (std::all_of(k.begin(), k.end(), [](int x) { return x == 0; })) continue;
        const auto first = std::find_if(k.begin(), k.end(), [](int x) { return x != 0; });
        if (*first < 0) continue;
        int g = 0;
        for (int x : k) g = std::gcd(g, std::abs(x));
        if (g != 1) continue;
        bool ok = true;
        for (int mask = 1; mask < (1 << len) && ok; ++mask) {
            int s = 0;
            for (int i = 0; i < len; ++i)
                if (mask & (1 << i)) s += k[static_cast<std::size_t>(i)];
            ok = std::abs(s) <= atoms;
        }
        if (ok) out.push_back(k);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("single diamond atom has six resonance vectors")
{
    const auto v = as_vectors(enumerate_vectors(diamond(1)));
    const std::vector<std::vector<int>> expected{{0, 0, 1}, {0, 1, -1}, {0, 1, 0}, {1, -1, 0}, {1, 0, -1}, {1, 0, 0}};
    CHECK(v == expected);
}

TEST_CASE("two diamond atoms have 21 resonance vectors")
{
    const auto v = enumerate_vectors(diamond(2));
    CHECK(v.size() == 21);
    for (const auto& r : v) CHECK(min_atoms(r) <= 2);
}

TEST_CASE("enumeration agrees with brute force")
{
    for (int levels = 2; levels <= 4; ++levels) {
        for (int atoms = 1; atoms <= 3; ++atoms) {
            AtomFieldModel m;
            for (int j = 0; j < levels; ++j) {
                m.energies.push_back(j * 1.1);
                m.mu.push_back(j);
            }
            m.atoms = atoms;
            m.n_max = 2;
            m.omega = 1.0;
            CAPTURE(levels);
            CAPTURE(atoms);
            CHECK(as_vectors(enumerate_vectors(m)) == brute_force(levels - 1, atoms));
        }
    }
}

TEST_CASE("resonance frequencies and defects")
{
    const auto m = diamond(1);
    const ResonanceVector two_photon{{1, 0, 0}};
    CHECK(photon_exponent(two_photon, m) == 2);
    CHECK(resonance_defect(two_photon, m, 1.0) == doctest::Approx(0.0));
    CHECK(*solve_resonant_frequency(two_photon, m).omega_star == doctest::Approx(1.0));

    const ResonanceVector middle{{0, 1, 0}};
    CHECK(*solve_resonant_frequency(middle, m).omega_star == doctest::Approx(2.0 - 0.9));

    const ResonanceVector assisted{{0, 1, -1}};
    const auto f = solve_resonant_frequency(assisted, m);
    CHECK_FALSE(f.omega_star.has_value());
    CHECK(f.energy_defect == doctest::Approx(1.1 - 0.9));
    CHECK(resonance_defect(assisted, m, 0.3) == doctest::Approx(1.1 - 0.9));

    for (const auto& c : enumerate_resonances(diamond(2))) {
        if (c.omega_star) CHECK(std::abs(resonance_defect(c.vector, diamond(2), *c.omega_star)) <= 1e-12);
    }
}

TEST_CASE("classification of the single-atom diamond list")
{
    const auto m = diamond(1);
    CHECK(classify({{1, 0, 0}}, m) == ResonanceClass::multiphoton);
    CHECK(classify({{1, -1, 0}}, m) == ResonanceClass::explicit_);
    CHECK(classify({{1, 0, -1}}, m) == ResonanceClass::explicit_);
    CHECK(classify({{0, 1, 0}}, m) == ResonanceClass::explicit_);
    CHECK(classify({{0, 0, 1}}, m) == ResonanceClass::explicit_);
    CHECK(classify({{0, 1, -1}}, m) == ResonanceClass::photon_assisted);

    const auto m2 = diamond(2);
    CHECK(classify({{1, 1, 0}}, m2) == ResonanceClass::collective_multiphoton);
    CHECK(classify({{1, -1, -1}}, m2) == ResonanceClass::virtual_photon);
    CHECK(min_atoms({{1, -1, -1}}) == 2);
    CHECK(to_string(ResonanceClass::photon_assisted) == "photon-assisted");

    const auto tl = AtomFieldModel::two_level(0.0, 1.0, 0.1, 1.0, 1, 3);
    const auto rs = enumerate_resonances(tl);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].cls == ResonanceClass::explicit_);
    CHECK(*rs[0].omega_star == doctest::Approx(1.0));
}

TEST_CASE("photon-exponent-zero classes are invariant under energy shifts")
{
    auto m = diamond(2);
    auto shifted = m;
    for (auto& e : shifted.energies) e += 0.37;
    for (const auto& k : enumerate_vectors(m)) {
        if (photon_exponent(k, m) == 0) CHECK(classify(k, m) == classify(k, shifted));
    }
}

TEST_CASE("interaction operators conserve the excitation number")
{
    for (int atoms = 1; atoms <= 2; ++atoms) {
        const auto m = diamond(atoms, 4);
        const AtomFieldSpace space(m);
        const OperatorMatrix n = space.excitation_number(m.mu);
        for (const auto& k : enumerate_vectors(m)) {
            const auto op = build_interaction_operator(k, m, space);
            CAPTURE(k.str());
            CHECK(max_abs(restrict_to(commutator(n, op.op).matrix(), space.interior())) <= 1e-10);
            CHECK(op.vanishes == (min_atoms(k) > atoms));
            if (op.vanishes) {
                CHECK(op.op.max_abs() == 0.0);
            } else {
                CHECK(op.op.max_abs() > 0.0);
            }
        }
        CHECK(commutator(n, rwa_hamiltonian(m, space)).max_abs() <= 1e-12);
    }
}

TEST_CASE("two-photon operator matches a^2 S_+^{14}")
{
    const auto m = diamond(1, 4);
    const AtomFieldSpace space(m);
    const auto op = build_interaction_operator({{1, 0, 0}}, m, space);
    const Matrix expected = (space.S(1, 4) * space.a() * space.a()).matrix();
    CHECK(max_abs(op.op.matrix() - expected) == 0.0);
    // |1, n=2> -> |4, n=0> with amplitude sqrt(2)
    const Index from = space.basis_index({1, 0, 0, 0}, 2);
    const Index to = space.basis_index({0, 0, 0, 1}, 0);
    CHECK(std::abs(op.op.matrix()(to, from)) == doctest::Approx(std::sqrt(2.0)));

    const auto none = build_interaction_operator({{1, 1, 0}}, m, space);
    CHECK(none.vanishes);
    CHECK(none.op.max_abs() == 0.0);
}

TEST_CASE("model validation")
{
    CHECK_THROWS_AS(AtomFieldModel::two_level(1.0, 1.0, 0.1, 1.0, 1, 2), ModelError);
    CHECK_THROWS_AS(AtomFieldModel::two_level(0.0, 1.0, 0.1, 1.0, 0, 2), ModelError);
    CHECK_THROWS_AS(AtomFieldModel::two_level(0.0, 1.0, -0.1, 1.0, 1, 2), ModelError);
    AtomFieldModel bad = AtomFieldModel::two_level(0.0, 1.0, 0.1, 1.0, 1, 2);
    bad.mu = {0, 2};
    CHECK_THROWS_AS(bad.validate(), ModelError);
    CHECK_THROWS_AS(photon_exponent({{1, 0}}, diamond(1)), ModelError);
}
