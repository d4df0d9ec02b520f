#include <cmath>
#include <sstream>

#include "qres/effective.hpp"
#include "qres/resonances.hpp"

namespace qres {

namespace {

constexpr std::array<std::array<int, 2>, 4> kChannels{{{1, 2}, {1, 3}, {2, 4}, {3, 4}}};

}  // namespace

std::array<double, 4> DiamondParams::denominators() const
{
    std::array<double, 4> d{};
    for (std::size_t c = 0; c < 4; ++c) {
        d[c] = energies[static_cast<std::size_t>(kChannels[c][1] - 1)] -
               energies[static_cast<std::size_t>(kChannels[c][0] - 1)] - omega;
    }
    return d;
}

std::array<double, 4> DiamondParams::epsilons() const
{
    const auto d = denominators();
    std::array<double, 4> e{};
    for (std::size_t c = 0; c < 4; ++c) e[c] = g[c] == 0.0 ? 0.0 : g[c] / d[c];
    return e;
}

AtomFieldModel diamond_model(const DiamondParams& p)
{
    return AtomFieldModel::diamond({p.energies.begin(), p.energies.end()}, {p.g.begin(), p.g.end()}, p.omega,
                                   p.atoms, p.n_max);
}

std::array<RotationGenerator, 4> diamond_generators(const DiamondParams& p, const AtomFieldSpace& space)
{
    const auto eps = p.epsilons();
    std::array<RotationGenerator, 4> gens;
    for (std::size_t c = 0; c < 4; ++c) {
        const OperatorMatrix up = space.a() * space.S(kChannels[c][0], kChannels[c][1]);
        gens[c].T = up - up.adjoint();
        gens[c].epsilon = eps[c];
    }
    return gens;
}

OperatorMatrix diamond_exact_conjugation(const DiamondParams& p, const AtomFieldSpace& space)
{
    OperatorMatrix h = rwa_hamiltonian(diamond_model(p), space);
    for (const auto& gen : diamond_generators(p, space)) {
        if (gen.epsilon != 0.0) h = exact_conjugate(h, gen);
    }
    return h;
}

OperatorMatrix diamond_stark_shift(const DiamondParams& p, const AtomFieldSpace& space)
{
    const auto eps = p.epsilons();
    const OperatorMatrix id = OperatorMatrix::identity(space.dim());
    const OperatorMatrix& n = space.photon_number();
    OperatorMatrix phi = OperatorMatrix::zero(space.dim());
    for (std::size_t c = 0; c < 4; ++c) {
        const OperatorMatrix lo = space.S(kChannels[c][0], kChannels[c][0]);
        const OperatorMatrix hi = space.S(kChannels[c][1], kChannels[c][1]);
        phi += (p.g[c] * eps[c]) * (hi * (lo + id) + n * (hi - lo));
    }
    return phi.as_hermitian();
}

OperatorMatrix diamond_first_order(const DiamondParams& p, const AtomFieldSpace& space,
                                   std::vector<std::string>* warnings)
{
    const auto d = p.denominators();
    for (std::size_t c = 0; c < 4; ++c) {
        if (p.g[c] != 0.0 && std::abs(d[c]) < 10.0 * std::abs(p.g[c])) {
            std::ostringstream msg;
            msg.precision(6);
            msg << "channel " << kChannels[c][0] << "-" << kChannels[c][1]
                << " is in the explicit resonance regime: |E_j - E_i - omega| = " << std::abs(d[c])
                << " < 10 g = " << 10.0 * std::abs(p.g[c]);
            throw ResonantTermError(msg.str());
        }
    }
    const auto e = p.epsilons();
    std::vector<std::string> local;
    for (std::size_t c = 0; c < 4; ++c) {
        check_small_parameter("epsilon_" + std::to_string(c + 1), e[c], warnings ? *warnings : local);
    }

    AtomFieldModel free = diamond_model(p);
    for (auto& ch : free.channels) ch.coupling = 0.0;
    OperatorMatrix h = rwa_hamiltonian(free, space);
    h += diamond_stark_shift(p, space);

    const auto& g = p.g;
    const OperatorMatrix id = OperatorMatrix::identity(space.dim());
    const OperatorMatrix& n = space.photon_number();
    const OperatorMatrix& a = space.a();
    auto S = [&space](int i, int j) { return space.S(i, j); };

    // photon-assisted 2 <-> 3
    h += (g[1] * e[0]) * plus_hc(S(2, 3) * (S(1, 1) + n + id));
    h += (g[3] * e[2]) * plus_hc(S(2, 3) * (S(4, 4) - n));
    // two-photon 1 <-> 4
    h -= (g[2] * e[0] + g[3] * e[1]) * plus_hc(a * a * S(1, 4));
    // virtual-photon pairs
    h += (g[2] * e[0]) * plus_hc(S(2, 4) * S(2, 1));
    h += (g[2] * e[1]) * plus_hc(S(2, 4) * S(3, 1));
    h += (g[3] * e[0]) * plus_hc(S(1, 2) * S(4, 3));
    h += (g[3] * e[1]) * plus_hc(S(1, 3) * S(4, 3));
    return h.as_hermitian();
}

}  // namespace qres
