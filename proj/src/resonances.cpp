#include "qres/resonances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qres {

bool AtomFieldModel::has_channel(int from, int to) const
{
    return std::any_of(channels.begin(), channels.end(),
                       [&](const DipoleChannel& c) { return c.from == from && c.to == to; });
}

void AtomFieldModel::validate() const
{
    const int n = levels();
    if (n < 2) throw ModelError("model needs at least two atomic levels");
    if (static_cast<int>(mu.size()) != n) throw ModelError("mu must have one entry per level");
    for (int j = 0; j + 1 < n; ++j) {
        if (!(energies[static_cast<std::size_t>(j)] < energies[static_cast<std::size_t>(j + 1)])) {
            throw ModelError("energies must be strictly increasing (E_" + std::to_string(j + 1) + " >= E_" +
                             std::to_string(j + 2) + ")");
        }
    }
    if (atoms < 1) throw ModelError("atom count A must be >= 1");
    if (n_max < 0) throw ModelError("Fock truncation n_max must be >= 0");
    if (omega < 0.0) throw ModelError("field frequency must be >= 0");
    for (const auto& c : channels) {
        if (c.from < 1 || c.to > n || c.from >= c.to) {
            throw ModelError("channel " + std::to_string(c.from) + "-" + std::to_string(c.to) + " is not a valid i<j pair");
        }
        if (c.coupling < 0.0) throw ModelError("channel couplings must be >= 0");
        if (mu[static_cast<std::size_t>(c.to - 1)] - mu[static_cast<std::size_t>(c.from - 1)] != 1) {
            throw ModelError("channel " + std::to_string(c.from) + "-" + std::to_string(c.to) +
                             " does not conserve the excitation number (need mu_to - mu_from = 1)");
        }
    }
}

AtomFieldModel AtomFieldModel::two_level(double e1, double e2, double g, double omega, int atoms, int n_max)
{
    AtomFieldModel m;
    m.energies = {e1, e2};
    m.mu = {0, 1};
    m.channels = {{1, 2, g}};
    m.omega = omega;
    m.atoms = atoms;
    m.n_max = n_max;
    m.validate();
    return m;
}

AtomFieldModel AtomFieldModel::diamond(std::vector<double> energies, std::vector<double> g, double omega, int atoms,
                                       int n_max)
{
    if (energies.size() != 4 || g.size() != 4) throw ModelError("diamond model needs four energies and four couplings");
    AtomFieldModel m;
    m.energies = std::move(energies);
    m.mu = {-1, 0, 0, 1};
    m.channels = {{1, 2, g[0]}, {1, 3, g[1]}, {2, 4, g[2]}, {3, 4, g[3]}};
    m.omega = omega;
    m.atoms = atoms;
    m.n_max = n_max;
    m.validate();
    return m;
}

// ---------------------------------------------------------------- vectors

int ResonanceVector::positive_sum() const
{
    int s = 0;
    for (int x : k) if (x > 0) s += x;
    return s;
}

int ResonanceVector::negative_sum() const
{
    int s = 0;
    for (int x : k) if (x < 0) s -= x;
    return s;
}

std::string ResonanceVector::str() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
    os << ')';
    return os.str();
}

std::string to_string(ResonanceClass c)
{
    switch (c) {
    case ResonanceClass::multiphoton: return "multiphoton";
    case ResonanceClass::collective_multiphoton: return "collective-multiphoton";
    case ResonanceClass::virtual_photon: return "virtual-photon";
    case ResonanceClass::photon_assisted: return "photon-assisted";
    case ResonanceClass::explicit_: return "explicit";
    }
    return "unknown";
}

std::vector<ResonanceVector> enumerate_vectors(const AtomFieldModel& model)
{
    model.validate();
    const int len = model.levels() - 1;
    const int a = model.atoms;
    std::vector<ResonanceVector> out;
    std::vector<int> k(static_cast<std::size_t>(len), -a);
    // odometer over [-A, A]^len
    while (true) {
        int first = 0;
        for (int x : k) if (x != 0) { first = x; break; }
        if (first > 0) {
            int g = 0;
            for (int x : k) g = std::gcd(g, std::abs(x));
            ResonanceVector v{k, true};
            if (g == 1 && v.positive_sum() <= a && v.negative_sum() <= a) out.push_back(std::move(v));
        }
        int pos = len - 1;
        while (pos >= 0 && k[static_cast<std::size_t>(pos)] == a) {
            k[static_cast<std::size_t>(pos)] = -a;
            --pos;
        }
        if (pos < 0) break;
        ++k[static_cast<std::size_t>(pos)];
    }
    // the odometer already runs in ascending lexicographic order
    return out;
}

namespace {

void check_length(const ResonanceVector& k, const AtomFieldModel& model)
{
    if (static_cast<int>(k.k.size()) != model.levels() - 1) {
        throw ModelError("resonance vector length must be N-1 = " + std::to_string(model.levels() - 1));
    }
}

}  // namespace

int photon_exponent(const ResonanceVector& k, const AtomFieldModel& model)
{
    check_length(k, model);
    const int top = model.mu.back();
    int s = 0;
    for (std::size_t j = 0; j < k.k.size(); ++j) s += k.k[j] * (top - model.mu[j]);
    return s;
}

double resonance_defect(const ResonanceVector& k, const AtomFieldModel& model, double omega)
{
    check_length(k, model);
    const double e_top = model.energies.back();
    const int mu_top = model.mu.back();
    double s = 0.0;
    for (std::size_t j = 0; j < k.k.size(); ++j) {
        s += k.k[j] * (e_top - model.energies[j] - omega * (mu_top - model.mu[j]));
    }
    return s;
}

ResonantFrequency solve_resonant_frequency(const ResonanceVector& k, const AtomFieldModel& model)
{
    ResonantFrequency r;
    const double e_top = model.energies.back();
    double num = 0.0;
    for (std::size_t j = 0; j < k.k.size(); ++j) num += k.k[j] * (e_top - model.energies[j]);
    r.energy_defect = num;
    const int den = photon_exponent(k, model);
    if (den != 0) {
        r.omega_star = num / den;
        r.unphysical = *r.omega_star < 0.0;
    }
    return r;
}

int min_atoms(const ResonanceVector& k)
{
    return std::max(k.positive_sum(), k.negative_sum());
}

namespace {

// Effective single-atom transition of a vector with min_atoms == 1:
// the atom is raised from level j (k_j = +1) to N and lowered to i (k_i = -1).
std::optional<std::pair<int, int>> single_transition(const ResonanceVector& k, int levels)
{
    if (min_atoms(k) != 1) return std::nullopt;
    int from = 0;
    int to = levels;
    for (std::size_t j = 0; j < k.k.size(); ++j) {
        if (k.k[j] == 1) from = static_cast<int>(j) + 1;
        if (k.k[j] == -1) to = static_cast<int>(j) + 1;
    }
    if (from == 0) {
        // only a lowering factor: transition N -> i, report as the upward pair
        return std::make_pair(to, levels);
    }
    return std::make_pair(std::min(from, to), std::max(from, to));
}

}  // namespace

ResonanceClass classify(const ResonanceVector& k, const AtomFieldModel& model)
{
    const int kn = photon_exponent(k, model);
    const int atoms_needed = min_atoms(k);
    if (kn == 0) {
        return atoms_needed == 1 ? ResonanceClass::photon_assisted : ResonanceClass::virtual_photon;
    }
    if (atoms_needed > 1) return ResonanceClass::collective_multiphoton;
    const auto tr = single_transition(k, model.levels());
    if (std::abs(kn) == 1 && tr && model.has_channel(tr->first, tr->second)) return ResonanceClass::explicit_;
    return ResonanceClass::multiphoton;
}

ResonanceCondition analyze(const ResonanceVector& k, const AtomFieldModel& model)
{
    ResonanceCondition c;
    c.vector = k;
    c.photon_exponent = photon_exponent(k, model);
    const auto f = solve_resonant_frequency(k, model);
    c.omega_star = f.omega_star;
    c.energy_defect = f.energy_defect;
    c.unphysical = f.unphysical;
    c.cls = classify(k, model);
    c.min_atoms = min_atoms(k);
    c.transition = single_transition(k, model.levels());
    return c;
}

std::vector<ResonanceCondition> enumerate_resonances(const AtomFieldModel& model)
{
    std::vector<ResonanceCondition> out;
    for (const auto& k : enumerate_vectors(model)) out.push_back(analyze(k, model));
    return out;
}

// ---------------------------------------------------------------- operators

AtomFieldSpace::AtomFieldSpace(const AtomFieldModel& model)
    : space_({Representation::symmetric_uN(model.levels(), model.atoms), Representation::boson(model.n_max)}),
      levels_(model.levels())
{
    const Ladder field = build_ladder(space_.factor(1));
    adag_ = space_.lift(1, field.xplus);
    a_ = space_.lift(1, field.xminus);
    n_ = space_.lift(1, field.x0);
    interior_ = space_.lift_mask(1, field.interior);
}

OperatorMatrix AtomFieldSpace::S(int i, int j) const
{
    return space_.lift(0, collective_uN(space_.factor(0), i, j));
}

OperatorMatrix AtomFieldSpace::excitation_number(const std::vector<int>& mu) const
{
    if (static_cast<int>(mu.size()) != levels_) throw ModelError("mu has the wrong length");
    OperatorMatrix out = n_;
    for (int j = 1; j <= levels_; ++j) out += static_cast<double>(mu[static_cast<std::size_t>(j - 1)]) * S(j, j);
    return out;
}

Index AtomFieldSpace::basis_index(const std::vector<int>& occupation, int photons) const
{
    const Index atom = space_.factor(0).occupation_index(occupation);
    if (atom < 0) throw ModelError("occupation vector is not in the symmetric irrep");
    return space_.flat_index({atom, static_cast<Index>(photons)});
}

OperatorMatrix rwa_hamiltonian(const AtomFieldModel& model, const AtomFieldSpace& space)
{
    model.validate();
    OperatorMatrix h = model.omega * space.photon_number();
    for (int j = 1; j <= model.levels(); ++j) h += model.energies[static_cast<std::size_t>(j - 1)] * space.S(j, j);
    for (const auto& c : model.channels) {
        if (c.coupling == 0.0) continue;
        h += c.coupling * plus_hc(space.a() * space.S(c.from, c.to));
    }
    return h;
}

InteractionOperator build_interaction_operator(const ResonanceVector& k, const AtomFieldModel& model,
                                               const AtomFieldSpace& space)
{
    check_length(k, model);
    const int top = model.levels();
    OperatorMatrix lowering = OperatorMatrix::identity(space.dim());
    OperatorMatrix raising = OperatorMatrix::identity(space.dim());
    for (std::size_t j = 0; j < k.k.size(); ++j) {
        const int level = static_cast<int>(j) + 1;
        const int e = k.k[j];
        if (e > 0) raising = raising * power(space.S(level, top), e);
        if (e < 0) lowering = lowering * power(space.S(top, level), -e);
    }
    const int kn = photon_exponent(k, model);
    const OperatorMatrix field = kn >= 0 ? power(space.a(), kn) : power(space.adag(), -kn);
    InteractionOperator out{lowering * raising * field, model.atoms < min_atoms(k)};
    return out;
}

}  // namespace qres
