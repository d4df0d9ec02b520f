// resonances.hpp — kinematic resonances of number-conserving atom-field models
//
// A system of A identical N-level atoms coupled to one field mode under the
// rotating-wave approximation conserves the excitation number
//     N = a^dagger a + sum_j mu_j S^{jj}.
// Every admissible interaction is prod_j (S_+^{jN})^{k_j} a^{k_N} with
// k_N = sum_j k_j (mu_N - mu_j); it is resonant when
//     sum_j k_j (E_N - E_j - omega (mu_N - mu_j)) = 0.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qres/algebra.hpp"
#include "qres/operator.hpp"

namespace qres {

class ModelError : public Error {
public:
    using Error::Error;
};

struct DipoleChannel {
    int from{1};  // lower level, 1-based
    int to{2};    // upper level, 1-based
    double coupling{0.0};
};

struct AtomFieldModel {
    std::vector<double> energies;  // E_1 < ... < E_N
    std::vector<int> mu;           // excitation weights
    std::vector<DipoleChannel> channels;
    double omega{0.0};
    int n_max{0};
    int atoms{1};

    int levels() const noexcept { return static_cast<int>(energies.size()); }
    bool has_channel(int from, int to) const;
    // Throws ModelError on any violated invariant.
    void validate() const;

    static AtomFieldModel two_level(double e1, double e2, double g, double omega, int atoms, int n_max);
    // mu = (-1, 0, 0, 1); channels 1-2, 1-3, 2-4, 3-4.
    static AtomFieldModel diamond(std::vector<double> energies, std::vector<double> g, double omega, int atoms,
                                  int n_max);
};

struct ResonanceVector {
    std::vector<int> k;  // (k_1 .. k_{N-1})
    bool canonical{true};

    int positive_sum() const;
    int negative_sum() const;  // sum of |k_i| over negative entries
    bool operator==(const ResonanceVector& o) const { return k == o.k; }
    std::string str() const;
};

enum class ResonanceClass { multiphoton, collective_multiphoton, virtual_photon, photon_assisted, explicit_ };

std::string to_string(ResonanceClass c);

struct ResonanceCondition {
    ResonanceVector vector;
    int photon_exponent{0};
    std::optional<double> omega_star;  // empty when the condition is frequency independent
    double energy_defect{0.0};         // sum_j k_j (E_N - E_j); the full defect when omega_star is empty
    bool unphysical{false};            // omega_star < 0
    ResonanceClass cls{ResonanceClass::multiphoton};
    int min_atoms{1};
    // For min_atoms == 1: the effective single-atom transition (from, to), 1-based.
    std::optional<std::pair<int, int>> transition;
};

// Canonical coprime vectors within the atom-count bound, ascending lexicographic order.
std::vector<ResonanceVector> enumerate_vectors(const AtomFieldModel& model);

int photon_exponent(const ResonanceVector& k, const AtomFieldModel& model);
double resonance_defect(const ResonanceVector& k, const AtomFieldModel& model, double omega);

struct ResonantFrequency {
    std::optional<double> omega_star;
    double energy_defect{0.0};
    bool unphysical{false};
};
ResonantFrequency solve_resonant_frequency(const ResonanceVector& k, const AtomFieldModel& model);

int min_atoms(const ResonanceVector& k);
ResonanceClass classify(const ResonanceVector& k, const AtomFieldModel& model);

ResonanceCondition analyze(const ResonanceVector& k, const AtomFieldModel& model);
std::vector<ResonanceCondition> enumerate_resonances(const AtomFieldModel& model);

// symmetric_uN(N, A) (x) boson(n_max) with the standard lifted operators.
class AtomFieldSpace {
public:
    explicit AtomFieldSpace(const AtomFieldModel& model);

    const CompositeSpace& space() const noexcept { return space_; }
    Index dim() const noexcept { return space_.dim(); }
    int levels() const noexcept { return levels_; }

    OperatorMatrix S(int i, int j) const;  // lifted collective generator
    const OperatorMatrix& a() const noexcept { return a_; }
    const OperatorMatrix& adag() const noexcept { return adag_; }
    const OperatorMatrix& photon_number() const noexcept { return n_; }
    const RealVector& interior() const noexcept { return interior_; }

    OperatorMatrix excitation_number(const std::vector<int>& mu) const;
    Index basis_index(const std::vector<int>& occupation, int photons) const;

private:
    CompositeSpace space_;
    int levels_;
    OperatorMatrix a_;
    OperatorMatrix adag_;
    OperatorMatrix n_;
    RealVector interior_;
};

// omega a^dag a + sum E_j S^{jj} + sum_c g_c (a S_+^{c} + h.c.)
OperatorMatrix rwa_hamiltonian(const AtomFieldModel& model, const AtomFieldSpace& space);

struct InteractionOperator {
    OperatorMatrix op;
    bool vanishes{false};  // model.atoms < min_atoms(k)
};

// [prod_{k_i<0} (S^{N i})^{|k_i|}] [prod_{k_j>0} (S^{j N})^{k_j}] a^{k_N}
// (a^dagger for negative k_N). The raising factors act first.
InteractionOperator build_interaction_operator(const ResonanceVector& k, const AtomFieldModel& model,
                                               const AtomFieldSpace& space);

}  // namespace qres
