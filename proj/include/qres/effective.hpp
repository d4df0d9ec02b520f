// effective.hpp — small-rotation (Lie-type) effective Hamiltonians
//
// Conventions: a generator T is anti-Hermitian and the transformed
// Hamiltonian is e^{eps T} H e^{-eps T} = sum_k eps^k / k! ad_T^k(H).

#pragma once

#include <array>
#include <string>
#include <vector>

#include "qres/algebra.hpp"
#include "qres/models.hpp"
#include "qres/operator.hpp"

namespace qres {

class RegimeError : public Error {
public:
    using Error::Error;
};

// Raised when the term to be eliminated is resonant (near-singular denominator).
class ResonantTermError : public RegimeError {
public:
    using RegimeError::RegimeError;
};

inline constexpr double kSmallParamWarn = 0.05;
inline constexpr double kSmallParamMax = 0.2;

// Appends a warning for |value| > 0.05, throws RegimeError above 0.2.
void check_small_parameter(const std::string& name, double value, std::vector<std::string>& warnings);

struct RotationGenerator {
    OperatorMatrix T;  // anti-Hermitian
    double epsilon{0.0};

    void validate(std::vector<std::string>* warnings = nullptr) const;
};

// Truncated adjoint series through ad_T^order.
OperatorMatrix bch_transform(const OperatorMatrix& h, const RotationGenerator& gen, int order);
// e^{eps T} H e^{-eps T} with the exact unitary.
OperatorMatrix exact_conjugate(const OperatorMatrix& h, const RotationGenerator& gen);
Matrix rotation_unitary(const RotationGenerator& gen);

// A term coeff * (X+^n Y^m_sign + h.c.) with Y^m_sign = Y+^m (counter-rotating)
// or Y-^m (rotating).
struct EliminationTarget {
    int n{1};
    int m{1};
    bool counter_rotating{true};
};

struct EliminationResult {
    OperatorMatrix hamiltonian;
    RotationGenerator generator;
    double denominator{0.0};
    std::vector<std::string> warnings;
};

// Removes the target term from H = omega X0 + Omega Y0 + ... with the generator
// X+^n Y^m - h.c. and eps = coeff / (n omega +/- m Omega). order = 0 applies the
// exact unitary, order >= 1 the truncated adjoint series.
EliminationResult eliminate_term(const OperatorMatrix& h, const TwoSubsystem& sys, double omega, double Omega,
                                 const EliminationTarget& target, double coeff, int order = 0);

// ---------------------------------------------------------------- closed forms

// Dispersive RWA Dicke interaction: Delta S_z + (g^2/Delta)[(2 a^dag a + 1) S_z - S_z^2].
OperatorMatrix dicke_dispersive(const TwoSubsystem& dicke, const DickeRwaParams& p,
                                std::vector<std::string>* warnings = nullptr);

// Four-level diamond atoms (levels 1..4, mu = -1,0,0,1) under RWA.
struct DiamondParams {
    std::array<double, 4> energies{0.0, 0.9, 1.1, 2.0};
    std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};  // channels 1-2, 1-3, 2-4, 3-4
    double omega{1.0};
    int atoms{1};
    int n_max{4};

    std::array<double, 4> denominators() const;  // E2-E1-w, E3-E1-w, E4-E2-w, E4-E3-w
    std::array<double, 4> epsilons() const;
};

class AtomFieldSpace;
struct AtomFieldModel;

AtomFieldModel diamond_model(const DiamondParams& p);
// The four generators a S_+^{ij} - a^dag S_-^{ij} with eps_i = g_i / denominator_i.
std::array<RotationGenerator, 4> diamond_generators(const DiamondParams& p, const AtomFieldSpace& space);
// U4 U3 U2 U1 H U1^dag U2^dag U3^dag U4^dag with exact unitaries.
OperatorMatrix diamond_exact_conjugation(const DiamondParams& p, const AtomFieldSpace& space);
// Dynamic Stark shift Phi(a^dag a, S^jj).
OperatorMatrix diamond_stark_shift(const DiamondParams& p, const AtomFieldSpace& space);
// First-order effective Hamiltonian. Refuses (ResonantTermError) when any
// denominator is within 10 g_i of zero.
OperatorMatrix diamond_first_order(const DiamondParams& p, const AtomFieldSpace& space,
                                   std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------- non-RWA series

// theta_kl(x0, y0) for scalar labels; theta_10 == 1.
double theta_value(int k, int l, const StructuralFunction& phi1, const StructuralFunction& phi2, double x0,
                   double y0);
// Diagonal operator on the X (x) Y product basis defined by the label lists.
OperatorMatrix theta_coefficient(int k, int l, const StructuralFunction& phi1, const StructuralFunction& phi2,
                                 const std::vector<double>& x_labels, const std::vector<double>& y_labels);

// g (-delta)^{l+k-1} eps^{l+2(k-1)} / ((k-1)! (l+k-1)!)
double series_prefactor(int k, int l, double g, double delta, double eps);

struct SeriesTerm {
    int k{1};
    int l{0};
    double prefactor{0.0};
    OperatorMatrix theta;     // diagonal
    OperatorMatrix operator_; // X+^k Y-^{2l+k} theta (without prefactor)

    // Resonance position omega / Omega = (2l + k) / k.
    double resonance_ratio() const { return static_cast<double>(2 * l + k) / k; }
};

struct EffectiveSeries {
    double omega{0.0};
    double Omega{0.0};
    double g{0.0};
    double epsilon{0.0};  // g / (omega + Omega)
    double delta{0.0};    // g / (2 Omega)
    OperatorMatrix diagonal;
    std::vector<SeriesTerm> terms;
    std::vector<std::string> warnings;

    // diagonal + sum prefactor (term + h.c.)
    OperatorMatrix assemble() const;
    const SeriesTerm* find(int k, int l) const;
};

struct SeriesOptions {
    int l_max{3};
    int k_max{0};  // 0: up to dim(X) - 1
    double zero_tol{1e-12};
};

// Effective Hamiltonian of omega X0 + Omega Y0 + g(X+ + X-)(Y+ + Y-) for
// omega >= Omega. Terms are kept for coprime (k, l) whose theta and operator
// are nonzero and whose Y power fits inside the truncation.
EffectiveSeries nonrwa_series(const TwoSubsystem& sys, double omega, double Omega, double g,
                              const SeriesOptions& opts = {});

struct IntegralOfMotion {
    int k{1};
    int l{1};
    double delta{0.0};
    OperatorMatrix op;
};

// N^(kl) through O(delta^2) on a Dicke space; requires l >= 1.
IntegralOfMotion integral_of_motion_Nkl(int k, int l, const TwoSubsystem& dicke, double delta);

}  // namespace qres
