// spectral.hpp — exact diagonalization, time evolution and Floquet analysis
//
// These routines are the brute-force oracle against which every effective
// Hamiltonian is checked. All matrices are dense.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qres/operator.hpp"

namespace qres {

struct Eigensystem {
    RealVector values;  // ascending
    Matrix vectors;     // columns
};

// Requires the Hermitian tag.
Eigensystem diagonalize(const OperatorMatrix& h);

// Residual max_i ||H v_i - lambda_i v_i||.
double eigen_residual(const OperatorMatrix& h, const Eigensystem& es);

double expectation(const OperatorMatrix& op, const Vector& psi);

// exp(-i H t) via the spectral decomposition.
Matrix propagator(const Eigensystem& es, double t);

struct EvolutionResult {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<double> leakage;  // 1 - ||P psi||^2 for the interior projector P
    double max_norm_drift{0.0};
    double step_halving_change{0.0};  // periodic runs only

    std::vector<double> observable(const OperatorMatrix& op) const;
    std::vector<double> population(Index basis_state) const;
    double max_leakage() const;
};

class EvolutionError : public Error {
public:
    using Error::Error;
};

inline constexpr double kNormAbort = 1e-6;

// Time-independent evolution with the spectral propagator. `interior` (0/1,
// optional) defines the leakage metric.
EvolutionResult evolve(const OperatorMatrix& h, const Vector& psi0, const std::vector<double>& times,
                       const RealVector& interior = RealVector());

// H(t) = H_0 + cos(Omega t) H_c + sin(Omega t) H_s
struct PeriodicHamiltonian {
    OperatorMatrix constant;
    OperatorMatrix cos_part;
    OperatorMatrix sin_part;
    double frequency{1.0};

    double period() const;
    Index dim() const { return constant.dim(); }
    OperatorMatrix at(double t) const;
};

enum class Integrator {
    midpoint,  // piecewise-constant exponential midpoint, second order
    magnus4,   // fourth-order commutator-free Magnus
};

struct PropagationOptions {
    int steps_per_period{2000};
    Integrator integrator{Integrator::magnus4};
};

// One-period propagator U(T, 0).
Matrix monodromy(const PeriodicHamiltonian& h, const PropagationOptions& opts = {});

// Propagator from t0 to t1 (t1 >= t0) with steps of at most period/steps_per_period.
Matrix propagate(const PeriodicHamiltonian& h, double t0, double t1, const PropagationOptions& opts = {});

// Periodic evolution on the time grid; runs a second pass with halved steps and
// records the largest change in any amplitude in step_halving_change.
EvolutionResult evolve(const PeriodicHamiltonian& h, const Vector& psi0, const std::vector<double>& times,
                       const PropagationOptions& opts = {}, const RealVector& interior = RealVector());

struct FloquetSpectrum {
    RealVector quasienergies;  // in (-Omega/2, Omega/2]
    Matrix modes;              // Floquet states at t = 0, columns
    double period{0.0};
};

FloquetSpectrum floquet_spectrum(const Matrix& monodromy, double period);

// sup over stroboscopic times n T of |<to| U^n |from>|^2, in the
// quasi-periodic limit: (sum_c |<to|P_c|from>|)^2 clipped to 1, where P_c
// projects on a cluster of Floquet modes whose eigenphases agree within
// `degeneracy_tol`. Exact for two clusters, an upper bound otherwise.
double max_transition_probability(const FloquetSpectrum& fs, Index from, Index to, double degeneracy_tol = 1e-9);

// Largest |<to|U^n|from>|^2 over n = 0..periods.
double stroboscopic_max_transition(const Matrix& monodromy, Index from, Index to, int periods);

// ---------------------------------------------------------------- comparisons

struct CompareReport {
    std::vector<double> times;
    std::vector<double> error;  // max over observables at each time
    double max_error{0.0};
};

CompareReport compare_effective_vs_exact(const OperatorMatrix& h_full, const OperatorMatrix& h_eff,
                                         const Vector& psi0, const std::vector<double>& times,
                                         const std::vector<OperatorMatrix>& observables);

struct DriftReport {
    std::vector<double> times;
    std::vector<double> values;
    double initial{0.0};
    double max_drift{0.0};
};

DriftReport conservation_drift(const OperatorMatrix& n_op, const OperatorMatrix& h, const Vector& psi0,
                               const std::vector<double>& times);

// Ratio f(x) / f(x/2) compared against an expected ratio with relative tolerance.
struct ScalingVerdict {
    double value_full{0.0};
    double value_half{0.0};
    double ratio{0.0};
    double expected{0.0};
    double tolerance{0.0};
    bool pass{false};
};

ScalingVerdict halving_scaling(const std::function<double(double)>& f, double x, double expected_ratio,
                               double rel_tol);

std::vector<double> linspace(double a, double b, int n);

}  // namespace qres
