// scan.hpp — parameter sweeps: avoided crossings and Floquet transition peaks

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qres/operator.hpp"
#include "qres/spectral.hpp"

namespace qres {

using HamiltonianFamily = std::function<OperatorMatrix(double)>;
using PeriodicFamily = std::function<PeriodicHamiltonian(double)>;

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double x_tol,
                               int max_iter = 200);

// Eigenvalues per grid point, reordered so that each column follows the
// eigenvector with the largest overlap at the previous grid point.
std::vector<RealVector> track_levels(const HamiltonianFamily& family, const std::vector<double>& grid);

// Diabatic pair (a, b): among the two eigenstates with the largest weight on
// {a, b}, the energy of the one with more weight on a minus the other. The
// sign flips across a crossing of the two diabatic levels; the magnitude at
// the flip is the avoided-crossing gap (zero for a true crossing).
double character_difference(const OperatorMatrix& h, Index a, Index b);

struct PairCrossing {
    bool found{false};
    double location{0.0};
    double gap{0.0};
    double lo{0.0};
    double hi{0.0};
};

struct PairScanOptions {
    double x_tol{1e-12};
    int max_iter{200};
};

// Bisection on the sign of character_difference inside [lo, hi].
PairCrossing locate_pair_crossing(const HamiltonianFamily& family, Index a, Index b, double lo, double hi,
                                  const PairScanOptions& opts = {});

// Samples the grid, refines the sign change closest to `near` (or the first
// one when `near` is NaN) and optionally returns the sampled differences.
PairCrossing scan_pair_crossing(const HamiltonianFamily& family, Index a, Index b, const std::vector<double>& grid,
                                double near, const PairScanOptions& opts = {},
                                std::vector<double>* differences = nullptr);

struct ResonancePeak {
    std::string label;
    double predicted{0.0};
    double measured{0.0};
    double gap{0.0};
    double rel_error{0.0};
    bool found{false};
    bool truncation_limited{false};
};

struct SpectrumScan {
    std::string parameter;
    std::vector<double> grid;
    std::vector<RealVector> levels;
    std::vector<ResonancePeak> peaks;
};

// ---------------------------------------------------------------- Floquet

struct FloquetPoint {
    double parameter{0.0};
    double max_transition{0.0};
    double quasienergy_gap{0.0};  // circular distance between the modes carrying `from` and `to`
};

FloquetPoint floquet_point(const PeriodicHamiltonian& h, double parameter, Index from, Index to,
                           const PropagationOptions& opts = {});

std::vector<FloquetPoint> floquet_scan(const PeriodicFamily& family, const std::vector<double>& grid, Index from,
                                       Index to, const PropagationOptions& opts = {});

// Minimizes the quasienergy gap on [lo, hi] and reports the point found.
FloquetPoint tune_floquet_resonance(const PeriodicFamily& family, double lo, double hi, Index from, Index to,
                                    const PropagationOptions& opts = {}, double x_tol = 1e-9);

}  // namespace qres
