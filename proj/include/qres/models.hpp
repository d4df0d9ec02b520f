// models.hpp — Dicke-type Hamiltonians on spin (x) boson and spin (x) Euclidean spaces

#pragma once

#include "qres/algebra.hpp"
#include "qres/operator.hpp"
#include "qres/spectral.hpp"

namespace qres {

// Two subsystems X (factor 0) and Y (factor 1) with lifted ladder operators.
class TwoSubsystem {
public:
    TwoSubsystem(const Representation& x, const Representation& y);

    const CompositeSpace& space() const noexcept { return space_; }
    Index dim() const noexcept { return space_.dim(); }
    const Ladder& x_ladder() const noexcept { return x_; }
    const Ladder& y_ladder() const noexcept { return y_; }

    const OperatorMatrix& x0() const noexcept { return x0_; }
    const OperatorMatrix& xplus() const noexcept { return xp_; }
    const OperatorMatrix& xminus() const noexcept { return xm_; }
    const OperatorMatrix& y0() const noexcept { return y0_; }
    const OperatorMatrix& yplus() const noexcept { return yp_; }
    const OperatorMatrix& yminus() const noexcept { return ym_; }

    // Interior of both factors.
    const RealVector& interior() const noexcept { return interior_; }
    // Labels with every Y label at least `margin` steps away from a Y truncation edge.
    RealVector interior_with_margin(int margin) const;

    double x_label(Index flat) const;
    double y_label(Index flat) const;
    Index index_of(Index x_index, Index y_index) const { return space_.flat_index({x_index, y_index}); }

private:
    CompositeSpace space_;
    Ladder x_;
    Ladder y_;
    OperatorMatrix x0_, xp_, xm_, y0_, yp_, ym_;
    RealVector interior_;
};

// omega X0 + Omega Y0 + g (X+Y- + X-Y+) + g (X+Y+ + X-Y-)
OperatorMatrix single_channel_hamiltonian(const TwoSubsystem& sys, double omega, double Omega, double g);

// A two-level atoms (collective spin A/2) and one field mode truncated at n_max.
TwoSubsystem dicke_space(int atoms, int n_max);
// Spin and the truncated Euclidean phase ladder (labels -M..M).
TwoSubsystem dicke_euclid_space(int atoms, int m);

struct DickeRwaParams {
    double field_frequency{1.0};  // omega
    double atom_frequency{1.0};   // omega_0
    double g{0.0};
    double detuning() const { return atom_frequency - field_frequency; }
};

// omega a^dag a + omega_0 S_z + g (a S_+ + a^dag S_-)
OperatorMatrix dicke_rwa(const TwoSubsystem& dicke, const DickeRwaParams& p);
// Delta S_z + g (a S_+ + a^dag S_-)
OperatorMatrix dicke_rwa_interaction(const TwoSubsystem& dicke, const DickeRwaParams& p);
// S_z + a^dag a
OperatorMatrix dicke_excitation_number(const TwoSubsystem& dicke);

// Omega a^dag a + omega S_z + g (a + a^dag)(S_+ + S_-)
OperatorMatrix dicke_nonrwa(const TwoSubsystem& dicke, double atom_frequency, double field_frequency, double g);

// omega S_z + g (S_+ + S_-) cos(Omega t) on the bare spin space.
PeriodicHamiltonian dicke_classical(int atoms, double atom_frequency, double drive_frequency, double g);

// Floquet operator form omega S_z + Omega E_0 + g_op (S_+ + S_-)(E + E^dagger).
// The phase-state average of E + E^dagger is 2 cos(Omega t), so g_op = g / 2
// reproduces dicke_classical with amplitude g.
OperatorMatrix dicke_floquet_operator(const TwoSubsystem& euclid, double atom_frequency, double drive_frequency,
                                      double g_op);

}  // namespace qres
