#include "qres/models.hpp"

namespace qres {

TwoSubsystem::TwoSubsystem(const Representation& x, const Representation& y)
    : space_({x, y}), x_(build_ladder(x)), y_(build_ladder(y))
{
    x0_ = space_.lift(0, x_.x0);
    xp_ = space_.lift(0, x_.xplus);
    xm_ = space_.lift(0, x_.xminus);
    y0_ = space_.lift(1, y_.x0);
    yp_ = space_.lift(1, y_.xplus);
    ym_ = space_.lift(1, y_.xminus);
    interior_ = space_.lift_mask(0, x_.interior).cwiseProduct(space_.lift_mask(1, y_.interior));
}

RealVector TwoSubsystem::interior_with_margin(int margin) const
{
    const Index ny = space_.factor(1).dim();
    RealVector mask = interior_;
    for (Index flat = 0; flat < dim(); ++flat) {
        const Index iy = flat % ny;
        if (iy + margin >= ny) mask(flat) = 0.0;
        // the Euclidean ladder is also truncated from below
        if (space_.factor(1).kind() == RepKind::euclid && iy < margin) mask(flat) = 0.0;
    }
    return mask;
}

double TwoSubsystem::x_label(Index flat) const
{
    return x_.labels[static_cast<std::size_t>(space_.unflatten(flat)[0])];
}

double TwoSubsystem::y_label(Index flat) const
{
    return y_.labels[static_cast<std::size_t>(space_.unflatten(flat)[1])];
}

OperatorMatrix single_channel_hamiltonian(const TwoSubsystem& sys, double omega, double Omega, double g)
{
    OperatorMatrix h = omega * sys.x0() + Omega * sys.y0();
    h += g * plus_hc(sys.xplus() * sys.yminus());
    h += g * plus_hc(sys.xplus() * sys.yplus());
    return h;
}

TwoSubsystem dicke_space(int atoms, int n_max)
{
    return TwoSubsystem(Representation::spin(atoms), Representation::boson(n_max));
}

TwoSubsystem dicke_euclid_space(int atoms, int m)
{
    return TwoSubsystem(Representation::spin(atoms), Representation::euclid(m));
}

OperatorMatrix dicke_rwa(const TwoSubsystem& d, const DickeRwaParams& p)
{
    OperatorMatrix h = p.field_frequency * d.y0() + p.atom_frequency * d.x0();
    h += p.g * plus_hc(d.yminus() * d.xplus());
    return h;
}

OperatorMatrix dicke_rwa_interaction(const TwoSubsystem& d, const DickeRwaParams& p)
{
    return p.detuning() * d.x0() + p.g * plus_hc(d.yminus() * d.xplus());
}

OperatorMatrix dicke_excitation_number(const TwoSubsystem& d)
{
    return d.x0() + d.y0();
}

OperatorMatrix dicke_nonrwa(const TwoSubsystem& d, double atom_frequency, double field_frequency, double g)
{
    return single_channel_hamiltonian(d, atom_frequency, field_frequency, g);
}

PeriodicHamiltonian dicke_classical(int atoms, double atom_frequency, double drive_frequency, double g)
{
    const Ladder s = build_ladder(Representation::spin(atoms));
    PeriodicHamiltonian h;
    h.constant = atom_frequency * s.x0;
    h.cos_part = g * plus_hc(s.xplus);
    h.sin_part = OperatorMatrix::zero(s.x0.dim());
    h.frequency = drive_frequency;
    return h;
}

OperatorMatrix dicke_floquet_operator(const TwoSubsystem& e, double atom_frequency, double drive_frequency,
                                      double g_op)
{
    return single_channel_hamiltonian(e, atom_frequency, drive_frequency, g_op);
}

}  // namespace qres
