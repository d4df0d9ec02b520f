#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qres/algebra.hpp"
#include "qres/effective.hpp"
#include "qres/models.hpp"
#include "qres/resonances.hpp"
#include "qres/scan.hpp"
#include "qres/spectral.hpp"

namespace py = pybind11;
using namespace qres;

namespace {

Matrix dense(const OperatorMatrix& op)
{
    return op.matrix();
}

AtomFieldModel make_model(const std::string& kind, std::vector<double> energies, std::vector<double> couplings,
                          double omega, int atoms, int n_max)
{
    if (kind == "diamond") return AtomFieldModel::diamond(std::move(energies), std::move(couplings), omega, atoms, n_max);
    if (kind == "two_level") {
        if (energies.size() != 2 || couplings.size() != 1) throw ModelError("two_level needs 2 energies and 1 coupling");
        return AtomFieldModel::two_level(energies[0], energies[1], couplings[0], omega, atoms, n_max);
    }
    throw ModelError("unknown model kind '" + kind + "' (diamond, two_level)");
}

DiamondParams diamond_params(const std::vector<double>& e, const std::vector<double>& g, double omega, int atoms,
                             int n_max)
{
    if (e.size() != 4 || g.size() != 4) throw ModelError("diamond needs four energies and four couplings");
    DiamondParams p;
    std::copy(e.begin(), e.end(), p.energies.begin());
    std::copy(g.begin(), g.end(), p.g.begin());
    p.omega = omega;
    p.atoms = atoms;
    p.n_max = n_max;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Resonances and effective Hamiltonians of atom-field models";

    py::register_exception<Error>(m, "QresError", PyExc_RuntimeError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<RegimeError>(m, "RegimeError", PyExc_RuntimeError);

    py::class_<ResonanceCondition>(m, "ResonanceCondition")
        .def_property_readonly("vector", [](const ResonanceCondition& c) { return c.vector.k; })
        .def_readonly("photon_exponent", &ResonanceCondition::photon_exponent)
        .def_readonly("omega_star", &ResonanceCondition::omega_star)
        .def_readonly("energy_defect", &ResonanceCondition::energy_defect)
        .def_readonly("unphysical", &ResonanceCondition::unphysical)
        .def_property_readonly("resonance_class", [](const ResonanceCondition& c) { return to_string(c.cls); })
        .def_readonly("min_atoms", &ResonanceCondition::min_atoms)
        .def_readonly("transition", &ResonanceCondition::transition)
        .def("__repr__", [](const ResonanceCondition& c) {
            return "<ResonanceCondition " + c.vector.str() + " " + to_string(c.cls) + ">";
        });

    m.def(
        "enumerate_resonances",
        [](const std::string& kind, std::vector<double> energies, std::vector<double> couplings, double omega,
           int atoms, int n_max) {
            return enumerate_resonances(make_model(kind, std::move(energies), std::move(couplings), omega, atoms, n_max));
        },
        py::arg("kind"), py::arg("energies"), py::arg("couplings"), py::arg("omega"), py::arg("atoms") = 1,
        py::arg("n_max") = 4, "Kinematic resonance conditions of a 'diamond' or 'two_level' model.");

    m.def(
        "interaction_operator",
        [](const std::string& kind, std::vector<double> energies, std::vector<double> couplings, double omega,
           int atoms, int n_max, std::vector<int> vector) {
            const AtomFieldModel model = make_model(kind, std::move(energies), std::move(couplings), omega, atoms, n_max);
            return dense(build_interaction_operator({vector, true}, model, AtomFieldSpace(model)).op);
        },
        py::arg("kind"), py::arg("energies"), py::arg("couplings"), py::arg("omega"), py::arg("atoms"),
        py::arg("n_max"), py::arg("vector"));

    m.def("collective_generator",
          [](int levels, int atoms, int i, int j) { return dense(collective_uN(Representation::symmetric_uN(levels, atoms), i, j)); },
          py::arg("levels"), py::arg("atoms"), py::arg("i"), py::arg("j"),
          "S^{ij} on the symmetric irrep; moves one atom from level i to level j.");

    m.def(
        "theta",
        [](int k, int l, const std::string& identification, int atoms, double x, double y) {
            const auto spin = StructuralFunction::spin(atoms);
            const auto other = identification == "euclid" ? StructuralFunction::euclidean() : StructuralFunction::boson();
            return theta_value(k, l, spin, other, x, y);
        },
        py::arg("k"), py::arg("l"), py::arg("identification") = "dicke", py::arg("atoms") = 1, py::arg("x") = 0.0,
        py::arg("y") = 0.0);

    m.def(
        "dicke_rwa",
        [](int atoms, int n_max, double field_frequency, double atom_frequency, double g) {
            return dense(dicke_rwa(dicke_space(atoms, n_max), {field_frequency, atom_frequency, g}));
        },
        py::arg("atoms"), py::arg("n_max"), py::arg("field_frequency"), py::arg("atom_frequency"), py::arg("g"));
    m.def(
        "dicke_nonrwa",
        [](int atoms, int n_max, double atom_frequency, double field_frequency, double g) {
            return dense(dicke_nonrwa(dicke_space(atoms, n_max), atom_frequency, field_frequency, g));
        },
        py::arg("atoms"), py::arg("n_max"), py::arg("atom_frequency"), py::arg("field_frequency"), py::arg("g"));
    m.def(
        "dicke_dispersive",
        [](int atoms, int n_max, double field_frequency, double atom_frequency, double g) {
            return dense(dicke_dispersive(dicke_space(atoms, n_max), {field_frequency, atom_frequency, g}));
        },
        py::arg("atoms"), py::arg("n_max"), py::arg("field_frequency"), py::arg("atom_frequency"), py::arg("g"));
    m.def(
        "dicke_index",
        [](int atoms, int n_max, int spin_index, int photons) { return dicke_space(atoms, n_max).index_of(spin_index, photons); },
        py::arg("atoms"), py::arg("n_max"), py::arg("spin_index"), py::arg("photons"));

    m.def(
        "nonrwa_series",
        [](int atoms, int n_max, double atom_frequency, double field_frequency, double g, int l_max) {
            SeriesOptions opts;
            opts.l_max = l_max;
            const EffectiveSeries s = nonrwa_series(dicke_space(atoms, n_max), atom_frequency, field_frequency, g, opts);
            py::list terms;
            for (const auto& t : s.terms) {
                py::dict d;
                d["k"] = t.k;
                d["l"] = t.l;
                d["prefactor"] = t.prefactor;
                d["resonance_ratio"] = t.resonance_ratio();
                d["operator"] = dense(t.operator_);
                terms.append(d);
            }
            py::dict out;
            out["epsilon"] = s.epsilon;
            out["delta"] = s.delta;
            out["diagonal"] = dense(s.diagonal);
            out["hamiltonian"] = dense(s.assemble());
            out["terms"] = terms;
            out["warnings"] = s.warnings;
            return out;
        },
        py::arg("atoms"), py::arg("n_max"), py::arg("atom_frequency"), py::arg("field_frequency"), py::arg("g"),
        py::arg("l_max") = 3);

    m.def(
        "diamond_first_order",
        [](std::vector<double> energies, std::vector<double> couplings, double omega, int atoms, int n_max) {
            const DiamondParams p = diamond_params(energies, couplings, omega, atoms, n_max);
            return dense(diamond_first_order(p, AtomFieldSpace(diamond_model(p))));
        },
        py::arg("energies"), py::arg("couplings"), py::arg("omega"), py::arg("atoms") = 1, py::arg("n_max") = 4);
    m.def(
        "diamond_exact_conjugation",
        [](std::vector<double> energies, std::vector<double> couplings, double omega, int atoms, int n_max) {
            const DiamondParams p = diamond_params(energies, couplings, omega, atoms, n_max);
            return dense(diamond_exact_conjugation(p, AtomFieldSpace(diamond_model(p))));
        },
        py::arg("energies"), py::arg("couplings"), py::arg("omega"), py::arg("atoms") = 1, py::arg("n_max") = 4);

    m.def(
        "eigvalsh",
        [](const Matrix& h) { return diagonalize(OperatorMatrix::make_hermitian(h)).values; }, py::arg("h"));

    m.def(
        "classical_max_transition",
        [](int atoms, double atom_frequency, double drive_frequency, double g, int steps_per_period) {
            const PeriodicHamiltonian h = dicke_classical(atoms, atom_frequency, drive_frequency, g);
            return floquet_point(h, atom_frequency, 0, atoms, {steps_per_period, Integrator::magnus4}).max_transition;
        },
        py::arg("atoms"), py::arg("atom_frequency"), py::arg("drive_frequency"), py::arg("g"),
        py::arg("steps_per_period") = 2000,
        "Stroboscopic supremum of the bottom-to-top transition probability under a classical drive.");
    m.def(
        "tune_classical_resonance",
        [](int atoms, double drive_frequency, double g, double lo, double hi) {
            const PeriodicFamily family = [=](double w) { return dicke_classical(atoms, w, drive_frequency, g); };
            const FloquetPoint p = tune_floquet_resonance(family, lo, hi, 0, atoms);
            return py::make_tuple(p.parameter, p.max_transition);
        },
        py::arg("atoms"), py::arg("drive_frequency"), py::arg("g"), py::arg("lo"), py::arg("hi"));
}
