// algebra.hpp — matrix representations of deformed ladder algebras
//
// Every representation is hard-truncated where the underlying algebra is
// infinite (bosons, Euclidean phase ladder). Builders return an interior
// mask marking the basis labels on which the algebraic identities hold
// exactly; truncation edges are zero in the mask.

#pragma once

#include <string>
#include <vector>

#include "qres/operator.hpp"

namespace qres {

// Polynomial phi(z) = sum_i c_i z^i with phi(z) = X+ X- on the label z.
class StructuralFunction {
public:
    StructuralFunction() = default;
    explicit StructuralFunction(std::vector<double> coefficients, bool euclidean = false);

    static StructuralFunction boson();               // phi(z) = z
    static StructuralFunction spin(int atoms);       // (1+A/2)A/2 - z^2 + z
    static StructuralFunction euclidean();           // phi == 1

    double operator()(double z) const;
    // Iterated difference: nabla f(z) = f(z) - f(z+1); order 0 returns f(z).
    double nabla(double z, int order = 1) const;
    double commutator(double z) const { return nabla(z, 1); }

    int degree() const;
    bool is_euclidean() const noexcept { return euclidean_; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

private:
    std::vector<double> coeffs_;
    bool euclidean_{false};
};

enum class RepKind { boson, spin, symmetric_uN, euclid };

std::string to_string(RepKind kind);

// Finite representation with lexicographically ordered basis labels.
class Representation {
public:
    static Representation boson(int n_max);
    static Representation spin(int atoms);
    static Representation symmetric_uN(int levels, int atoms);
    static Representation euclid(int m);

    RepKind kind() const noexcept { return kind_; }
    Index dim() const;
    // boson: n_max; spin/uN: atom count A; euclid: M
    int size_parameter() const noexcept { return param_; }
    int levels() const noexcept { return levels_; }

    // Diagonal labels of X0 (boson n, spin m, euclid n). Throws for uN with N != 2.
    std::vector<double> labels() const;
    // Occupation vectors (n_1..n_N), sum = A, ascending lexicographic order.
    const std::vector<std::vector<int>>& occupations() const;
    Index occupation_index(const std::vector<int>& occ) const;

private:
    Representation(RepKind kind, int param, int levels);

    RepKind kind_;
    int param_;
    int levels_;
    std::vector<std::vector<int>> occupations_;
};

struct Ladder {
    OperatorMatrix x0;
    OperatorMatrix xplus;
    OperatorMatrix xminus;
    StructuralFunction phi;
    RealVector interior;  // 1 where the ladder identities hold, 0 at truncation edges
    std::vector<double> labels;

    OperatorMatrix interior_projector() const { return OperatorMatrix::diagonal(interior); }
    // phi evaluated on X0 + shift, as a diagonal operator.
    OperatorMatrix phi_of_x0(double shift = 0.0) const;
};

Ladder build_ladder(const Representation& rep);

// Collective u(N) generator S^{ij} (1-based levels) on the symmetric irrep.
// S^{ij} moves one atom from level i to level j, so S^{ij} with i < j is the
// raising operator S_+^{ij}, and [S^{ij}, S^{km}] = d_im S^{kj} - d_kj S^{im}.
OperatorMatrix collective_uN(const Representation& rep, int i, int j);

// Ordered tensor product of representations; factor 0 is the slowest index.
class CompositeSpace {
public:
    explicit CompositeSpace(std::vector<Representation> factors);

    Index dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return factors_.size(); }
    const Representation& factor(std::size_t i) const { return factors_.at(i); }

    // identity (x) ... (x) op (x) ... (x) identity
    OperatorMatrix lift(std::size_t factor_index, const OperatorMatrix& op) const;
    RealVector lift_mask(std::size_t factor_index, const RealVector& mask) const;

    Index flat_index(const std::vector<Index>& factor_indices) const;
    std::vector<Index> unflatten(Index flat) const;

private:
    std::vector<Representation> factors_;
    Index dim_{1};
};

}  // namespace qres
