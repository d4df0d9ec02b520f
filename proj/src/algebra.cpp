#include "qres/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qres {

// ---------------------------------------------------------------- phi

StructuralFunction::StructuralFunction(std::vector<double> coefficients, bool euclidean)
    : coeffs_(std::move(coefficients)), euclidean_(euclidean)
{
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

StructuralFunction StructuralFunction::boson()
{
    return StructuralFunction({0.0, 1.0});
}

StructuralFunction StructuralFunction::spin(int atoms)
{
    const double s = 0.5 * atoms;
    return StructuralFunction({(1.0 + s) * s, 1.0, -1.0});
}

StructuralFunction StructuralFunction::euclidean()
{
    return StructuralFunction({1.0}, true);
}

double StructuralFunction::operator()(double z) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double StructuralFunction::nabla(double z, int order) const
{
    if (order < 0) throw Error("negative difference order");
    // sum_j (-1)^j C(order, j) phi(z + j)
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
        acc += ((j % 2) ? -binom : binom) * (*this)(z + j);
        binom = binom * (order - j) / (j + 1);
    }
    return acc;
}

int StructuralFunction::degree() const
{
    if (coeffs_.size() == 1 && coeffs_[0] == 0.0) return -1;
    return static_cast<int>(coeffs_.size()) - 1;
}

// ---------------------------------------------------------------- representations

std::string to_string(RepKind kind)
{
    switch (kind) {
    case RepKind::boson: return "boson";
    case RepKind::spin: return "spin";
    case RepKind::symmetric_uN: return "symmetric_uN";
    case RepKind::euclid: return "euclid";
    }
    return "unknown";
}

namespace {

void occupations_rec(int levels, int remaining, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    const auto pos = static_cast<int>(cur.size());
    if (pos == levels - 1) {
        cur.push_back(remaining);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int n = 0; n <= remaining; ++n) {
        cur.push_back(n);
        occupations_rec(levels, remaining - n, cur, out);
        cur.pop_back();
    }
}

}  // namespace

Representation::Representation(RepKind kind, int param, int levels) : kind_(kind), param_(param), levels_(levels)
{
    if (kind_ == RepKind::symmetric_uN) {
        std::vector<int> cur;
        occupations_rec(levels_, param_, cur, occupations_);
        std::sort(occupations_.begin(), occupations_.end());
    }
}

Representation Representation::boson(int n_max)
{
    if (n_max < 0) throw DimensionError("boson truncation n_max must be >= 0");
    return Representation(RepKind::boson, n_max, 0);
}

Representation Representation::spin(int atoms)
{
    if (atoms < 1) throw DimensionError("spin representation needs A >= 1");
    return Representation(RepKind::spin, atoms, 2);
}

Representation Representation::symmetric_uN(int levels, int atoms)
{
    if (levels < 1) throw DimensionError("u(N) representation needs N >= 1");
    if (atoms < 1) throw DimensionError("u(N) representation needs A >= 1");
    return Representation(RepKind::symmetric_uN, atoms, levels);
}

Representation Representation::euclid(int m)
{
    if (m < 0) throw DimensionError("Euclidean truncation M must be >= 0");
    return Representation(RepKind::euclid, m, 0);
}

Index Representation::dim() const
{
    switch (kind_) {
    case RepKind::boson: return param_ + 1;
    case RepKind::spin: return param_ + 1;
    case RepKind::euclid: return 2 * param_ + 1;
    case RepKind::symmetric_uN: return static_cast<Index>(occupations_.size());
    }
    return 0;
}

std::vector<double> Representation::labels() const
{
    std::vector<double> out;
    switch (kind_) {
    case RepKind::boson:
        for (int n = 0; n <= param_; ++n) out.push_back(n);
        break;
    case RepKind::spin:
        for (int i = 0; i <= param_; ++i) out.push_back(-0.5 * param_ + i);
        break;
    case RepKind::euclid:
        for (int n = -param_; n <= param_; ++n) out.push_back(n);
        break;
    case RepKind::symmetric_uN:
        if (levels_ != 2) throw Error("X0 labels are only defined for u(2) symmetric irreps");
        for (const auto& occ : occupations_) out.push_back(0.5 * (occ[1] - occ[0]));
        break;
    }
    return out;
}

const std::vector<std::vector<int>>& Representation::occupations() const
{
    if (kind_ != RepKind::symmetric_uN) throw Error("occupations requested for non-u(N) representation");
    return occupations_;
}

Index Representation::occupation_index(const std::vector<int>& occ) const
{
    const auto& occs = occupations();
    auto it = std::lower_bound(occs.begin(), occs.end(), occ);
    if (it == occs.end() || *it != occ) return -1;
    return static_cast<Index>(it - occs.begin());
}

// ---------------------------------------------------------------- ladders

OperatorMatrix Ladder::phi_of_x0(double shift) const
{
    RealVector d(static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) d(static_cast<Index>(i)) = phi(labels[i] + shift);
    return OperatorMatrix::diagonal(d);
}

namespace {

Ladder shift_ladder(const std::vector<double>& labels, const std::vector<double>& up_elements, StructuralFunction phi)
{
    // up_elements[i] = <i+1| X+ |i>
    const auto n = static_cast<Index>(labels.size());
    Matrix xp = Matrix::Zero(n, n);
    for (Index i = 0; i + 1 < n; ++i) xp(i + 1, i) = up_elements[static_cast<std::size_t>(i)];
    RealVector x0(n);
    for (Index i = 0; i < n; ++i) x0(i) = labels[static_cast<std::size_t>(i)];

    Ladder out;
    out.x0 = OperatorMatrix::diagonal(x0);
    out.xplus = OperatorMatrix(xp, false);
    out.xminus = out.xplus.adjoint();
    out.phi = std::move(phi);
    out.interior = RealVector::Ones(n);
    out.labels = labels;
    return out;
}

}  // namespace

Ladder build_ladder(const Representation& rep)
{
    switch (rep.kind()) {
    case RepKind::boson: {
        const int n_max = rep.size_parameter();
        std::vector<double> up;
        for (int n = 0; n < n_max; ++n) up.push_back(std::sqrt(n + 1.0));
        Ladder l = shift_ladder(rep.labels(), up, StructuralFunction::boson());
        l.interior(n_max) = 0.0;
        return l;
    }
    case RepKind::spin: {
        const double s = 0.5 * rep.size_parameter();
        const auto labels = rep.labels();
        std::vector<double> up;
        for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
            const double m = labels[i];
            up.push_back(std::sqrt(s * (s + 1.0) - m * (m + 1.0)));
        }
        return shift_ladder(labels, up, StructuralFunction::spin(rep.size_parameter()));
    }
    case RepKind::euclid: {
        const auto labels = rep.labels();
        std::vector<double> up(labels.size() > 0 ? labels.size() - 1 : 0, 1.0);
        Ladder l = shift_ladder(labels, up, StructuralFunction::euclidean());
        l.interior(0) = 0.0;
        l.interior(l.interior.size() - 1) = 0.0;
        return l;
    }
    case RepKind::symmetric_uN: {
        if (rep.levels() != 2) {
            throw Error("ladder triple is defined for u(2) symmetric irreps only; use collective_uN for N > 2");
        }
        Ladder l;
        const auto labels = rep.labels();
        RealVector x0(rep.dim());
        for (Index i = 0; i < rep.dim(); ++i) x0(i) = labels[static_cast<std::size_t>(i)];
        l.x0 = OperatorMatrix::diagonal(x0);
        l.xplus = collective_uN(rep, 1, 2);
        l.xminus = l.xplus.adjoint();
        l.phi = StructuralFunction::spin(rep.size_parameter());
        l.interior = RealVector::Ones(rep.dim());
        l.labels = labels;
        return l;
    }
    }
    throw Error("unknown representation kind");
}

OperatorMatrix collective_uN(const Representation& rep, int i, int j)
{
    if (rep.kind() != RepKind::symmetric_uN) throw Error("collective_uN requires a symmetric u(N) representation");
    const int levels = rep.levels();
    if (i < 1 || i > levels || j < 1 || j > levels) {
        throw Error("collective_uN: level indices must lie in 1.." + std::to_string(levels));
    }
    const auto& occs = rep.occupations();
    const Index n = rep.dim();
    Matrix m = Matrix::Zero(n, n);
    const auto ii = static_cast<std::size_t>(i - 1);
    const auto jj = static_cast<std::size_t>(j - 1);
    for (Index col = 0; col < n; ++col) {
        const auto& occ = occs[static_cast<std::size_t>(col)];
        if (i == j) {
            m(col, col) = occ[ii];
            continue;
        }
        if (occ[ii] == 0) continue;
        auto target = occ;
        target[ii] -= 1;
        target[jj] += 1;
        const Index row = rep.occupation_index(target);
        m(row, col) = std::sqrt(static_cast<double>(occ[ii]) * (occ[jj] + 1));
    }
    return OperatorMatrix(std::move(m), i == j);
}

// ---------------------------------------------------------------- composite

CompositeSpace::CompositeSpace(std::vector<Representation> factors) : factors_(std::move(factors))
{
    if (factors_.empty()) throw DimensionError("composite space needs at least one factor");
    for (const auto& f : factors_) dim_ *= f.dim();
}

OperatorMatrix CompositeSpace::lift(std::size_t factor_index, const OperatorMatrix& op) const
{
    if (factor_index >= factors_.size()) throw DimensionError("lift: factor index out of range");
    if (op.dim() != factors_[factor_index].dim()) throw DimensionError("lift: operator does not match factor dimension");
    OperatorMatrix out = OperatorMatrix::identity(1);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const OperatorMatrix& piece = (i == factor_index) ? op : OperatorMatrix::identity(factors_[i].dim());
        out = kron(out, piece);
    }
    return OperatorMatrix(out.matrix(), op.is_hermitian());
}

RealVector CompositeSpace::lift_mask(std::size_t factor_index, const RealVector& mask) const
{
    const OperatorMatrix lifted = lift(factor_index, OperatorMatrix::diagonal(mask));
    return lifted.matrix().diagonal().real();
}

Index CompositeSpace::flat_index(const std::vector<Index>& idx) const
{
    if (idx.size() != factors_.size()) throw DimensionError("flat_index: wrong number of factor indices");
    Index flat = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= factors_[i].dim()) throw DimensionError("flat_index: index out of range");
        flat = flat * factors_[i].dim() + idx[i];
    }
    return flat;
}

std::vector<Index> CompositeSpace::unflatten(Index flat) const
{
    std::vector<Index> idx(factors_.size());
    for (std::size_t k = factors_.size(); k-- > 0;) {
        idx[k] = flat % factors_[k].dim();
        flat /= factors_[k].dim();
    }
    return idx;
}

}  // namespace qres
