#include "qres/operator.hpp"

#include <string>

namespace qres {

OperatorMatrix::OperatorMatrix(Matrix m, bool hermitian) : entries_(std::move(m)), hermitian_(hermitian)
{
    if (entries_.rows() != entries_.cols()) {
        throw DimensionError("operator matrix must be square");
    }
}

OperatorMatrix OperatorMatrix::zero(Index dim)
{
    if (dim <= 0) throw DimensionError("operator dimension must be positive");
    return OperatorMatrix(Matrix::Zero(dim, dim), true);
}

OperatorMatrix OperatorMatrix::identity(Index dim)
{
    if (dim <= 0) throw DimensionError("operator dimension must be positive");
    return OperatorMatrix(Matrix::Identity(dim, dim), true);
}

OperatorMatrix OperatorMatrix::diagonal(const RealVector& d)
{
    if (d.size() <= 0) throw DimensionError("operator dimension must be positive");
    return OperatorMatrix(d.cast<cplx>().asDiagonal().toDenseMatrix(), true);
}

OperatorMatrix OperatorMatrix::make_hermitian(const Matrix& m)
{
    OperatorMatrix out(m, false);
    const double defect = out.hermiticity_defect();
    if (defect > kHermitianTol * m.norm()) {
        throw Error("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    Matrix sym = 0.5 * (m + m.adjoint());
    return OperatorMatrix(std::move(sym), true);
}

OperatorMatrix OperatorMatrix::adjoint() const
{
    return OperatorMatrix(entries_.adjoint(), hermitian_);
}

double OperatorMatrix::max_abs() const
{
    return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

double OperatorMatrix::hermiticity_defect() const
{
    return entries_.size() == 0 ? 0.0 : (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

bool OperatorMatrix::is_anti_hermitian(double rel_tol) const
{
    if (entries_.size() == 0) return true;
    const double defect = (entries_ + entries_.adjoint()).cwiseAbs().maxCoeff();
    return defect <= rel_tol * entries_.norm();
}

OperatorMatrix OperatorMatrix::masked(const RealVector& mask) const
{
    if (mask.size() != dim()) throw DimensionError("mask size does not match operator dimension");
    const auto p = mask.cast<cplx>().asDiagonal();
    Matrix m = p * entries_ * p;
    return OperatorMatrix(std::move(m), hermitian_);
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& o)
{
    require_same_dim(*this, o, "operator+");
    entries_ += o.entries_;
    hermitian_ = hermitian_ && o.hermitian_;
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& o)
{
    require_same_dim(*this, o, "operator-");
    entries_ -= o.entries_;
    hermitian_ = hermitian_ && o.hermitian_;
    return *this;
}

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b, const char* what)
{
    if (a.dim() != b.dim()) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                             " vs " + std::to_string(b.dim()) + ")");
    }
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b)
{
    OperatorMatrix r = a;
    r += b;
    return r;
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b)
{
    OperatorMatrix r = a;
    r -= b;
    return r;
}

OperatorMatrix operator-(const OperatorMatrix& a)
{
    return OperatorMatrix(-a.matrix(), a.is_hermitian());
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b)
{
    require_same_dim(a, b, "operator*");
    return OperatorMatrix(a.matrix() * b.matrix(), false);
}

OperatorMatrix operator*(double s, const OperatorMatrix& a)
{
    return OperatorMatrix(s * a.matrix(), a.is_hermitian());
}

OperatorMatrix operator*(cplx s, const OperatorMatrix& a)
{
    return OperatorMatrix(s * a.matrix(), a.is_hermitian() && s.imag() == 0.0);
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b)
{
    require_same_dim(a, b, "commutator");
    return OperatorMatrix(a.matrix() * b.matrix() - b.matrix() * a.matrix(), false);
}

OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b)
{
    const Index na = a.dim();
    const Index nb = b.dim();
    Matrix out(na * nb, na * nb);
    for (Index i = 0; i < na; ++i) {
        for (Index j = 0; j < na; ++j) {
            out.block(i * nb, j * nb, nb, nb) = a.matrix()(i, j) * b.matrix();
        }
    }
    return OperatorMatrix(std::move(out), a.is_hermitian() && b.is_hermitian());
}

OperatorMatrix power(const OperatorMatrix& a, int n)
{
    if (n < 0) throw Error("negative operator power");
    OperatorMatrix r = OperatorMatrix::identity(a.dim());
    for (int i = 0; i < n; ++i) r = r * a;
    return OperatorMatrix(r.matrix(), a.is_hermitian());
}

OperatorMatrix plus_hc(const OperatorMatrix& a)
{
    return OperatorMatrix(a.matrix() + a.matrix().adjoint(), true);
}

double distance(const OperatorMatrix& a, const OperatorMatrix& b)
{
    require_same_dim(a, b, "distance");
    return (a.matrix() - b.matrix()).norm();
}

}  // namespace qres
