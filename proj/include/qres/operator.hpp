// operator.hpp — dense complex operator matrices with a Hermiticity tag

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qres {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Relative tolerance used for the Hermiticity tag.
inline constexpr double kHermitianTol = 1e-12;

// A square complex matrix together with a flag recording whether it is
// Hermitian. Arithmetic keeps the flag only where it is implied by the
// operands (sums of Hermitians, real multiples of a Hermitian).
class OperatorMatrix {
public:
    OperatorMatrix() = default;
    explicit OperatorMatrix(Matrix m, bool hermitian = false);

    static OperatorMatrix zero(Index dim);
    static OperatorMatrix identity(Index dim);
    static OperatorMatrix diagonal(const RealVector& d);

    // Checks Hermiticity to kHermitianTol * ||m|| and symmetrizes.
    static OperatorMatrix make_hermitian(const Matrix& m);

    Index dim() const noexcept { return entries_.rows(); }
    const Matrix& matrix() const noexcept { return entries_; }
    bool is_hermitian() const noexcept { return hermitian_; }

    OperatorMatrix adjoint() const;
    OperatorMatrix as_hermitian() const { return make_hermitian(entries_); }

    double norm() const { return entries_.norm(); }  // Frobenius
    double max_abs() const;
    double hermiticity_defect() const;
    bool is_anti_hermitian(double rel_tol = kHermitianTol) const;

    // Restriction P M P for a 0/1 diagonal mask.
    OperatorMatrix masked(const RealVector& mask) const;

    OperatorMatrix& operator+=(const OperatorMatrix& o);
    OperatorMatrix& operator-=(const OperatorMatrix& o);

private:
    Matrix entries_;
    bool hermitian_{false};
};

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(double s, const OperatorMatrix& a);
OperatorMatrix operator*(cplx s, const OperatorMatrix& a);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix power(const OperatorMatrix& a, int n);

// A + A^dagger, tagged Hermitian.
OperatorMatrix plus_hc(const OperatorMatrix& a);

double distance(const OperatorMatrix& a, const OperatorMatrix& b);

void require_same_dim(const OperatorMatrix& a, const OperatorMatrix& b, const char* what);

}  // namespace qres
