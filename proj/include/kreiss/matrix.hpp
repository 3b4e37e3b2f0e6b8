#pragma once

#include <complex>
#include <initializer_list>
#include <limits>

#include <Eigen/Dense>

namespace kreiss {

using Complex = std::complex<double>;
using Dense = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Dense complex square matrix with finite entries.
///
/// Construction validates shape and finiteness; after that the value is
/// immutable and cheap to share between threads.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(Dense m);
    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static CMatrix identity(Eigen::Index n);
    static CMatrix zero(Eigen::Index n);
    static CMatrix diagonal(std::initializer_list<Complex> values);
    /// Jordan block lambda*I + N of size k.
    static CMatrix jordan(Complex lambda, Eigen::Index k);

    Eigen::Index n() const noexcept { return m_.rows(); }
    const Dense& dense() const noexcept { return m_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    CMatrix adjoint() const { return CMatrix(Dense(m_.adjoint())); }
    CMatrix scaled(Complex s) const { return CMatrix(Dense(s * m_)); }
    CMatrix shifted(Complex s) const;

private:
    Dense m_;
};

/// Block-diagonal assembly, used by families and tests.
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

} // namespace kreiss
