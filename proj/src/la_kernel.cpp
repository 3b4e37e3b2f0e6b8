#include "kreiss/la_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kreiss/error.hpp"

namespace kreiss {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_matrix: return "invalid-matrix";
    case ErrorKind::factorization_failure: return "factorization-failure";
    case ErrorKind::scaling_failure: return "scaling-failure";
    case ErrorKind::unsolvable_on_boundary: return "unsolvable-on-boundary";
    case ErrorKind::not_unit_triangular: return "not-unit-triangular";
    case ErrorKind::domain: return "domain";
    case ErrorKind::singular_point: return "singular-point";
    case ErrorKind::spec: return "spec";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

CMatrix::CMatrix(Dense m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        std::ostringstream os;
        os << "matrix must be square, got " << m_.rows() << "x" << m_.cols();
        throw Error(ErrorKind::invalid_matrix, os.str());
    }
    if (m_.rows() == 0)
        throw Error(ErrorKind::invalid_matrix, "matrix dimension must be positive");
    if (!m_.allFinite())
        throw Error(ErrorKind::invalid_matrix, "matrix has non-finite entries");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    Dense m(n, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != n)
            throw Error(ErrorKind::invalid_matrix, "ragged initializer for CMatrix");
        Eigen::Index j = 0;
        for (const auto& v : row) m(i, j++) = v;
        ++i;
    }
    *this = CMatrix(std::move(m));
}

CMatrix CMatrix::identity(Eigen::Index n) { return CMatrix(Dense::Identity(n, n)); }

CMatrix CMatrix::zero(Eigen::Index n) { return CMatrix(Dense::Zero(n, n)); }

CMatrix CMatrix::diagonal(std::initializer_list<Complex> values) {
    const auto n = static_cast<Eigen::Index>(values.size());
    Dense m = Dense::Zero(n, n);
    Eigen::Index i = 0;
    for (const auto& v : values) { m(i, i) = v; ++i; }
    return CMatrix(std::move(m));
}

CMatrix CMatrix::jordan(Complex lambda, Eigen::Index k) {
    Dense m = Dense::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        m(i, i) = lambda;
        if (i + 1 < k) m(i, i + 1) = 1.0;
    }
    return CMatrix(std::move(m));
}

CMatrix CMatrix::shifted(Complex s) const {
    Dense m = m_;
    m.diagonal().array() += s;
    return CMatrix(std::move(m));
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
    const auto n = a.n() + b.n();
    Dense m = Dense::Zero(n, n);
    m.topLeftCorner(a.n(), a.n()) = a.dense();
    m.bottomRightCorner(b.n(), b.n()) = b.dense();
    return CMatrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Norms and spectra of Hermitian matrices

double hermitian_eigenvalue_max(const Dense& h) {
    Eigen::SelfAdjointEigenSolver<Dense> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double hermitian_eigenvalue_min(const Dense& h) {
    Eigen::SelfAdjointEigenSolver<Dense> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double spectral_norm(const Dense& a) {
    if (a.size() == 0) return 0.0;
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    // Scaling keeps A* A clear of overflow for large resolvents.
    const Dense b = a / scale;
    const Dense gram = b.adjoint() * b;
    return scale * std::sqrt(std::max(0.0, hermitian_eigenvalue_max(gram)));
}

Eigen::VectorXd singular_values(const Dense& a) {
    Eigen::JacobiSVD<Dense> svd(a);
    return svd.singularValues();
}

double spectral_abscissa(const DenseVector& eigenvalues) {
    double a = -infinity;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) a = std::max(a, eigenvalues[i].real());
    return a;
}

double spectral_radius(const DenseVector& eigenvalues) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) r = std::max(r, std::abs(eigenvalues[i]));
    return r;
}

double margin_tolerance(const Dense& m) { return 1e-8 * (1.0 + spectral_norm(m)); }

// ---------------------------------------------------------------------------
// Schur form with ordering

namespace {

bool precedes(Complex a, Complex b, SchurOrdering ordering, double tie) {
    double ka = 0.0;
    double kb = 0.0;
    switch (ordering) {
    case SchurOrdering::none: return false;
    case SchurOrdering::descending_real_part:
        ka = a.real();
        kb = b.real();
        break;
    case SchurOrdering::descending_modulus:
        ka = std::abs(a);
        kb = std::abs(b);
        break;
    }
    if (std::abs(ka - kb) <= tie) return a.imag() < b.imag();
    return ka > kb;
}

// Exchange the diagonal entries k and k+1 of the triangular factor.
void swap_adjacent(SchurForm& form, Eigen::Index k) {
    Dense& t = form.T;
    const Complex a = t(k, k);
    const Complex b = t(k, k + 1);
    const Complex c = t(k + 1, k + 1);
    if (a == c) return;

    // (b, c - a) spans the eigenvector of the 2x2 block for eigenvalue c.
    Complex x0 = b;
    Complex x1 = c - a;
    const double len = std::hypot(std::abs(x0), std::abs(x1));
    x0 /= len;
    x1 /= len;
    Eigen::Matrix2cd g;
    g << x0, -std::conj(x1), x1, std::conj(x0);

    const Eigen::Index n = t.rows();
    Eigen::MatrixX2cd cols(n, 2);
    cols << t.col(k), t.col(k + 1);
    cols = cols * g;
    t.col(k) = cols.col(0);
    t.col(k + 1) = cols.col(1);

    Eigen::Matrix2Xcd rows(2, n);
    rows << t.row(k), t.row(k + 1);
    rows = g.adjoint() * rows;
    t.row(k) = rows.row(0);
    t.row(k + 1) = rows.row(1);

    Eigen::MatrixX2cd qcols(n, 2);
    qcols << form.Q.col(k), form.Q.col(k + 1);
    qcols = qcols * g;
    form.Q.col(k) = qcols.col(0);
    form.Q.col(k + 1) = qcols.col(1);

    t(k + 1, k) = 0.0;
    t(k, k) = c;
    t(k + 1, k + 1) = a;
}

} // namespace

void reorder_schur(SchurForm& form, SchurOrdering ordering, double tie_tolerance) {
    form.ordering = ordering;
    if (ordering == SchurOrdering::none) return;
    const Eigen::Index n = form.T.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index best = i;
        for (Eigen::Index q = i + 1; q < n; ++q)
            if (precedes(form.T(q, q), form.T(best, best), ordering, tie_tolerance)) best = q;
        for (Eigen::Index k = best; k > i; --k) swap_adjacent(form, k - 1);
    }
}

SchurForm schur(const CMatrix& a, SchurOrdering ordering) {
    Eigen::ComplexSchur<Dense> cs(a.n());
    cs.compute(a.dense());
    if (cs.info() != Eigen::Success)
        throw Error(ErrorKind::factorization_failure, "complex Schur iteration did not converge");
    SchurForm form{cs.matrixU(), cs.matrixT(), SchurOrdering::none};
    form.T.triangularView<Eigen::StrictlyLower>().setZero();
    reorder_schur(form, ordering, 1e-12 * spectral_norm(a));
    return form;
}

// ---------------------------------------------------------------------------
// Matrix exponential: scaling and squaring with the degree-13 Pade approximant.

Dense expm(const Dense& a) {
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const Eigen::Index n = a.rows();
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(norm1))
        throw Error(ErrorKind::scaling_failure, "expm: non-finite input norm");
    int s = 0;
    if (norm1 > theta13) s = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    if (s > 1000) throw Error(ErrorKind::scaling_failure, "expm: norm too large to scale");

    const Dense x = a / std::ldexp(1.0, s);
    const Dense id = Dense::Identity(n, n);
    const Dense x2 = x * x;
    const Dense x4 = x2 * x2;
    const Dense x6 = x4 * x2;
    const Dense u = x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 +
                         b[3] * x2 + b[1] * id);
    const Dense v = x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 +
                    b[2] * x2 + b[0] * id;
    Dense f = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < s; ++i) f = f * f;
    if (!f.allFinite()) throw Error(ErrorKind::scaling_failure, "expm: result overflowed");
    return f;
}

CMatrix expm(const CMatrix& a) { return CMatrix(expm(a.dense())); }

// ---------------------------------------------------------------------------
// Lyapunov and Stein equations by triangular (Bartels-Stewart) substitution.

CMatrix solve_lyapunov_continuous(const CMatrix& m) {
    const SchurForm form = schur(m);
    const double tol = margin_tolerance(m.dense());
    if (spectral_abscissa(form.eigenvalues()) >= -tol)
        throw Error(ErrorKind::unsolvable_on_boundary,
                    "Lyapunov equation needs spectral abscissa < 0 (eigenvalue at or right of the "
                    "imaginary axis)");
    const Dense& t = form.T;
    const Eigen::Index n = t.rows();
    // X T + T* X = -I, with X = Q* H Q.
    Dense x = Dense::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex rhs = (i == j) ? Complex(-1.0) : Complex(0.0);
            for (Eigen::Index k = 0; k < j; ++k) rhs -= x(i, k) * t(k, j);
            for (Eigen::Index k = 0; k < i; ++k) rhs -= std::conj(t(k, i)) * x(k, j);
            x(i, j) = rhs / (t(j, j) + std::conj(t(i, i)));
        }
    }
    Dense h = form.Q * x * form.Q.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    return CMatrix(std::move(h));
}

CMatrix solve_stein_discrete(const CMatrix& m) {
    const SchurForm form = schur(m);
    const double tol = margin_tolerance(m.dense());
    if (spectral_radius(form.eigenvalues()) >= 1.0 - tol)
        throw Error(ErrorKind::unsolvable_on_boundary,
                    "Stein equation needs spectral radius < 1 (eigenvalue on or outside the unit "
                    "circle)");
    const Dense& t = form.T;
    const Eigen::Index n = t.rows();
    // X - T* X T = I, with X = Q* H Q.
    Dense x = Dense::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex rhs = (i == j) ? Complex(1.0) : Complex(0.0);
            for (Eigen::Index k = 0; k <= i; ++k) {
                Complex acc = 0.0;
                for (Eigen::Index l = 0; l <= j; ++l) {
                    if (k == i && l == j) continue;
                    acc += x(k, l) * t(l, j);
                }
                rhs += std::conj(t(k, i)) * acc;
            }
            x(i, j) = rhs / (1.0 - std::conj(t(i, i)) * t(j, j));
        }
    }
    Dense h = form.Q * x * form.Q.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    return CMatrix(std::move(h));
}

// ---------------------------------------------------------------------------
// Unit upper triangular inverse as a product of rank-one eliminations.

Dense UnitTriFactorization::assemble() const {
    Dense p = Dense::Identity(n, n);
    for (const auto& f : factors) p.col(f.column) -= p * f.u;
    return p;
}

UnitTriInverse unit_tri_inverse_factored(const CMatrix& a) {
    const Dense& m = a.dense();
    const Eigen::Index n = a.n();
    const double tol = 1e-12 * std::max(1.0, spectral_norm(m));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(m(i, i) - 1.0) > tol)
            throw Error(ErrorKind::not_unit_triangular, "diagonal entry differs from 1");
        for (Eigen::Index j = 0; j < i; ++j)
            if (std::abs(m(i, j)) > tol)
                throw Error(ErrorKind::not_unit_triangular, "entry below the diagonal is nonzero");
    }
    UnitTriFactorization fac;
    fac.n = n;
    for (Eigen::Index j = 1; j < n; ++j) {
        DenseVector u = DenseVector::Zero(n);
        u.head(j) = m.col(j).head(j);
        if (u.isZero(0.0)) continue;
        fac.factors.push_back({j, std::move(u)});
    }
    Dense inv = fac.assemble();
    return {std::move(fac), CMatrix(std::move(inv))};
}

double unit_tri_bound(int n, double alpha) {
    if (n < 1) throw Error(ErrorKind::domain, "unit_tri_bound: n must be positive");
    if (!(alpha >= 1.0))
        throw Error(ErrorKind::domain, "unit_tri_bound: alpha must be >= 1 (|A| >= 1 for unit "
                                       "triangular A)");
    return std::pow(static_cast<double>(n) * alpha, n - 1);
}

} // namespace kreiss
