#pragma once

#include <vector>

#include "kreiss/matrix.hpp"

namespace kreiss {

enum class SchurOrdering { none, descending_real_part, descending_modulus };

struct SchurForm {
    Dense Q; // unitary
    Dense T; // upper triangular, A = Q T Q*
    SchurOrdering ordering = SchurOrdering::none;

    DenseVector eigenvalues() const { return T.diagonal(); }
};

/// One factor (I - u_j e_j^T) of the unit-triangular inverse. `u` has zero
/// entries at rows >= column.
struct RankOneFactor {
    Eigen::Index column;
    DenseVector u;
};

struct UnitTriFactorization {
    Eigen::Index n = 0;
    std::vector<RankOneFactor> factors; // ordered j = 2..n, zero columns omitted

    Dense assemble() const;
};

double spectral_norm(const Dense& a);
inline double spectral_norm(const CMatrix& a) { return spectral_norm(a.dense()); }

/// Singular values in descending order.
Eigen::VectorXd singular_values(const Dense& a);

/// Largest eigenvalue of a Hermitian matrix (smallest with `smallest`).
double hermitian_eigenvalue_max(const Dense& h);
double hermitian_eigenvalue_min(const Dense& h);

SchurForm schur(const CMatrix& a, SchurOrdering ordering = SchurOrdering::none);

/// Reorder an existing Schur form in place with unitary adjacent swaps.
void reorder_schur(SchurForm& form, SchurOrdering ordering, double tie_tolerance);

CMatrix expm(const CMatrix& a);
Dense expm(const Dense& a);

/// H with H M + M* H = -I. Requires spectral abscissa < -1e-8 (1 + |M|).
CMatrix solve_lyapunov_continuous(const CMatrix& m);

/// H with H - M* H M = I. Requires spectral radius < 1 - 1e-8 (1 + |M|).
CMatrix solve_stein_discrete(const CMatrix& m);

struct UnitTriInverse {
    UnitTriFactorization factorization;
    CMatrix inverse;
};

UnitTriInverse unit_tri_inverse_factored(const CMatrix& a);

/// (n alpha)^(n-1); the inverse bound for unit upper triangular A with |A| <= alpha.
double unit_tri_bound(int n, double alpha);

/// Stability-margin tolerance shared by the Lyapunov/Stein preconditions.
double margin_tolerance(const Dense& m);

double spectral_abscissa(const DenseVector& eigenvalues);
double spectral_radius(const DenseVector& eigenvalues);

} // namespace kreiss
