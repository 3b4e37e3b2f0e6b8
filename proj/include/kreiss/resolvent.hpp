#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "kreiss/la_kernel.hpp"

namespace kreiss {

/// Resolvent evaluation through a cached Schur form: |(zI - M)^-1| equals
/// |(zI - T)^-1| for M = Q T Q*, so each point costs one triangular inverse.
class ResolventEvaluator {
public:
    explicit ResolventEvaluator(const CMatrix& m);

    /// Spectral norm of (zI - M)^-1. Throws singular_point when the
    /// condition estimate of zI - M exceeds 1e14.
    double norm(Complex z) const;

    /// (zI - M)^-1 rhs.
    DenseVector solve(Complex z, const DenseVector& rhs) const;

    const DenseVector& eigenvalues() const noexcept { return eigenvalues_; }
    Eigen::Index n() const noexcept { return t_.rows(); }
    double matrix_norm() const noexcept { return norm_; }

private:
    Dense q_;
    Dense t_;
    DenseVector eigenvalues_;
    double norm_ = 0.0;
};

inline constexpr double singular_condition_limit = 1e14;

double resolvent_norm(const CMatrix& m, Complex z);

/// (zI - J)^-1 for the Jordan block J = lambda I + N of size k, from the
/// finite Neumann sum of powers of N.
CMatrix jordan_resolvent(Complex lambda, int k, Complex z);

struct RatioSample {
    Complex z;
    double resolvent_norm = 0.0;
    double denominator = 0.0;  // max |z - lambda|^-1 over the relevant eigenvalues
    double min_distance = 0.0; // min |z - lambda|, the reciprocal of the denominator
    double ratio = 0.0;        // +inf when the relevant set is empty

    bool infinite() const noexcept { return ratio == infinity; }
};

/// |R(z)| * min over `excluded` of |z - lambda|, for Re z > 0.
RatioSample ratio_continuous(const ResolventEvaluator& ev, Complex z, std::span<const Complex> excluded);
RatioSample ratio_continuous(const CMatrix& m, Complex z, std::span<const Complex> excluded);

/// |R(z)| * min over the whole spectrum of |z - lambda|, for |z| > 1.
RatioSample ratio_discrete(const ResolventEvaluator& ev, Complex z);
RatioSample ratio_discrete(const CMatrix& m, Complex z);

/// max over eigenvalues of |Re lambda| / |z - lambda|; the S(M, r) test is value <= 1/r.
double region_S_value(std::span<const Complex> eigenvalues, Complex z);
/// max over eigenvalues of (1 - |lambda|) / |z - lambda|.
double region_T_value(std::span<const Complex> eigenvalues, Complex z);

bool region_S_membership(const CMatrix& m, Complex z, double r);
bool region_T_membership(const CMatrix& m, Complex z, double r);
bool region_S_membership(std::span<const Complex> eigenvalues, Complex z, double r);
bool region_T_membership(std::span<const Complex> eigenvalues, Complex z, double r);

struct GridSpec {
    double re_min = -1.0;
    double re_max = 1.0;
    double im_min = -1.0;
    double im_max = 1.0;
    int re_count = 2;
    int im_count = 2;

    void validate() const;
    double re_at(int i) const;
    double im_at(int j) const;
    std::size_t size() const { return static_cast<std::size_t>(re_count) * static_cast<std::size_t>(im_count); }
};

enum class CellFlag { ok, outside_half_plane, singular };

const char* to_string(CellFlag flag);

struct GridCell {
    Complex z;
    double resolvent_norm = 0.0; // +inf on singular cells
    double ratio = 0.0;          // NaN where undefined
    CellFlag flag = CellFlag::ok;
};

/// Row-major samples: the imaginary coordinate indexes rows, the real
/// coordinate varies fastest. Cells within 1e-12 of an eigenvalue are
/// flagged singular instead of evaluated.
std::vector<GridCell> resolvent_grid(const CMatrix& m, const GridSpec& spec);
/// Single-threaded reference for resolvent_grid.
std::vector<GridCell> resolvent_grid_serial(const CMatrix& m, const GridSpec& spec);

void write_grid_csv(std::ostream& os, std::span<const GridCell> cells);

} // namespace kreiss
