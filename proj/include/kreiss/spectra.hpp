#pragma once

#include <optional>
#include <vector>

#include "kreiss/la_kernel.hpp"

namespace kreiss {

/// One numerically distinct eigenvalue with its estimated Jordan structure.
struct EigenCluster {
    Complex value;
    int algebraic_multiplicity = 1;
    int max_block_size = 1;
};

struct SpectrumReport {
    std::vector<EigenCluster> eigenvalues; // descending real part, ties by ascending imag
    DenseVector schur_diagonal;            // unclustered eigenvalues
    double cluster_tolerance = 0.0;        // also the imaginary-axis tolerance
    double abscissa = 0.0;
    double radius = 0.0;
    double matrix_norm = 0.0;
};

enum class InstabilityReason { positive_real_part, defective_on_axis };

const char* to_string(InstabilityReason reason);

struct StabilityWitness {
    Complex eigenvalue;
    InstabilityReason reason;
    int block_size = 1;
};

struct StabilityVerdict {
    bool quasi_stable = true;
    std::optional<StabilityWitness> witness;
    double tolerance = 0.0;      // relative tolerance requested
    double axis_tolerance = 0.0; // tolerance * (1 + |M|)
};

inline constexpr double default_relative_tolerance = 1e-8;

double default_cluster_tolerance(const CMatrix& m);

/// Eigenvalues from the Schur diagonal, clustered, with block sizes from the
/// numerical ranks of (M - lambda I)^k.
///
/// Perturbed Jordan blocks split their eigenvalue by roughly tol^(1/k), so
/// clustering starts coarse (radius tol^(1/n)) and a candidate cluster of m
/// eigenvalues is accepted only when (M - mean I)^m has numerical nullity m.
/// Rejected clusters are split at the next finer radius, ending at tol.
SpectrumReport spectrum(const CMatrix& m, std::optional<double> cluster_tol = std::nullopt);

StabilityVerdict classify_quasi_stable(const CMatrix& m, double tol = default_relative_tolerance);
StabilityVerdict classify_quasi_stable(const SpectrumReport& report, double tol);

/// Eigenvalues outside the open right half-plane, axis tolerance included.
std::vector<Complex> boundary_excluded_spectrum(const SpectrumReport& report);

std::vector<Complex> cluster_values(const SpectrumReport& report);

} // namespace kreiss

namespace kreiss {

/// Discrete analog of classify_quasi_stable: every |lambda| <= 1 + tol and
/// eigenvalues within tol of the unit circle have block size 1.
StabilityVerdict classify_power_bounded(const SpectrumReport& report, double tol);
StabilityVerdict classify_power_bounded(const CMatrix& m, double tol = default_relative_tolerance);

} // namespace kreiss
