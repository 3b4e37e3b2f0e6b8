#pragma once

#include <span>
#include <string>
#include <vector>

#include "kreiss/constants.hpp"

namespace kreiss {

struct ScalingProfileEntry {
    double eps;
    double K31;
    double K32;
};

/// Similarity S bringing M to ordered upper-triangular T = S M S^-1, with
/// the measured constants of the third Kreiss condition. In discrete mode the
/// ordering is by modulus and the entry bound is |b_ij| <= K32 (1 - |b_ii|).
struct Condition3Certificate {
    Mode mode = Mode::continuous;
    double scaling_eps = 1.0;
    Dense S;
    Dense S_inv;
    Dense T;
    double K31 = 0.0;   // |S| + |S^-1|
    double K32 = 0.0;   // may be +inf
    double kappa_S = 0.0;
    double reconstruction_residual = 0.0; // |S M S^-1 - T|
    bool ordering_valid = false;
    bool triangular_valid = false;
    bool diagonal_sign_valid = false;
    std::vector<ScalingProfileEntry> scaling_profile; // eps in {1, 1e-1, 1e-2}

    bool valid() const { return ordering_valid && triangular_valid && diagonal_sign_valid; }
};

/// Ordered Schur form followed by the diagonal scaling diag(1, eps, eps^2, ...)
/// that multiplies T_ij by eps^(j-i).
Condition3Certificate build_condition3(const CMatrix& m, Mode mode, double scaling_eps = 1.0);

/// K32 measured on a triangular matrix: max over i < j of |b_ij| / w_ii with
/// w_ii = |Re b_ii| (continuous) or 1 - |b_ii| (discrete); 0/0 counts as 0
/// and nonzero/0 as +inf.
double measure_K32(const Dense& t, Mode mode);

struct ConstraintCheck {
    std::string name;
    bool pass = false;
    double slack = 0.0; // >= 0 when the constraint holds
};

struct Condition3Verification {
    std::vector<ConstraintCheck> checks;
    bool all_pass = false;

    const ConstraintCheck& check(const std::string& name) const;
};

Condition3Verification verify_condition3(const CMatrix& m, const Condition3Certificate& cert, double K31_claim,
                                         double K32_claim);

struct Condition4Certificate {
    Mode mode = Mode::continuous;
    Dense H;
    double K4 = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double negativity_residual = 0.0; // lambda_max(HM + M*H) or lambda_max(M*HM - H)
    double residual_tolerance = 0.0;
    bool valid = false;
};

/// Hermitian H from the Lyapunov (continuous) or Stein (discrete) equation,
/// rescaled by 1/sqrt(lambda_max lambda_min) so that K4 = sqrt(lambda_max / lambda_min).
Condition4Certificate build_condition4(const CMatrix& m, Mode mode);

/// C := (n^2 max(1, K32))^(n-1) bounds |(I - (zI - D)^-1 N)^-1|.
double unit_triangular_constant(int n, double K32);

/// K31^2 C / 4, the explicit bound on the calK functional. Continuous mode only.
double bound_from_condition3(const Condition3Certificate& cert);

/// K31^2 C / 4 * (1 + 1/r)^(n-1), valid on S(M, r) (continuous) or T(M, r) (discrete).
double miller_region_bound(const Condition3Certificate& cert, double r);

enum class Denominator { full_spectrum, excluded };

struct InequalitySample {
    Complex z;
    double resolvent_norm = 0.0;
    double denominator = 0.0;
    double slack = 0.0; // K * denominator - resolvent_norm
    bool singular = false;
    bool violation = false;
};

struct InequalityReport {
    double K = 0.0;
    Denominator denominator = Denominator::full_spectrum;
    std::vector<InequalitySample> samples;
    int violations = 0;
    int singular = 0;
};

/// |(zI - M)^-1| <= K max |z - lambda|^-1 at every sample; violations are
/// negative slack beyond 1e-8 relative.
InequalityReport check_resolvent_inequality(const CMatrix& m, double K, std::span<const Complex> samples,
                                            Denominator denominator);

} // namespace kreiss
