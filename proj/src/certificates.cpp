#include "kreiss/certificates.hpp"

#include <algorithm>
#include <cmath>

#include "kreiss/error.hpp"

namespace kreiss {

namespace {

double ordering_key(Complex b, Mode mode) { return mode == Mode::continuous ? b.real() : std::abs(b); }

double diagonal_weight(Complex b, Mode mode) {
    return mode == Mode::continuous ? std::abs(b.real()) : 1.0 - std::abs(b);
}

double max_strict_lower(const Dense& t) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < t.rows(); ++i)
        for (Eigen::Index j = 0; j < i; ++j) worst = std::max(worst, std::abs(t(i, j)));
    return worst;
}

// Smallest consecutive key drop plus tie allowance; >= 0 means ordered.
double ordering_slack(const Dense& t, Mode mode, double tie) {
    double slack = infinity;
    for (Eigen::Index i = 0; i + 1 < t.rows(); ++i)
        slack = std::min(slack, ordering_key(t(i, i), mode) - ordering_key(t(i + 1, i + 1), mode) + tie);
    return slack;
}

// 0 >= Re(b_11) (continuous) or 1 >= |b_11| (discrete), with tolerance.
double sign_slack(const Dense& t, Mode mode, double tol) {
    const Complex b = t(0, 0);
    return mode == Mode::continuous ? tol - b.real() : 1.0 + tol - std::abs(b);
}

struct Scaled {
    Dense S, S_inv, T;
};

Scaled scale_similarity(const SchurForm& form, double eps) {
    const Eigen::Index n = form.T.rows();
    Eigen::VectorXd e(n);
    for (Eigen::Index i = 0; i < n; ++i) e[i] = std::pow(eps, static_cast<double>(i));
    Scaled s;
    s.S = e.cwiseInverse().asDiagonal() * form.Q.adjoint();
    s.S_inv = form.Q * e.asDiagonal();
    s.T = e.cwiseInverse().asDiagonal() * form.T * e.asDiagonal();
    return s;
}

} // namespace

double measure_K32(const Dense& t, Mode mode) {
    double k = 0.0;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const double w = diagonal_weight(t(i, i), mode);
        for (Eigen::Index j = i + 1; j < t.cols(); ++j) {
            const double b = std::abs(t(i, j));
            if (b == 0.0) continue;
            if (w <= 0.0) return infinity;
            k = std::max(k, b / w);
        }
    }
    return k;
}

Condition3Certificate build_condition3(const CMatrix& m, Mode mode, double scaling_eps) {
    if (!(scaling_eps > 0.0) || !std::isfinite(scaling_eps))
        throw Error(ErrorKind::domain, "scaling epsilon must be positive");
    const SchurOrdering ordering =
        mode == Mode::continuous ? SchurOrdering::descending_real_part : SchurOrdering::descending_modulus;
    const SchurForm form = schur(m, ordering);
    const double norm_m = spectral_norm(m);

    Condition3Certificate c;
    c.mode = mode;
    c.scaling_eps = scaling_eps;
    Scaled s = scale_similarity(form, scaling_eps);
    c.S = std::move(s.S);
    c.S_inv = std::move(s.S_inv);
    c.T = std::move(s.T);
    const double ns = spectral_norm(c.S);
    const double nsi = spectral_norm(c.S_inv);
    c.K31 = ns + nsi;
    c.kappa_S = ns * nsi;
    c.K32 = measure_K32(c.T, mode);
    c.reconstruction_residual = spectral_norm(Dense(c.S * m.dense() * c.S_inv - c.T));

    const double scale = 1.0 + norm_m;
    c.triangular_valid = max_strict_lower(c.T) <= 1e-10 * spectral_norm(c.T);
    c.ordering_valid = ordering_slack(c.T, mode, 1e-10 * scale) >= 0.0;
    c.diagonal_sign_valid = sign_slack(c.T, mode, 1e-8 * scale) >= 0.0;

    for (double eps : {1.0, 1e-1, 1e-2}) {
        const Scaled p = scale_similarity(form, eps);
        c.scaling_profile.push_back({eps, spectral_norm(p.S) + spectral_norm(p.S_inv), measure_K32(p.T, mode)});
    }
    return c;
}

const ConstraintCheck& Condition3Verification::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw Error(ErrorKind::domain, "no constraint named " + name);
}

Condition3Verification verify_condition3(const CMatrix& m, const Condition3Certificate& cert, double K31_claim,
                                         double K32_claim) {
    const Dense& t = cert.T;
    const Eigen::Index n = t.rows();
    if (cert.S.rows() != n || m.n() != n)
        throw Error(ErrorKind::domain, "certificate dimension does not match the matrix");
    const double norm_m = spectral_norm(m);
    const double scale = 1.0 + norm_m;
    Condition3Verification v;

    const Dense s_inv = cert.S.fullPivLu().inverse();
    const double ns = spectral_norm(cert.S);
    const double nsi = spectral_norm(s_inv);
    const double kappa = ns * nsi;
    const double residual = spectral_norm(Dense(cert.S * m.dense() * s_inv - t));
    const double residual_tol = 1e-8 * std::max(norm_m, 1e-300) * kappa;
    v.checks.push_back({"similarity", std::isfinite(residual) && residual <= residual_tol, residual_tol - residual});

    const double lower_tol = 1e-10 * spectral_norm(t);
    const double lower = max_strict_lower(t);
    v.checks.push_back({"triangular", lower <= lower_tol, lower_tol - lower});

    const double ord = std::min(ordering_slack(t, cert.mode, 1e-10 * scale), sign_slack(t, cert.mode, 1e-8 * scale));
    v.checks.push_back({"ordering", ord >= 0.0, ord});

    double entry = infinity;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = diagonal_weight(t(i, i), cert.mode);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double b = std::abs(t(i, j));
            double allowed = 0.0;
            if (w > 0.0) {
                allowed = K32_claim * w;
            } else if (K32_claim == infinity) {
                allowed = infinity;
            }
            entry = std::min(entry, allowed - b);
        }
    }
    const double entry_tol = 1e-12 * scale;
    v.checks.push_back({"entry_bound", entry >= -entry_tol, entry});

    const double k31 = ns + nsi;
    v.checks.push_back({"transformation_bound", k31 <= K31_claim * (1.0 + 1e-12), K31_claim - k31});

    v.all_pass = std::all_of(v.checks.begin(), v.checks.end(), [](const ConstraintCheck& c) { return c.pass; });
    return v;
}

Condition4Certificate build_condition4(const CMatrix& m, Mode mode) {
    const CMatrix h0 = mode == Mode::continuous ? solve_lyapunov_continuous(m) : solve_stein_discrete(m);
    const Dense& a = m.dense();
    Condition4Certificate c;
    c.mode = mode;
    c.H = h0.dense();
    double lmin = hermitian_eigenvalue_min(c.H);
    double lmax = hermitian_eigenvalue_max(c.H);
    if (lmin > 0.0) {
        const double s = 1.0 / std::sqrt(lmax * lmin);
        c.H *= s;
        lmin *= s;
        lmax *= s;
        c.K4 = std::max(lmax, 1.0 / lmin);
    } else {
        c.K4 = infinity;
    }
    c.lambda_min = lmin;
    c.lambda_max = lmax;
    const Dense form = mode == Mode::continuous ? Dense(c.H * a + a.adjoint() * c.H)
                                                : Dense(a.adjoint() * c.H * a - c.H);
    c.negativity_residual = hermitian_eigenvalue_max(Dense(0.5 * (form + form.adjoint())));
    const double norm_m = spectral_norm(a);
    c.residual_tolerance = 1e-8 * spectral_norm(c.H) * (1.0 + norm_m) * (1.0 + norm_m);
    c.valid = lmin > 0.0 && c.negativity_residual <= c.residual_tolerance;
    return c;
}

double unit_triangular_constant(int n, double K32) {
    if (K32 == infinity) return infinity;
    const double nn = static_cast<double>(n);
    return std::pow(nn * nn * std::max(1.0, K32), n - 1);
}

double bound_from_condition3(const Condition3Certificate& cert) {
    if (cert.mode != Mode::continuous)
        throw Error(ErrorKind::domain, "bound_from_condition3 needs a continuous-mode certificate");
    const double c = unit_triangular_constant(static_cast<int>(cert.T.rows()), cert.K32);
    if (c == infinity) return infinity;
    return cert.K31 * cert.K31 * c / 4.0;
}

double miller_region_bound(const Condition3Certificate& cert, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::domain, "region parameter r must be positive");
    const int n = static_cast<int>(cert.T.rows());
    const double c = unit_triangular_constant(n, cert.K32);
    if (c == infinity) return infinity;
    return cert.K31 * cert.K31 * c / 4.0 * std::pow(1.0 + 1.0 / r, n - 1);
}

InequalityReport check_resolvent_inequality(const CMatrix& m, double K, std::span<const Complex> samples,
                                            Denominator denominator) {
    if (!(K > 0.0)) throw Error(ErrorKind::domain, "K must be positive");
    const SpectrumReport sp = spectrum(m);
    std::vector<Complex> set;
    if (denominator == Denominator::excluded) {
        set = boundary_excluded_spectrum(sp);
    } else {
        set.assign(sp.schur_diagonal.data(), sp.schur_diagonal.data() + sp.schur_diagonal.size());
    }
    const ResolventEvaluator ev(m);
    InequalityReport rep;
    rep.K = K;
    rep.denominator = denominator;
    for (const Complex& z : samples) {
        InequalitySample s;
        s.z = z;
        double dmin = infinity;
        for (const auto& l : set) dmin = std::min(dmin, std::abs(z - l));
        s.denominator = set.empty() ? 0.0 : 1.0 / dmin;
        try {
            s.resolvent_norm = ev.norm(z);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::singular_point) throw;
            s.singular = true;
            s.resolvent_norm = infinity;
            ++rep.singular;
            rep.samples.push_back(s);
            continue;
        }
        s.slack = K * s.denominator - s.resolvent_norm;
        s.violation = s.slack < -1e-8 * s.resolvent_norm;
        if (s.violation) ++rep.violations;
        rep.samples.push_back(s);
    }
    return rep;
}

} // namespace kreiss
