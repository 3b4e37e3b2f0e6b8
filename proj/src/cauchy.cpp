#include "kreiss/cauchy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "kreiss/error.hpp"
#include "kreiss/parallel.hpp"

namespace kreiss {

void CauchyConfig::validate() const {
    if (!std::isfinite(gamma)) throw Error(ErrorKind::configuration, "gamma must be finite");
    if (alpha && !(gamma > *alpha)) throw Error(ErrorKind::configuration, "gamma must exceed alpha");
    if (!(y_max > 0.0) || !std::isfinite(y_max)) throw Error(ErrorKind::configuration, "y_max must be positive");
    if (y_count < 2) throw Error(ErrorKind::configuration, "y_count must be at least 2");
    if (table_count < 2) throw Error(ErrorKind::configuration, "table_count must be at least 2");
    if (K_old && !(*K_old > 0.0)) throw Error(ErrorKind::configuration, "K_old must be positive");
    if (K_new && !(*K_new > 0.0)) throw Error(ErrorKind::configuration, "K_new must be positive");
    for (double t : t_eval)
        if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::configuration, "t_eval entries must be nonnegative");
}

namespace {

double node_y(const CauchyConfig& cfg, long k, long count) {
    return -cfg.y_max + 2.0 * cfg.y_max * static_cast<double>(k) / static_cast<double>(count - 1);
}

void require_contour(const ResolventEvaluator& ev, double gamma) {
    const double a = spectral_abscissa(ev.eigenvalues());
    if (!(gamma > a)) throw Error(ErrorKind::configuration, "contour abscissa gamma must exceed the spectral abscissa");
}

} // namespace

Reconstruction laplace_reconstruct(const CMatrix& a, const Transform& f, const CauchyConfig& cfg) {
    cfg.validate();
    const ResolventEvaluator ev(a);
    require_contour(ev, cfg.gamma);
    const long count = cfg.y_count;
    const double h = 2.0 * cfg.y_max / static_cast<double>(count - 1);

    std::vector<DenseVector> w(static_cast<std::size_t>(count));
    parallel_for(count, [&](std::ptrdiff_t k) {
        const Complex z(cfg.gamma, node_y(cfg, k, count));
        const DenseVector rhs = f(z);
        if (rhs.size() != a.n() || !rhs.allFinite())
            throw Error(ErrorKind::configuration, "forcing transform must be finite on the contour");
        try {
            w[static_cast<std::size_t>(k)] = ev.solve(z, rhs);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::singular_point)
                throw Error(ErrorKind::configuration, "contour hits the spectrum");
            throw;
        }
    });

    Reconstruction out;
    out.t = cfg.t_eval;
    out.step = h;
    out.y_max = cfg.y_max;
    out.nodes = count;
    std::vector<DenseVector> terms(static_cast<std::size_t>(count));
    for (double t : cfg.t_eval) {
        for (long k = 0; k < count; ++k) {
            const Complex z(cfg.gamma, node_y(cfg, k, count));
            const double weight = (k == 0 || k == count - 1) ? 0.5 : 1.0;
            terms[static_cast<std::size_t>(k)] = (weight * h / (2.0 * std::numbers::pi)) * std::exp(z * t) * w[static_cast<std::size_t>(k)];
        }
        out.u.push_back(pairwise_sum(std::span<const DenseVector>(terms)));
    }
    return out;
}

namespace {

struct Simpson {
    const std::function<DenseVector(double)>& g;
    double tol;
    int max_depth;

    DenseVector run(double a, double b, const DenseVector& fa, const DenseVector& fm, const DenseVector& fb,
                    const DenseVector& whole, int depth) const {
        const double m = 0.5 * (a + b);
        const DenseVector flm = g(0.5 * (a + m));
        const DenseVector frm = g(0.5 * (m + b));
        const DenseVector left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const DenseVector right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const DenseVector both = left + right;
        if (depth >= max_depth || (both - whole).norm() <= 15.0 * tol * std::max(1.0, both.norm()))
            return both + (both - whole) / 15.0;
        return run(a, m, fa, flm, fm, left, depth + 1) + run(m, b, fm, frm, fb, right, depth + 1);
    }
};

} // namespace

std::vector<DenseVector> reference_solution(const CMatrix& a, const Forcing& f, std::span<const double> t_eval,
                                            double rel_tol) {
    std::vector<DenseVector> out;
    for (double t : t_eval) {
        if (!(t >= 0.0)) throw Error(ErrorKind::configuration, "t_eval entries must be nonnegative");
        if (t == 0.0) {
            out.push_back(DenseVector::Zero(a.n()));
            continue;
        }
        const std::function<DenseVector(double)> g = [&](double s) -> DenseVector {
            return expm(Dense(a.dense() * Complex(t - s))) * f(s);
        };
        const Simpson simpson{g, rel_tol, 40};
        // A few fixed panels first so that a pulse is not missed entirely.
        const int panels = 16;
        DenseVector total = DenseVector::Zero(a.n());
        for (int p = 0; p < panels; ++p) {
            const double lo = t * p / panels;
            const double hi = t * (p + 1) / panels;
            const DenseVector fa = g(lo), fb = g(hi), fm = g(0.5 * (lo + hi));
            total += simpson.run(lo, hi, fa, fm, fb, (hi - lo) / 6.0 * (fa + 4.0 * fm + fb), 0);
        }
        out.push_back(std::move(total));
    }
    return out;
}

namespace {

// Moments int_0^L e^{-zs} s^k ds for k = 0, 1, 2.
std::array<Complex, 3> exp_moments(Complex z, double L) {
    std::array<Complex, 3> m{};
    if (std::abs(z) * L < 0.5) {
        Complex c(1.0);
        for (int j = 0; j < 25; ++j) {
            for (int k = 0; k < 3; ++k) m[k] += c * std::pow(L, k + j + 1) / double(k + j + 1);
            c *= -z / double(j + 1);
        }
        return m;
    }
    const Complex e = std::exp(-z * L);
    m[0] = (1.0 - e) / z;
    m[1] = (m[0] - L * e) / z;
    m[2] = (2.0 * m[1] - L * L * e) / z;
    return m;
}

} // namespace

Transform numerical_transform(Forcing f, double horizon, int panels) {
    if (!(horizon > 0.0) || panels < 1) throw Error(ErrorKind::configuration, "transform horizon and panels must be positive");
    // Filon-type rule: f is interpolated quadratically on each double panel
    // [t_k, t_k + 2h] and the exponential is integrated exactly, so the error
    // does not depend on Im z.
    const double h = horizon / (2.0 * panels);
    std::vector<DenseVector> samples;
    for (int k = 0; k <= 2 * panels; ++k) samples.push_back(f(h * k));
    return [samples = std::move(samples), h, panels](Complex z) -> DenseVector {
        const auto m = exp_moments(z, 2.0 * h);
        const double h2 = h * h;
        const Complex w0 = (m[2] - 3.0 * h * m[1] + 2.0 * h2 * m[0]) / (2.0 * h2);
        const Complex w1 = (2.0 * h * m[1] - m[2]) / h2;
        const Complex w2 = (m[2] - h * m[1]) / (2.0 * h2);
        DenseVector acc = DenseVector::Zero(samples[0].size());
        for (int p = 0; p < panels; ++p) {
            const int k = 2 * p;
            acc += std::exp(-z * (h * k)) * (w0 * samples[k] + w1 * samples[k + 1] + w2 * samples[k + 2]);
        }
        return acc;
    };
}

BuiltinForcing constant_forcing(DenseVector c) {
    BuiltinForcing b;
    b.name = "constant";
    b.time = [c](double) { return c; };
    b.transform = [c](Complex z) -> DenseVector { return c / z; };
    return b;
}

BuiltinForcing exponential_forcing(DenseVector c, double rate) {
    BuiltinForcing b;
    b.name = "exponential";
    b.time = [c, rate](double t) -> DenseVector { return c * std::exp(-rate * t); };
    b.transform = [c, rate](Complex z) -> DenseVector { return c / (z + rate); };
    return b;
}

BuiltinForcing gaussian_forcing(DenseVector c, double center, double width) {
    if (!(width > 0.0)) throw Error(ErrorKind::configuration, "gaussian width must be positive");
    BuiltinForcing b;
    b.name = "gaussian";
    b.time = [c, center, width](double t) -> DenseVector {
        const double x = (t - center) / width;
        return c * std::exp(-0.5 * x * x);
    };
    b.transform = numerical_transform(b.time, std::max(0.0, center) + 12.0 * width);
    return b;
}

BuiltinForcing make_forcing(const std::string& name, Eigen::Index n, double parameter) {
    const DenseVector ones = DenseVector::Ones(n);
    if (name == "constant") return constant_forcing(ones);
    if (name == "exponential") return exponential_forcing(ones, parameter);
    if (name == "gaussian") return gaussian_forcing(ones, parameter, 0.25);
    if (name == "zero") {
        BuiltinForcing b = constant_forcing(DenseVector::Zero(n));
        b.name = "zero";
        return b;
    }
    throw Error(ErrorKind::configuration, "unknown forcing '" + name + "'");
}

EnvelopeComparison envelope_comparison(const CMatrix& a, const CauchyConfig& cfg, const BuiltinForcing& forcing) {
    cfg.validate();
    const SpectrumReport sp = spectrum(a);
    EnvelopeComparison cmp;
    cmp.gamma = cfg.gamma;
    cmp.alpha = cfg.alpha.value_or(sp.abscissa + 1e-2);
    if (!(cfg.gamma > sp.abscissa))
        throw Error(ErrorKind::configuration, "contour abscissa gamma must exceed the spectral abscissa");
    if (!(cfg.gamma > cmp.alpha)) throw Error(ErrorKind::configuration, "gamma must exceed alpha");

    const ResolventEvaluator ev(a);
    std::vector<Complex> lambdas = cluster_values(sp);

    const long count = cfg.table_count;
    cmp.rows.resize(static_cast<std::size_t>(count));
    std::vector<double> old_ratio(static_cast<std::size_t>(count)), new_ratio(static_cast<std::size_t>(count));
    parallel_for(count, [&](std::ptrdiff_t k) {
        const double y = -cfg.y_max + 2.0 * cfg.y_max * static_cast<double>(k) / static_cast<double>(count - 1);
        const Complex z(cfg.gamma, y);
        double dmin = infinity;
        for (const Complex& l : lambdas) dmin = std::min(dmin, std::abs(z - l));
        EnvelopeRow& row = cmp.rows[static_cast<std::size_t>(k)];
        row.y = y;
        row.true_norm = ev.norm(z);
        old_ratio[static_cast<std::size_t>(k)] = row.true_norm * (cfg.gamma - cmp.alpha);
        new_ratio[static_cast<std::size_t>(k)] = row.true_norm * dmin;
    });

    const bool auto_old = !cfg.K_old;
    const bool auto_new = !cfg.K_new;
    cmp.auto_constants = auto_old || auto_new;
    if (cmp.auto_constants) {
        const CMatrix shifted = a.shifted(Complex(-cmp.alpha));
        if (auto_old) {
            cmp.K_old_search = kreiss_constant_continuous(shifted);
            // The contour samples are points of the same half-plane; include them.
            double v = cmp.K_old_search->value;
            for (double r : old_ratio) v = std::max(v, r);
            cmp.K_old = v;
            if (!cmp.K_old_search->finite()) cmp.envelopes_available = false;
        }
        if (auto_new) {
            cmp.K_new_search = calK_continuous(shifted);
            double v = cmp.K_new_search->value;
            for (double r : new_ratio) v = std::max(v, r);
            cmp.K_new = v;
            if (!cmp.K_new_search->finite()) cmp.envelopes_available = false;
        }
    }
    if (cfg.K_old) cmp.K_old = *cfg.K_old;
    if (cfg.K_new) cmp.K_new = *cfg.K_new;
    if (!cmp.envelopes_available) cmp.note = "constant search diverged; envelopes unavailable";

    for (std::size_t k = 0; k < cmp.rows.size(); ++k) {
        EnvelopeRow& row = cmp.rows[k];
        if (!cmp.envelopes_available) {
            row.old_env = row.new_env = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        row.old_env = cmp.K_old / (cfg.gamma - cmp.alpha);
        const double dmin = row.true_norm > 0.0 ? new_ratio[k] / row.true_norm : infinity;
        row.new_env = cmp.K_new / dmin;
        const double slack = 1e-8 * row.true_norm;
        if (row.true_norm > row.old_env + slack || row.true_norm > row.new_env + slack) ++cmp.violations;
    }

    cmp.reconstruction = laplace_reconstruct(a, forcing.transform, cfg);
    cmp.reference = reference_solution(a, forcing.time, cfg.t_eval);
    return cmp;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_envelope_csv(std::ostream& os, const EnvelopeComparison& cmp) {
    os << "y,true_norm,old_env,new_env\n";
    for (const auto& r : cmp.rows)
        os << num(r.y) << ',' << num(r.true_norm) << ',' << num(r.old_env) << ',' << num(r.new_env) << '\n';
}

void write_solution_csv(std::ostream& os, const EnvelopeComparison& cmp) {
    os << "t,component,reconstructed_re,reconstructed_im,reference_re,reference_im\n";
    for (std::size_t i = 0; i < cmp.reconstruction.t.size(); ++i) {
        const DenseVector& u = cmp.reconstruction.u[i];
        const DenseVector& r = cmp.reference[i];
        for (Eigen::Index c = 0; c < u.size(); ++c)
            os << num(cmp.reconstruction.t[i]) << ',' << c << ',' << num(u(c).real()) << ',' << num(u(c).imag()) << ','
               << num(r(c).real()) << ',' << num(r(c).imag()) << '\n';
    }
}

} // namespace kreiss
