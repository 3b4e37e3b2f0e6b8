#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kreiss/constants.hpp"

namespace kreiss {

/// Laplace transform of the forcing, z -> f~(z).
using Transform = std::function<DenseVector(Complex z)>;
/// Time-domain forcing, t -> f(t).
using Forcing = std::function<DenseVector(double t)>;

struct CauchyConfig {
    double gamma = 1.0;              // contour abscissa
    std::optional<double> alpha;     // auto: spectral abscissa + 1e-2
    std::optional<double> K_old;     // auto: Kreiss constant of A - alpha I
    std::optional<double> K_new;     // auto: calK of A - alpha I
    double y_max = 200.0;
    long y_count = 200001;
    std::vector<double> t_eval{1.0};
    long table_count = 2001;         // envelope table samples on [-y_max, y_max]

    void validate() const;
};

struct Reconstruction {
    std::vector<double> t;
    std::vector<DenseVector> u;
    double step = 0.0;
    double y_max = 0.0;
    long nodes = 0;
};

/// Trapezoid rule for (1/2 pi) int e^{zt} (zI - A)^-1 f~(z) dy on z = gamma + iy,
/// |y| <= y_max.
Reconstruction laplace_reconstruct(const CMatrix& a, const Transform& f, const CauchyConfig& cfg);

/// Duhamel integral int_0^t expm(A (t - s)) f(s) ds by adaptive Simpson.
std::vector<DenseVector> reference_solution(const CMatrix& a, const Forcing& f, std::span<const double> t_eval,
                                            double rel_tol = 1e-8);

/// Transform of a forcing that is negligible beyond `horizon`. The forcing is
/// sampled once on [0, horizon] with 2 * panels intervals.
Transform numerical_transform(Forcing f, double horizon, int panels = 1024);

struct BuiltinForcing {
    std::string name;
    Forcing time;
    Transform transform;
};

/// f(t) = c.
BuiltinForcing constant_forcing(DenseVector c);
/// f(t) = c e^{-rate t}.
BuiltinForcing exponential_forcing(DenseVector c, double rate);
/// f(t) = c exp(-(t - center)^2 / (2 width^2)); transform computed numerically.
BuiltinForcing gaussian_forcing(DenseVector c, double center, double width);

BuiltinForcing make_forcing(const std::string& name, Eigen::Index n, double parameter = 1.0);

struct EnvelopeRow {
    double y;
    double true_norm;
    double old_env; // NaN when unavailable
    double new_env;
};

struct EnvelopeComparison {
    double gamma = 0.0;
    double alpha = 0.0;
    double K_old = 0.0;
    double K_new = 0.0;
    bool auto_constants = false;
    bool envelopes_available = true;
    std::string note;
    std::optional<SupSearchResult> K_old_search;
    std::optional<SupSearchResult> K_new_search;
    std::vector<EnvelopeRow> rows;
    int violations = 0;
    Reconstruction reconstruction;
    std::vector<DenseVector> reference;
};

/// Tabulates |(zI - A)^-1|, K_old / (gamma - alpha) and K_new max |z - lambda|^-1
/// along the contour, and solves the Cauchy problem both ways for `forcing`.
EnvelopeComparison envelope_comparison(const CMatrix& a, const CauchyConfig& cfg, const BuiltinForcing& forcing);

void write_envelope_csv(std::ostream& os, const EnvelopeComparison& cmp);
/// Columns t, component, reconstructed re/im, reference re/im.
void write_solution_csv(std::ostream& os, const EnvelopeComparison& cmp);

} // namespace kreiss
