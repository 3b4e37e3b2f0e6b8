#include "kreiss/search.hpp"

#include <cmath>
#include <limits>

#include "kreiss/error.hpp"
#include "kreiss/parallel.hpp"

namespace kreiss {

void SearchConfig::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (coarse_resolution < 2) throw Error(ErrorKind::configuration, "coarse resolution must be >= 2");
    if (refine_iterations < 1) throw Error(ErrorKind::configuration, "refine iterations must be positive");
    if (!(divergence_threshold > 1.0)) throw Error(ErrorKind::configuration, "divergence threshold must exceed 1");
    if (nu_max < 1) throw Error(ErrorKind::configuration, "nu_max must be positive");
    if (t_max && !positive(*t_max)) throw Error(ErrorKind::configuration, "t_max must be positive");
    if (re_cap && !positive(*re_cap)) throw Error(ErrorKind::configuration, "re cap must be positive");
    if (im_cap && !positive(*im_cap)) throw Error(ErrorKind::configuration, "im cap must be positive");
}

std::vector<double> evaluate_params(const PlaneField& f, std::span<const Params> points) {
    std::vector<double> values(points.size());
    parallel_for(static_cast<std::ptrdiff_t>(points.size()),
                 [&](std::ptrdiff_t i) { values[static_cast<std::size_t>(i)] = f(points[static_cast<std::size_t>(i)]); });
    return values;
}

std::vector<double> evaluate_params_serial(const PlaneField& f, std::span<const Params> points) {
    std::vector<double> values;
    values.reserve(points.size());
    for (const auto& p : points) values.push_back(f(p));
    return values;
}

namespace {

bool usable(double v) { return std::isfinite(v); }

} // namespace

RefineResult pattern_refine(const PlaneField& f, Params start, double start_value, Params steps,
                            int iterations, double min_step) {
    RefineResult r{start, start_value, 0};
    for (int it = 0; it < iterations; ++it) {
        if (steps[0] < min_step && steps[1] < min_step) break;
        Params best = r.best;
        double best_value = r.value;
        for (int axis = 0; axis < 2; ++axis) {
            for (double sign : {1.0, -1.0}) {
                Params p = r.best;
                p[static_cast<std::size_t>(axis)] += sign * steps[static_cast<std::size_t>(axis)];
                const double v = f(p);
                ++r.evaluations;
                if (usable(v) && v > best_value) {
                    best = p;
                    best_value = v;
                }
            }
        }
        if (best_value > r.value) {
            r.best = best;
            r.value = best_value;
        } else {
            steps[0] *= 0.5;
            steps[1] *= 0.5;
        }
    }
    return r;
}

std::vector<double> geometric_deltas(double scale, int count) {
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) d.push_back(scale * std::pow(10.0, -0.5 * k));
    return d;
}

ApproachOutcome approach_sequence(const std::function<double(double)>& g, std::span<const double> deltas,
                                  double threshold) {
    ApproachOutcome out;
    auto increasing_tail = [&](std::size_t len) {
        const auto& p = out.points;
        if (p.size() < len) return false;
        for (std::size_t i = p.size() - len + 1; i < p.size(); ++i)
            if (!(p[i].value > p[i - 1].value)) return false;
        return true;
    };
    for (double delta : deltas) {
        const double v = g(delta);
        ++out.evaluations;
        if (std::isnan(v)) continue;
        if (v == std::numeric_limits<double>::infinity()) {
            out.diverged = increasing_tail(3);
            break;
        }
        out.points.push_back({delta, v});
        out.best = std::max(out.best, v);
        if (v > threshold && out.points.size() >= 3) {
            const std::size_t len = std::min<std::size_t>(4, out.points.size());
            if (increasing_tail(len)) {
                out.diverged = true;
                break;
            }
        }
    }
    return out;
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double a, double b,
                                             int iterations, long& evaluations) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    evaluations += 2;
    for (int i = 0; i < iterations && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        ++evaluations;
    }
    return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

} // namespace kreiss
