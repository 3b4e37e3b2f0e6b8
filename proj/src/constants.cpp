#include "kreiss/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "kreiss/error.hpp"
#include "kreiss/parallel.hpp"

namespace kreiss {

const char* to_string(Mode mode) { return mode == Mode::continuous ? "continuous" : "discrete"; }

Mode parse_mode(const std::string& s) {
    if (s == "continuous") return Mode::continuous;
    if (s == "discrete") return Mode::discrete;
    throw Error(ErrorKind::configuration, "unknown mode '" + s + "' (expected continuous|discrete)");
}

namespace {

// Deltas reach 1e-9 of the scale, a decade below the classification
// tolerance; closer points only resolve rounding in the eigenvalues.
constexpr int approach_steps = 19;
constexpr int refine_candidates = 6;

// ---------------------------------------------------------------------------
// Plane searches (resolvent functionals)

/// A point the search walks towards: z(delta) sits at chart coordinate
/// u = log(offset + delta) on the ray v.
struct ApproachTarget {
    double offset;
    double v;
};

struct PlaneProblem {
    std::function<Complex(const Params&)> chart;
    std::function<double(Complex)> field; // may throw kreiss::Error
    double u_lo, u_hi, v_lo, v_hi;
    bool v_periodic;
    std::vector<double> extra_v;
    std::vector<ApproachTarget> targets;
    double delta_scale;
};

double guarded(const PlaneProblem& p, const Params& q) {
    const Complex z = p.chart(q);
    try {
        return p.field(z);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::singular_point) return infinity;
        if (e.kind() == ErrorKind::domain) return std::numeric_limits<double>::quiet_NaN();
        throw;
    }
}

struct Sample {
    Params q;
    double value;
};

SearchLocation point_location(Complex z) {
    SearchLocation l;
    l.kind = LocationKind::point;
    l.z = z;
    return l;
}

SupSearchResult maximize_plane(const PlaneProblem& p, const SearchConfig& cfg) {
    SupSearchResult res;
    const PlaneField field = [&p](const Params& q) { return guarded(p, q); };

    std::vector<Sample> samples;
    auto absorb = [&](std::span<const Params> pts, std::span<const double> vals) {
        for (std::size_t i = 0; i < pts.size(); ++i) samples.push_back({pts[i], vals[i]});
        res.budget_used += static_cast<long>(pts.size());
    };
    auto best_sample = [&]() {
        const Sample* best = nullptr;
        for (const auto& s : samples)
            if (std::isfinite(s.value) && (best == nullptr || s.value > best->value)) best = &s;
        return best;
    };

    // Level 0: coarse grid plus far-field probes along v = 0.
    const int r = cfg.coarse_resolution;
    std::vector<double> us(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) us[static_cast<std::size_t>(i)] = p.u_lo + (p.u_hi - p.u_lo) * i / (r - 1);
    std::vector<double> vs;
    for (int j = 0; j < r; ++j) {
        const double denom = p.v_periodic ? r : (r - 1);
        vs.push_back(p.v_lo + (p.v_hi - p.v_lo) * j / denom);
    }
    vs.push_back(0.0);
    for (double v : p.extra_v) vs.push_back(v);

    std::vector<Params> grid;
    grid.reserve(us.size() * vs.size() + 8);
    for (double v : vs)
        for (double u : us) grid.push_back({u, v});
    for (int j = 1; j <= 8; ++j) grid.push_back({p.u_hi + j * std::log(10.0), 0.0});
    absorb(grid, evaluate_params(field, grid));
    const Sample* b0 = best_sample();
    res.trace.push_back({0, b0 ? b0->value : 0.0});

    // Level 1: geometric approach towards each target.
    if (cfg.seeds_near_spectrum) {
        for (const auto& t : p.targets) {
            const auto deltas = geometric_deltas(p.delta_scale, approach_steps);
            const auto g = [&](double delta) { return field({std::log(t.offset + delta), t.v}); };
            const ApproachOutcome out = approach_sequence(g, deltas, cfg.divergence_threshold);
            res.budget_used += out.evaluations;
            for (const auto& gp : out.points) samples.push_back({{std::log(t.offset + gp.parameter), t.v}, gp.value});
            if (out.diverged) {
                const Sample* b = best_sample();
                res.diverged = true;
                res.growth_certificate = out.points;
                res.value = b ? b->value : out.best;
                const GrowthPoint& last = out.points.back();
                res.argmax = point_location(p.chart({std::log(t.offset + last.parameter), t.v}));
                res.trace.push_back({1, std::max(res.trace.back().best, res.value)});
                return res;
            }
        }
    }
    const Sample* b1 = best_sample();
    res.trace.push_back({1, std::max(res.trace.back().best, b1 ? b1->value : 0.0)});

    // Level 2+: compass refinement from the best distinct candidates.
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = std::isfinite(samples[a].value) ? samples[a].value : -infinity;
        const double vb = std::isfinite(samples[b].value) ? samples[b].value : -infinity;
        return va > vb;
    });
    std::vector<Sample> starts;
    for (std::size_t idx : order) {
        const Sample& s = samples[idx];
        if (!std::isfinite(s.value)) break;
        const bool dup = std::any_of(starts.begin(), starts.end(), [&](const Sample& o) { return o.q == s.q; });
        if (!dup) starts.push_back(s);
        if (static_cast<int>(starts.size()) == refine_candidates) break;
    }
    const Params steps{0.5 * (p.u_hi - p.u_lo) / (r - 1), 0.5 * (p.v_hi - p.v_lo) / (r - 1)};
    const double u_floor = std::log(p.delta_scale) - 0.5 * (approach_steps - 1) * std::log(10.0);
    const PlaneField bounded = [&field, u_floor](const Params& q) {
        return q[0] < u_floor ? std::numeric_limits<double>::quiet_NaN() : field(q);
    };
    std::vector<RefineResult> refined(starts.size());
    parallel_for(static_cast<std::ptrdiff_t>(starts.size()), [&](std::ptrdiff_t i) {
        const Sample& s = starts[static_cast<std::size_t>(i)];
        refined[static_cast<std::size_t>(i)] = pattern_refine(bounded, s.q, s.value, steps, cfg.refine_iterations);
    });

    const Sample* best = best_sample();
    Params best_q = best ? best->q : Params{p.u_hi, 0.0};
    double best_v = best ? best->value : 0.0;
    int level = 2;
    for (const auto& rr : refined) {
        res.budget_used += rr.evaluations;
        if (rr.value > best_v) {
            best_v = rr.value;
            best_q = rr.best;
        }
        res.trace.push_back({level++, std::max(res.trace.back().best, best_v)});
    }
    res.value = best_v;
    res.argmax = point_location(p.chart(best_q));
    return res;
}

double default_cap(const SpectrumReport& sp) { return 10.0 * (1.0 + sp.matrix_norm); }

PlaneProblem continuous_problem(const SpectrumReport& sp, const SearchConfig& cfg) {
    PlaneProblem p;
    const double s = 1.0 + sp.matrix_norm;
    const double re_cap = cfg.re_cap.value_or(default_cap(sp));
    const double im_cap = cfg.im_cap.value_or(default_cap(sp));
    p.chart = [](const Params& q) { return Complex(std::exp(q[0]), q[1]); };
    p.u_lo = std::log(1e-8 * s);
    p.u_hi = std::log(re_cap);
    p.v_lo = -im_cap;
    p.v_hi = im_cap;
    p.v_periodic = false;
    p.delta_scale = s;
    for (const auto& c : sp.eigenvalues) {
        p.extra_v.push_back(c.value.imag());
        const double offset = c.value.real() > sp.cluster_tolerance ? c.value.real() : 0.0;
        p.targets.push_back({offset, c.value.imag()});
    }
    return p;
}

PlaneProblem discrete_problem(const SpectrumReport& sp, const SearchConfig& cfg) {
    PlaneProblem p;
    const double s = 1.0 + sp.matrix_norm;
    const double radius_cap = std::max(cfg.re_cap.value_or(default_cap(sp)), 1.0 + 1e-6);
    p.chart = [](const Params& q) { return std::polar(1.0 + std::exp(q[0]), q[1]); };
    p.u_lo = std::log(1e-8 * s);
    p.u_hi = std::log(radius_cap - 1.0);
    p.v_lo = 0.0;
    p.v_hi = 2.0 * std::numbers::pi;
    p.v_periodic = true;
    p.delta_scale = s;
    for (const auto& c : sp.eigenvalues) {
        const double mod = std::abs(c.value);
        const double angle = mod > 0.0 ? std::arg(c.value) : 0.0;
        p.extra_v.push_back(angle);
        const double offset = mod > 1.0 + sp.cluster_tolerance ? mod - 1.0 : 0.0;
        p.targets.push_back({offset, angle});
    }
    return p;
}

} // namespace

SupSearchResult kreiss_constant_continuous(const CMatrix& m, const SearchConfig& cfg) {
    cfg.validate();
    const SpectrumReport sp = spectrum(m);
    const ResolventEvaluator ev(m);
    PlaneProblem p = continuous_problem(sp, cfg);
    p.field = [&ev](Complex z) { return z.real() * ev.norm(z); };
    return maximize_plane(p, cfg);
}

SupSearchResult kreiss_constant_discrete(const CMatrix& m, const SearchConfig& cfg) {
    cfg.validate();
    const SpectrumReport sp = spectrum(m);
    const ResolventEvaluator ev(m);
    PlaneProblem p = discrete_problem(sp, cfg);
    p.field = [&ev](Complex z) {
        const double margin = std::abs(z) - 1.0;
        if (!(margin > 0.0)) throw Error(ErrorKind::domain, "|z| <= 1");
        return margin * ev.norm(z);
    };
    return maximize_plane(p, cfg);
}

SupSearchResult calK_continuous(const CMatrix& m, const SearchConfig& cfg) {
    cfg.validate();
    const SpectrumReport sp = spectrum(m);
    const std::vector<Complex> excluded = boundary_excluded_spectrum(sp);
    if (excluded.empty()) {
        SupSearchResult res;
        res.value = infinity;
        res.diverged = true;
        res.note = "spectrum lies in the open right half-plane; defined as +inf";
        return res;
    }
    const ResolventEvaluator ev(m);
    PlaneProblem p = continuous_problem(sp, cfg);
    p.field = [&ev, &excluded](Complex z) { return ratio_continuous(ev, z, excluded).ratio; };
    return maximize_plane(p, cfg);
}

SupSearchResult calK_discrete(const CMatrix& m, const SearchConfig& cfg) {
    cfg.validate();
    const SpectrumReport sp = spectrum(m);
    const ResolventEvaluator ev(m);
    const std::vector<Complex> eigen = cluster_values(sp);
    PlaneProblem p = discrete_problem(sp, cfg);
    p.field = [&ev, &eigen](Complex z) {
        if (!(std::abs(z) > 1.0)) throw Error(ErrorKind::domain, "|z| <= 1");
        double d = infinity;
        for (const auto& l : eigen) d = std::min(d, std::abs(z - l));
        return ev.norm(z) * d;
    };
    return maximize_plane(p, cfg);
}

// ---------------------------------------------------------------------------
// Semigroup and power suprema

namespace {

double semigroup_norm(const Dense& m, double t) {
    try {
        return spectral_norm(expm(Dense(m * t)));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::scaling_failure) return infinity;
        throw;
    }
}

struct TailCheck {
    std::vector<GrowthPoint> points;
    bool growing = false;
};

// Strictly increasing samples over [hi/10, hi] with total growth at least 2x.
template <class F>
TailCheck tail_growth(F&& f, double hi, int samples) {
    TailCheck tc;
    for (int k = 0; k < samples; ++k) {
        const double x = hi * std::pow(10.0, -1.0 + static_cast<double>(k) / (samples - 1));
        tc.points.push_back({x, f(x)});
    }
    bool inc = true;
    for (std::size_t i = 1; i < tc.points.size(); ++i)
        if (!(tc.points[i].value > tc.points[i - 1].value)) inc = false;
    tc.growing = inc && tc.points.back().value >= 2.0 * tc.points.front().value;
    return tc;
}

SearchLocation time_location(double t) {
    SearchLocation l;
    l.kind = LocationKind::time;
    l.t = t;
    return l;
}

} // namespace

SupSearchResult sup_semigroup_norm(const CMatrix& m, const SearchConfig& cfg) {
    cfg.validate();
    const SpectrumReport sp = spectrum(m);
    const double axis_tol = sp.cluster_tolerance;
    const bool strictly_stable = sp.abscissa < -axis_tol;
    double t_max = cfg.t_max.value_or(std::min(1e3, 50.0 / (1.0 + std::abs(sp.abscissa))));
    const Dense& a = m.dense();

    SupSearchResult res;
    std::vector<double> ts{0.0};
    auto add_window = [&](double lo, double hi) {
        const int r = 4 * cfg.coarse_resolution;
        for (int i = 1; i <= r; ++i) ts.push_back(lo + (hi - lo) * i / r);
        for (int i = 0; i < cfg.coarse_resolution; ++i)
            ts.push_back(hi * std::pow(10.0, -4.0 + 4.0 * i / (cfg.coarse_resolution - 1)));
    };
    add_window(0.0, t_max);

    auto evaluate_all = [&]() {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        std::vector<double> vals(ts.size());
        parallel_for(static_cast<std::ptrdiff_t>(ts.size()),
                     [&](std::ptrdiff_t i) { vals[static_cast<std::size_t>(i)] = semigroup_norm(a, ts[static_cast<std::size_t>(i)]); });
        res.budget_used += static_cast<long>(ts.size());
        return vals;
    };
    std::vector<double> vals = evaluate_all();
    auto f = [&](double t) { ++res.budget_used; return semigroup_norm(a, t); };

    TailCheck tail = tail_growth(f, t_max, 12);
    if (strictly_stable) {
        for (int ext = 0; ext < 6 && tail.growing; ++ext) {
            const double lo = t_max;
            t_max *= 10.0;
            add_window(lo, t_max);
            vals = evaluate_all();
            tail = tail_growth(f, t_max, 12);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] > vals[best]) best = i;
    res.value = vals[best];
    res.argmax = time_location(ts[best]);
    res.trace.push_back({0, res.value});
    for (const auto& gp : tail.points) {
        if (gp.value > res.value) {
            res.value = gp.value;
            res.argmax = time_location(gp.parameter);
        }
    }
    res.trace.push_back({1, res.value});

    if (!strictly_stable) {
        const double end_value = tail.points.back().value;
        if (tail.growing || end_value > cfg.divergence_threshold) {
            res.diverged = true;
            res.growth_certificate = tail.points;
            res.note = "semigroup norm grows over the last decade of t";
            return res;
        }
    } else if (tail.growing) {
        res.note = "still growing at the end of the extended window; value is a lower bound";
    }

    if (std::isfinite(res.value) && best > 0 && best + 1 < ts.size()) {
        long evals = 0;
        const auto [t, v] = golden_section_max([&](double x) { return semigroup_norm(a, x); }, ts[best - 1],
                                               ts[best + 1], cfg.refine_iterations, evals);
        res.budget_used += evals;
        if (v > res.value) {
            res.value = v;
            res.argmax = time_location(t);
        }
    }
    res.trace.push_back({2, res.value});
    return res;
}

SupSearchResult sup_power_norm(const CMatrix& m, const SearchConfig& cfg) {
    cfg.validate();
    const SpectrumReport sp = spectrum(m);
    const double tol = sp.cluster_tolerance;
    const Dense& a = m.dense();
    const long nu_max = cfg.nu_max;

    SupSearchResult res;
    res.value = 1.0;
    res.argmax.kind = LocationKind::power;
    res.argmax.nu = 0;
    res.budget_used = 1;

    // Tail samples at geometric indices inside the last decade.
    std::vector<long> tail_idx;
    for (int k = 0; k < 10; ++k) {
        const long idx = static_cast<long>(std::llround(nu_max * std::pow(10.0, -1.0 + k / 9.0)));
        if (tail_idx.empty() || idx > tail_idx.back()) tail_idx.push_back(idx);
    }
    std::vector<GrowthPoint> tail;
    std::vector<GrowthPoint> doubling;
    long next_doubling = 1;

    Dense p = Dense::Identity(a.rows(), a.cols());
    bool overflow = false;
    for (long nu = 1; nu <= nu_max; ++nu) {
        p = p * a;
        const double v = p.allFinite() ? spectral_norm(p) : infinity;
        ++res.budget_used;
        if (nu == next_doubling) {
            doubling.push_back({static_cast<double>(nu), v});
            next_doubling *= 2;
        }
        if (std::binary_search(tail_idx.begin(), tail_idx.end(), nu)) tail.push_back({static_cast<double>(nu), v});
        if (!std::isfinite(v)) {
            overflow = true;
            break;
        }
        if (v > res.value) {
            res.value = v;
            res.argmax.nu = nu;
        }
        if (v > cfg.divergence_threshold) {
            doubling.push_back({static_cast<double>(nu), v});
            res.diverged = true;
            res.growth_certificate = doubling;
            res.note = "power norm exceeded the divergence threshold";
            break;
        }
        if (v < 1.0 || v == 0.0) break;
    }
    res.trace.push_back({0, res.value});
    if (overflow) {
        res.diverged = true;
        res.growth_certificate = doubling;
        res.note = "power norm overflowed";
        return res;
    }
    if (!res.diverged && sp.radius >= 1.0 - tol && tail.size() >= 3) {
        bool inc = true;
        for (std::size_t i = 1; i < tail.size(); ++i)
            if (!(tail[i].value > tail[i - 1].value)) inc = false;
        if (inc && tail.back().value >= 2.0 * tail.front().value) {
            res.diverged = true;
            res.growth_certificate = tail;
            res.note = "power norm grows over the last decade of nu";
        }
    }
    return res;
}

} // namespace kreiss
