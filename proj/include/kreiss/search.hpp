#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kreiss {

struct SearchConfig {
    int coarse_resolution = 48;
    int refine_iterations = 80;
    double divergence_threshold = 1e6;
    std::optional<double> t_max;  // auto: 50 / (1 + |abscissa|), capped at 1e3
    long nu_max = 10000;
    std::optional<double> re_cap; // auto: 10 (1 + |M|)
    std::optional<double> im_cap; // auto: 10 (1 + |M|)
    bool seeds_near_spectrum = true;

    void validate() const;
};

enum class LocationKind { none, time, power, point };

struct SearchLocation {
    LocationKind kind = LocationKind::none;
    double t = 0.0;
    long nu = 0;
    std::complex<double> z{};
};

struct TraceEntry {
    int level;
    double best;
};

/// One point of a geometric approach sequence: `parameter` is the distance
/// to the approached point (or t, or nu for the time/power searches).
struct GrowthPoint {
    double parameter;
    double value;
};

/// Estimated supremum. Values are lower bounds from finite sampling; the
/// trace records the best value after each refinement level.
struct SupSearchResult {
    double value = 0.0; // +inf for the empty-spectrum convention
    SearchLocation argmax;
    bool diverged = false;
    std::vector<GrowthPoint> growth_certificate;
    std::vector<TraceEntry> trace;
    long budget_used = 0;
    std::string note;

    bool finite() const { return !diverged && value < std::numeric_limits<double>::infinity(); }
};

// ---------------------------------------------------------------------------
// Search engine over a two-parameter chart of the complex domain.

using Params = std::array<double, 2>;

/// Field on the parameter chart. Returns +inf where the point is singular
/// and NaN where the field is undefined.
using PlaneField = std::function<double(const Params&)>;

std::vector<double> evaluate_params(const PlaneField& f, std::span<const Params> points);
std::vector<double> evaluate_params_serial(const PlaneField& f, std::span<const Params> points);

struct RefineResult {
    Params best;
    double value;
    long evaluations;
};

/// Compass search for a local maximum; steps halve when no neighbour improves.
RefineResult pattern_refine(const PlaneField& f, Params start, double start_value, Params steps,
                            int iterations, double min_step = 1e-12);

struct ApproachOutcome {
    std::vector<GrowthPoint> points;
    bool diverged = false;
    double best = 0.0;
    long evaluations = 0;
};

/// Evaluates g(delta) along decreasing deltas. Divergence is certified when
/// the last four finite values increase strictly and the last one exceeds
/// `threshold`, or when the sequence hits a singular point (+inf) after at
/// least three strictly increasing values.
ApproachOutcome approach_sequence(const std::function<double(double)>& g, std::span<const double> deltas,
                                  double threshold);

/// Geometric sequence scale * 10^(-k/2), k = 0..count-1.
std::vector<double> geometric_deltas(double scale, int count);

/// Golden-section search for the maximum of f on [a, b].
std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double a, double b,
                                             int iterations, long& evaluations);

} // namespace kreiss
