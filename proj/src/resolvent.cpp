#include "kreiss/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "kreiss/error.hpp"
#include "kreiss/parallel.hpp"
#include "kreiss/spectra.hpp"

namespace kreiss {

ResolventEvaluator::ResolventEvaluator(const CMatrix& m) {
    SchurForm form = schur(m);
    q_ = std::move(form.Q);
    t_ = std::move(form.T);
    eigenvalues_ = t_.diagonal();
    norm_ = spectral_norm(m);
}

double ResolventEvaluator::norm(Complex z) const {
    const Eigen::Index n = t_.rows();
    Dense shifted = -t_;
    shifted.diagonal().array() += z;
    for (Eigen::Index i = 0; i < n; ++i)
        if (shifted(i, i) == Complex(0.0))
            throw Error(ErrorKind::singular_point, "z coincides with an eigenvalue");
    const Dense inv = shifted.triangularView<Eigen::Upper>().solve(Dense::Identity(n, n));
    if (!inv.allFinite()) throw Error(ErrorKind::singular_point, "resolvent overflowed");
    const double r = spectral_norm(inv);
    const double cond = (std::abs(z) + norm_) * r;
    if (!std::isfinite(r) || cond > singular_condition_limit)
        throw Error(ErrorKind::singular_point, "zI - M is numerically singular");
    return r;
}

DenseVector ResolventEvaluator::solve(Complex z, const DenseVector& rhs) const {
    Dense shifted = -t_;
    shifted.diagonal().array() += z;
    for (Eigen::Index i = 0; i < shifted.rows(); ++i)
        if (shifted(i, i) == Complex(0.0))
            throw Error(ErrorKind::singular_point, "z coincides with an eigenvalue");
    DenseVector y = q_.adjoint() * rhs;
    shifted.triangularView<Eigen::Upper>().solveInPlace(y);
    return q_ * y;
}

double resolvent_norm(const CMatrix& m, Complex z) { return ResolventEvaluator(m).norm(z); }

CMatrix jordan_resolvent(Complex lambda, int k, Complex z) {
    if (k < 1) throw Error(ErrorKind::domain, "Jordan block size must be positive");
    if (z == lambda) throw Error(ErrorKind::singular_point, "z equals the Jordan eigenvalue");
    const Complex w = 1.0 / (z - lambda);
    // N^j has ones on the j-th superdiagonal, weighted by w^(j+1).
    Dense r = Dense::Zero(k, k);
    Complex wp = w;
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i + j < k; ++i) r(i, i + j) = wp;
        wp *= w;
    }
    return CMatrix(std::move(r));
}

namespace {

double min_distance(std::span<const Complex> set, Complex z) {
    double d = infinity;
    for (const auto& l : set) d = std::min(d, std::abs(z - l));
    return d;
}

RatioSample make_ratio(Complex z, double norm, std::span<const Complex> set) {
    RatioSample s;
    s.z = z;
    s.resolvent_norm = norm;
    if (set.empty()) {
        s.denominator = 0.0;
        s.min_distance = infinity;
        s.ratio = infinity;
        return s;
    }
    s.min_distance = min_distance(set, z);
    s.denominator = 1.0 / s.min_distance;
    s.ratio = norm * s.min_distance;
    return s;
}

std::vector<Complex> to_vector(const DenseVector& v) {
    return {v.data(), v.data() + v.size()};
}

} // namespace

RatioSample ratio_continuous(const ResolventEvaluator& ev, Complex z, std::span<const Complex> excluded) {
    if (!(z.real() > 0.0))
        throw Error(ErrorKind::domain, "ratio_continuous requires Re(z) > 0");
    return make_ratio(z, ev.norm(z), excluded);
}

RatioSample ratio_continuous(const CMatrix& m, Complex z, std::span<const Complex> excluded) {
    return ratio_continuous(ResolventEvaluator(m), z, excluded);
}

RatioSample ratio_discrete(const ResolventEvaluator& ev, Complex z) {
    if (!(std::abs(z) > 1.0)) throw Error(ErrorKind::domain, "ratio_discrete requires |z| > 1");
    const std::vector<Complex> all = to_vector(ev.eigenvalues());
    return make_ratio(z, ev.norm(z), all);
}

RatioSample ratio_discrete(const CMatrix& m, Complex z) { return ratio_discrete(ResolventEvaluator(m), z); }

// ---------------------------------------------------------------------------
// Regions S(M, r) and T(M, r)

namespace {

template <class Numerator>
double region_value(std::span<const Complex> eigenvalues, Complex z, Numerator numerator) {
    double worst = -infinity;
    for (const auto& l : eigenvalues) {
        const double num = numerator(l);
        const double dist = std::abs(z - l);
        if (dist == 0.0) {
            if (num == 0.0) throw Error(ErrorKind::singular_point, "z equals an eigenvalue (0/0)");
            if (num > 0.0) return infinity;
            continue;
        }
        worst = std::max(worst, num / dist);
    }
    return worst;
}

void check_radius(double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::domain, "region parameter r must be positive");
}

std::vector<Complex> schur_eigenvalues(const CMatrix& m) { return to_vector(schur(m).eigenvalues()); }

} // namespace

double region_S_value(std::span<const Complex> eigenvalues, Complex z) {
    return region_value(eigenvalues, z, [](Complex l) { return std::abs(l.real()); });
}

double region_T_value(std::span<const Complex> eigenvalues, Complex z) {
    return region_value(eigenvalues, z, [](Complex l) { return 1.0 - std::abs(l); });
}

bool region_S_membership(std::span<const Complex> eigenvalues, Complex z, double r) {
    check_radius(r);
    return region_S_value(eigenvalues, z) <= 1.0 / r;
}

bool region_T_membership(std::span<const Complex> eigenvalues, Complex z, double r) {
    check_radius(r);
    return region_T_value(eigenvalues, z) <= 1.0 / r;
}

bool region_S_membership(const CMatrix& m, Complex z, double r) {
    return region_S_membership(schur_eigenvalues(m), z, r);
}

bool region_T_membership(const CMatrix& m, Complex z, double r) {
    return region_T_membership(schur_eigenvalues(m), z, r);
}

// ---------------------------------------------------------------------------
// Grids

void GridSpec::validate() const {
    if (re_count < 1 || im_count < 1)
        throw Error(ErrorKind::configuration, "grid counts must be positive");
    if (!(std::isfinite(re_min) && std::isfinite(re_max) && std::isfinite(im_min) && std::isfinite(im_max)))
        throw Error(ErrorKind::configuration, "grid bounds must be finite");
    if (re_max < re_min || im_max < im_min)
        throw Error(ErrorKind::configuration, "grid bounds are reversed");
}

double GridSpec::re_at(int i) const {
    return re_count == 1 ? re_min : re_min + (re_max - re_min) * i / (re_count - 1);
}

double GridSpec::im_at(int j) const {
    return im_count == 1 ? im_min : im_min + (im_max - im_min) * j / (im_count - 1);
}

const char* to_string(CellFlag flag) {
    switch (flag) {
    case CellFlag::ok: return "ok";
    case CellFlag::outside_half_plane: return "outside";
    case CellFlag::singular: return "singular";
    }
    return "unknown";
}

namespace {

constexpr double grid_singular_radius = 1e-12;

GridCell grid_cell(const ResolventEvaluator& ev, std::span<const Complex> excluded, Complex z) {
    GridCell cell;
    cell.z = z;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (Eigen::Index i = 0; i < ev.eigenvalues().size(); ++i) {
        if (std::abs(z - ev.eigenvalues()[i]) <= grid_singular_radius) {
            cell.resolvent_norm = infinity;
            cell.ratio = nan;
            cell.flag = CellFlag::singular;
            return cell;
        }
    }
    try {
        cell.resolvent_norm = ev.norm(z);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::singular_point) throw;
        cell.resolvent_norm = infinity;
        cell.ratio = nan;
        cell.flag = CellFlag::singular;
        return cell;
    }
    if (z.real() > 0.0) {
        cell.ratio = make_ratio(z, cell.resolvent_norm, excluded).ratio;
    } else {
        cell.ratio = nan;
        cell.flag = CellFlag::outside_half_plane;
    }
    return cell;
}

struct GridContext {
    ResolventEvaluator ev;
    std::vector<Complex> excluded;

    explicit GridContext(const CMatrix& m)
        : ev(m), excluded(boundary_excluded_spectrum(spectrum(m))) {}
};

} // namespace

std::vector<GridCell> resolvent_grid(const CMatrix& m, const GridSpec& spec) {
    spec.validate();
    const GridContext ctx(m);
    std::vector<GridCell> cells(spec.size());
    parallel_for(static_cast<std::ptrdiff_t>(cells.size()), [&](std::ptrdiff_t k) {
        const int j = static_cast<int>(k / spec.re_count);
        const int i = static_cast<int>(k % spec.re_count);
        cells[static_cast<std::size_t>(k)] = grid_cell(ctx.ev, ctx.excluded, {spec.re_at(i), spec.im_at(j)});
    });
    return cells;
}

std::vector<GridCell> resolvent_grid_serial(const CMatrix& m, const GridSpec& spec) {
    spec.validate();
    const GridContext ctx(m);
    std::vector<GridCell> cells;
    cells.reserve(spec.size());
    for (int j = 0; j < spec.im_count; ++j)
        for (int i = 0; i < spec.re_count; ++i)
            cells.push_back(grid_cell(ctx.ev, ctx.excluded, {spec.re_at(i), spec.im_at(j)}));
    return cells;
}

void write_grid_csv(std::ostream& os, std::span<const GridCell> cells) {
    os << "re,im,resolvent_norm,ratio,flag\n";
    char buf[160];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,", c.z.real(), c.z.imag(),
                      c.resolvent_norm, c.ratio);
        os << buf << to_string(c.flag) << '\n';
    }
}

} // namespace kreiss
