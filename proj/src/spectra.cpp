#include "kreiss/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kreiss {

const char* to_string(InstabilityReason reason) {
    switch (reason) {
    case InstabilityReason::positive_real_part: return "positive-real-part";
    case InstabilityReason::defective_on_axis: return "defective-on-axis";
    }
    return "unknown";
}

double default_cluster_tolerance(const CMatrix& m) {
    return default_relative_tolerance * (1.0 + spectral_norm(m));
}

namespace {

using Indices = std::vector<Eigen::Index>;

// Single-linkage groups of eigenvalues at the given radius, in index order.
std::vector<Indices> link_groups(const DenseVector& ev, const Indices& members, double radius) {
    const std::size_t m = members.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (std::abs(ev[members[a]] - ev[members[b]]) <= radius) parent[find(b)] = find(a);

    std::vector<Indices> groups;
    std::vector<std::ptrdiff_t> slot(m, -1);
    for (std::size_t a = 0; a < m; ++a) {
        const std::size_t root = find(a);
        if (slot[root] < 0) {
            slot[root] = static_cast<std::ptrdiff_t>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[root])].push_back(members[a]);
    }
    return groups;
}

struct Nullities {
    std::vector<int> by_power; // by_power[k-1] = nullity of (M - mu I)^k
};

Nullities nullities(const Dense& m, Complex mu, int max_power, double tol) {
    const Eigen::Index n = m.rows();
    Dense shifted = m;
    shifted.diagonal().array() -= mu;
    const double base = spectral_norm(shifted);
    Nullities out;
    Dense power = Dense::Identity(n, n);
    for (int k = 1; k <= max_power; ++k) {
        power = power * shifted;
        const double threshold = tol * std::pow(base, k);
        const Eigen::VectorXd sv = singular_values(power);
        int nullity = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] <= threshold) ++nullity;
        out.by_power.push_back(nullity);
    }
    return out;
}

EigenCluster make_cluster(const Dense& m, const DenseVector& ev, const Indices& group, double tol,
                          bool force) {
    const int size = static_cast<int>(group.size());
    Complex mean = 0.0;
    for (auto i : group) mean += ev[i];
    mean /= static_cast<double>(size);
    EigenCluster c{mean, size, 1};
    if (size == 1) return c;
    const Nullities nl = nullities(m, mean, size, tol);
    if (!force && nl.by_power.back() < size) {
        c.algebraic_multiplicity = 0; // rejected
        return c;
    }
    c.max_block_size = size;
    for (int k = 1; k <= size; ++k) {
        if (nl.by_power[static_cast<std::size_t>(k - 1)] >= size) {
            c.max_block_size = k;
            break;
        }
    }
    return c;
}

void resolve_group(const Dense& m, const DenseVector& ev, const Indices& members, int level,
                   const std::vector<double>& radii, double tol, std::vector<EigenCluster>& out) {
    for (const Indices& g : link_groups(ev, members, radii[static_cast<std::size_t>(level)])) {
        const bool finest = level + 1 == static_cast<int>(radii.size());
        EigenCluster c = make_cluster(m, ev, g, tol, finest);
        if (c.algebraic_multiplicity > 0) {
            out.push_back(c);
        } else {
            resolve_group(m, ev, g, level + 1, radii, tol, out);
        }
    }
}

} // namespace

SpectrumReport spectrum(const CMatrix& m, std::optional<double> cluster_tol) {
    const SchurForm form = schur(m);
    SpectrumReport report;
    report.matrix_norm = spectral_norm(m);
    report.cluster_tolerance = cluster_tol.value_or(default_relative_tolerance * (1.0 + report.matrix_norm));
    report.schur_diagonal = form.eigenvalues();
    const DenseVector& ev = report.schur_diagonal;
    const int n = static_cast<int>(m.n());

    // Radii scale^(1) * rel^(1/p) for p = n..1; coarse first.
    const double scale = 1.0 + report.matrix_norm;
    const double rel = report.cluster_tolerance / scale;
    std::vector<double> radii;
    if (rel > 0.0 && rel < 1.0) {
        for (int p = n; p >= 1; --p) radii.push_back(scale * std::pow(rel, 1.0 / p));
    } else {
        radii.push_back(report.cluster_tolerance);
    }

    Indices all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    resolve_group(m.dense(), ev, all, 0, radii, report.cluster_tolerance, report.eigenvalues);

    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [](const EigenCluster& a, const EigenCluster& b) {
                  if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
                  return a.value.imag() < b.value.imag();
              });
    report.abscissa = -infinity;
    report.radius = 0.0;
    for (const auto& c : report.eigenvalues) {
        report.abscissa = std::max(report.abscissa, c.value.real());
        report.radius = std::max(report.radius, std::abs(c.value));
    }
    return report;
}

StabilityVerdict classify_quasi_stable(const SpectrumReport& report, double tol) {
    StabilityVerdict v;
    v.tolerance = tol;
    v.axis_tolerance = tol * (1.0 + report.matrix_norm);
    for (const auto& c : report.eigenvalues) {
        const double re = c.value.real();
        if (re > v.axis_tolerance) {
            v.quasi_stable = false;
            v.witness = StabilityWitness{c.value, InstabilityReason::positive_real_part, c.max_block_size};
            return v;
        }
        if (std::abs(re) <= v.axis_tolerance && c.max_block_size > 1) {
            v.quasi_stable = false;
            v.witness = StabilityWitness{c.value, InstabilityReason::defective_on_axis, c.max_block_size};
            return v;
        }
    }
    return v;
}

StabilityVerdict classify_quasi_stable(const CMatrix& m, double tol) {
    const double axis = tol * (1.0 + spectral_norm(m));
    return classify_quasi_stable(spectrum(m, axis), tol);
}

std::vector<Complex> boundary_excluded_spectrum(const SpectrumReport& report) {
    std::vector<Complex> out;
    for (const auto& c : report.eigenvalues)
        if (c.value.real() <= report.cluster_tolerance) out.push_back(c.value);
    return out;
}

std::vector<Complex> cluster_values(const SpectrumReport& report) {
    std::vector<Complex> out;
    out.reserve(report.eigenvalues.size());
    for (const auto& c : report.eigenvalues) out.push_back(c.value);
    return out;
}

} // namespace kreiss

namespace kreiss {

StabilityVerdict classify_power_bounded(const SpectrumReport& report, double tol) {
    StabilityVerdict v;
    v.tolerance = tol;
    v.axis_tolerance = tol * (1.0 + report.matrix_norm);
    for (const auto& c : report.eigenvalues) {
        const double gap = std::abs(c.value) - 1.0;
        if (gap > v.axis_tolerance) {
            v.quasi_stable = false;
            v.witness = StabilityWitness{c.value, InstabilityReason::positive_real_part, c.max_block_size};
            return v;
        }
        if (std::abs(gap) <= v.axis_tolerance && c.max_block_size > 1) {
            v.quasi_stable = false;
            v.witness = StabilityWitness{c.value, InstabilityReason::defective_on_axis, c.max_block_size};
            return v;
        }
    }
    return v;
}

StabilityVerdict classify_power_bounded(const CMatrix& m, double tol) {
    const double axis = tol * (1.0 + spectral_norm(m));
    return classify_power_bounded(spectrum(m, axis), tol);
}

} // namespace kreiss
