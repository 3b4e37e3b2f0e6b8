#include "kreiss/families.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "kreiss/error.hpp"
#include "kreiss/matrix_market.hpp"
#include "kreiss/parallel.hpp"

namespace kreiss {

const char* to_string(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::normal_stable: return "normal-stable";
    case FamilyKind::random_shifted_stable: return "random-shifted-stable";
    case FamilyKind::defective_axis: return "defective-axis";
    case FamilyKind::near_defective: return "near-defective";
    case FamilyKind::contraction: return "contraction";
    case FamilyKind::jordan_parade: return "jordan-parade";
    case FamilyKind::symbol_sampled: return "symbol-sampled";
    }
    return "unknown";
}

FamilyKind parse_family_kind(const std::string& s) {
    for (auto k : {FamilyKind::normal_stable, FamilyKind::random_shifted_stable, FamilyKind::defective_axis,
                   FamilyKind::near_defective, FamilyKind::contraction, FamilyKind::jordan_parade,
                   FamilyKind::symbol_sampled})
        if (s == to_string(k)) return k;
    throw Error(ErrorKind::spec, "unknown family kind '" + s + "'");
}

void FamilySpec::validate() const {
    if (n < 1) throw Error(ErrorKind::spec, "family dimension must be positive");
    if (count < 1) throw Error(ErrorKind::spec, "family member count must be positive");
    if ((kind == FamilyKind::defective_axis || kind == FamilyKind::near_defective) && (block_size < 2 || block_size > n))
        throw Error(ErrorKind::spec, "block size must satisfy 2 <= k <= n");
    if (kind == FamilyKind::near_defective && !(delta > 0.0))
        throw Error(ErrorKind::spec, "near-defective delta must be positive");
    if (kind == FamilyKind::random_shifted_stable && !(shift_margin >= 0.0))
        throw Error(ErrorKind::spec, "shift margin must be nonnegative");
    if (kind == FamilyKind::symbol_sampled && xi_max < xi_min)
        throw Error(ErrorKind::spec, "xi range is reversed");
}

namespace {

using Rng = std::mt19937_64;

Dense gaussian(Rng& rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    Dense m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(g(rng), g(rng)) / std::sqrt(2.0);
    return m;
}

Dense random_unitary(Rng& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Dense> qr(gaussian(rng, n));
    Dense q = qr.householderQ();
    const Dense r = qr.matrixQR();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

CMatrix normal_stable(Rng& rng, int n) {
    Dense d = Dense::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const bool on_axis = uniform(rng, 0.0, 1.0) < 0.25;
        const double re = on_axis ? 0.0 : -uniform(rng, 0.1, 2.0);
        d(i, i) = Complex(re, uniform(rng, -3.0, 3.0));
    }
    const Dense q = random_unitary(rng, n);
    return CMatrix(Dense(q * d * q.adjoint()));
}

CMatrix shifted_stable(Rng& rng, int n, double margin) {
    Dense g = gaussian(rng, n) / std::sqrt(static_cast<double>(n));
    Eigen::ComplexEigenSolver<Dense> es(g, false);
    const double a = spectral_abscissa(es.eigenvalues());
    g.diagonal().array() -= (a + margin);
    return CMatrix(std::move(g));
}

CMatrix stable_diagonal(Rng& rng, int n) {
    Dense d = Dense::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = Complex(-uniform(rng, 0.2, 2.0), uniform(rng, -2.0, 2.0));
    return CMatrix(std::move(d));
}

CMatrix defective_axis(Rng& rng, int n, int k) {
    const double theta = uniform(rng, -2.0, 2.0);
    CMatrix j = CMatrix::jordan(Complex(0.0, theta), k);
    return n > k ? direct_sum(j, stable_diagonal(rng, n - k)) : j;
}

CMatrix contraction(Rng& rng, int n) {
    const Dense g = gaussian(rng, n);
    const double rho = uniform(rng, 0.5, 1.0);
    return CMatrix(Dense(g * (rho / spectral_norm(g))));
}

CMatrix jordan_parade(Rng& rng, int n) {
    std::vector<int> sizes;
    int left = n;
    while (left > 0) {
        const int k = std::uniform_int_distribution<int>(1, left)(rng);
        sizes.push_back(k);
        left -= k;
    }
    if (n >= 2 && std::all_of(sizes.begin(), sizes.end(), [](int s) { return s == 1; })) {
        sizes.assign(1, 2);
        for (int i = 2; i < n; ++i) sizes.push_back(1);
    }
    Dense m = Dense::Zero(n, n);
    int at = 0;
    for (int k : sizes) {
        const Complex lambda(-uniform(rng, 0.2, 2.0), uniform(rng, -2.0, 2.0));
        m.block(at, at, k, k) = CMatrix::jordan(lambda, k).dense();
        at += k;
    }
    const Dense q = random_unitary(rng, n);
    return CMatrix(Dense(q * m * q.adjoint()));
}

std::vector<std::vector<double>> xi_line(double lo, double hi, int count) {
    std::vector<std::vector<double>> g;
    for (int i = 0; i < count; ++i) g.push_back({count == 1 ? lo : lo + (hi - lo) * i / (count - 1)});
    return g;
}

// Symbol registry ------------------------------------------------------------

std::map<std::string, SymbolFactory>& registry() {
    static std::map<std::string, SymbolFactory> r = [] {
        std::map<std::string, SymbolFactory> m;
        m["constant"] = [](int n) {
            return Symbol([n](const std::vector<double>&) { return CMatrix(Dense(-Dense::Identity(n, n))); });
        };
        m["transport"] = [](int n) {
            return Symbol([n](const std::vector<double>& xi) {
                Dense a = Dense::Zero(n, n);
                for (int i = 0; i < n; ++i) a(i, i) = Complex(0.0, xi.at(0) * (i + 1));
                return CMatrix(std::move(a));
            });
        };
        m["rotation"] = [](int n) {
            return Symbol([n](const std::vector<double>& xi) {
                Dense a = Dense::Zero(n, n);
                for (int i = 0; i + 1 < n; i += 2) {
                    a(i, i + 1) = xi.at(0);
                    a(i + 1, i) = -xi.at(0);
                }
                return CMatrix(std::move(a));
            });
        };
        m["defective-transport"] = [](int n) {
            return Symbol([n](const std::vector<double>& xi) {
                return CMatrix::jordan(Complex(0.0, xi.at(0)), n);
            });
        };
        return m;
    }();
    return r;
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

void register_symbol(const std::string& id, SymbolFactory factory) {
    std::lock_guard lock(registry_mutex());
    registry()[id] = std::move(factory);
}

Symbol make_symbol(const std::string& id, int n) {
    std::lock_guard lock(registry_mutex());
    const auto it = registry().find(id);
    if (it == registry().end()) throw Error(ErrorKind::spec, "unknown symbol '" + id + "'");
    return it->second(n);
}

std::vector<std::string> registered_symbols() {
    std::lock_guard lock(registry_mutex());
    std::vector<std::string> ids;
    for (const auto& [k, v] : registry()) ids.push_back(k);
    return ids;
}

std::string xi_label(const std::vector<double>& xi) {
    std::ostringstream os;
    os.precision(17);
    os << "xi=";
    for (std::size_t i = 0; i < xi.size(); ++i) os << (i ? "," : "") << xi[i];
    return os.str();
}

std::vector<SymbolSample> sample_symbol(const Symbol& symbol, const std::vector<std::vector<double>>& xi_grid) {
    std::vector<SymbolSample> out;
    out.reserve(xi_grid.size());
    for (const auto& xi : xi_grid) {
        SymbolSample s;
        s.xi = xi;
        try {
            s.matrix = symbol(xi);
        } catch (const std::exception& e) {
            s.error = e.what();
        }
        out.push_back(std::move(s));
    }
    return out;
}

Family generate_family(const FamilySpec& spec) {
    spec.validate();
    Family f;
    Rng rng(spec.seed);
    const int n = spec.n;
    auto push = [&](CMatrix m, std::string label) {
        f.members.push_back(std::move(m));
        f.labels.push_back(std::move(label));
    };
    switch (spec.kind) {
    case FamilyKind::normal_stable:
        for (int i = 0; i < spec.count; ++i) push(normal_stable(rng, n), "member " + std::to_string(i));
        break;
    case FamilyKind::random_shifted_stable:
        for (int i = 0; i < spec.count; ++i) push(shifted_stable(rng, n, spec.shift_margin), "member " + std::to_string(i));
        break;
    case FamilyKind::defective_axis:
        for (int i = 0; i < spec.count; ++i) push(defective_axis(rng, n, spec.block_size), "member " + std::to_string(i));
        break;
    case FamilyKind::near_defective:
        f.parameterized = true;
        for (int m = 1; m <= spec.count; ++m) {
            const double d = spec.delta / m;
            CMatrix j = CMatrix::jordan(Complex(-d, spec.theta), spec.block_size);
            if (n > spec.block_size) j = direct_sum(j, CMatrix(Dense(-Dense::Identity(n - spec.block_size, n - spec.block_size))));
            std::ostringstream label;
            label.precision(17);
            label << "delta=" << d;
            push(std::move(j), label.str());
        }
        break;
    case FamilyKind::contraction:
        for (int i = 0; i < spec.count; ++i) push(contraction(rng, n), "member " + std::to_string(i));
        break;
    case FamilyKind::jordan_parade:
        for (int i = 0; i < spec.count; ++i) push(jordan_parade(rng, n), "member " + std::to_string(i));
        break;
    case FamilyKind::symbol_sampled: {
        f.parameterized = true;
        if (spec.symbol == "user-table") {
            const SymbolTable table = read_symbol_table_file(spec.table_path);
            for (std::size_t i = 0; i < table.matrices.size(); ++i) push(table.matrices[i], xi_label(table.xi[i]));
            break;
        }
        const Symbol sym = make_symbol(spec.symbol, n);
        for (auto& s : sample_symbol(sym, xi_line(spec.xi_min, spec.xi_max, spec.count))) {
            if (!s.matrix) throw Error(ErrorKind::spec, "symbol evaluation failed at " + xi_label(s.xi) + ": " + s.error);
            push(std::move(*s.matrix), xi_label(s.xi));
        }
        break;
    }
    }
    return f;
}

// ---------------------------------------------------------------------------

const char* to_string(Uniformity u) {
    switch (u) {
    case Uniformity::uniform: return "uniform";
    case Uniformity::non_uniform: return "non-uniform";
    case Uniformity::inconclusive: return "inconclusive";
    }
    return "unknown";
}

SideVerdict side_verdict(const std::vector<const SupSearchResult*>& results, const std::vector<bool>& failed,
                         bool parameterized, bool certificates_ok) {
    SideVerdict v;
    bool any_failed = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (failed[i]) {
            any_failed = true;
            v.growth_trace.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const SupSearchResult& r = *results[i];
        v.growth_trace.push_back(r.value);
        if (!r.finite() && !v.witness) v.witness = static_cast<int>(i);
    }
    if (v.witness) {
        v.verdict = Uniformity::non_uniform;
        return v;
    }
    if (any_failed) {
        v.verdict = Uniformity::inconclusive;
        return v;
    }
    if (parameterized && v.growth_trace.size() >= 3) {
        const auto& g = v.growth_trace;
        const std::size_t n = g.size();
        const bool tail_up = g[n - 1] > g[n - 2] && g[n - 2] > g[n - 3];
        const double low = *std::min_element(g.begin(), g.end());
        if (tail_up && g.back() >= 2.0 * low) {
            v.verdict = Uniformity::inconclusive;
            v.witness = static_cast<int>(n - 1);
            return v;
        }
    }
    v.verdict = certificates_ok ? Uniformity::uniform : Uniformity::inconclusive;
    return v;
}

FamilyReport family_report(const Family& family, Mode mode, const SearchConfig& cfg) {
    if (family.members.empty()) throw Error(ErrorKind::spec, "family must be nonempty");
    cfg.validate();
    FamilyReport rep;
    rep.mode = mode;
    rep.parameterized = family.parameterized;
    rep.members.resize(family.members.size());

    parallel_for(static_cast<std::ptrdiff_t>(family.members.size()), [&](std::ptrdiff_t i) {
        const auto idx = static_cast<std::size_t>(i);
        const CMatrix& m = family.members[idx];
        MemberRecord& rec = rep.members[idx];
        rec.index = static_cast<int>(i);
        rec.label = idx < family.labels.size() ? family.labels[idx] : "member " + std::to_string(i);
        rec.n = static_cast<int>(m.n());
        try {
            if (mode == Mode::continuous) {
                rec.K1 = sup_semigroup_norm(m, cfg);
                rec.K2 = kreiss_constant_continuous(m, cfg);
                rec.calK = calK_continuous(m, cfg);
                rec.stable = classify_quasi_stable(m).quasi_stable;
            } else {
                rec.K1 = sup_power_norm(m, cfg);
                rec.K2 = kreiss_constant_discrete(m, cfg);
                rec.calK = calK_discrete(m, cfg);
                rec.stable = classify_power_bounded(m).quasi_stable;
            }
            const Condition3Certificate cert = build_condition3(m, mode);
            rec.K31 = cert.K31;
            rec.K32 = cert.K32;
            rec.certificate_valid = cert.valid();
            rec.certificate_bound = mode == Mode::continuous ? bound_from_condition3(cert) : miller_region_bound(cert, 1.0);
        } catch (const std::exception& e) {
            rec.failed = true;
            rec.error = e.what();
        }
    });

    std::vector<const SupSearchResult*> k1, calk;
    std::vector<bool> failed;
    bool certs_ok = true;
    for (const auto& r : rep.members) {
        k1.push_back(&r.K1);
        calk.push_back(&r.calK);
        failed.push_back(r.failed);
        if (r.failed) {
            ++rep.failures;
            continue;
        }
        certs_ok = certs_ok && r.certificate_valid;
        auto sup_of = [](const SupSearchResult& s) { return s.diverged ? infinity : s.value; };
        rep.sup_K1 = std::max(rep.sup_K1, sup_of(r.K1));
        rep.sup_K2 = std::max(rep.sup_K2, sup_of(r.K2));
        rep.sup_calK = std::max(rep.sup_calK, sup_of(r.calK));
        rep.sup_K31 = std::max(rep.sup_K31, r.K31);
        rep.sup_K32 = std::max(rep.sup_K32, r.K32);
    }
    rep.calK_side = side_verdict(calk, failed, family.parameterized, certs_ok);
    rep.K1_side = side_verdict(k1, failed, family.parameterized, true);
    rep.uniformity = rep.calK_side.verdict;
    return rep;
}

} // namespace kreiss
