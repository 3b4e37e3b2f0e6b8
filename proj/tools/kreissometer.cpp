#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kreiss/cauchy.hpp"
#include "kreiss/error.hpp"
#include "kreiss/matrix_market.hpp"
#include "kreiss/parallel.hpp"
#include "kreiss/report.hpp"

using namespace kreiss;

namespace {

enum Exit { ok = 0, usage = 1, parse_error = 2, numerical = 3, io_error = 4 };

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::invalid_matrix: return parse_error;
    case ErrorKind::io: return io_error;
    case ErrorKind::spec:
    case ErrorKind::configuration: return usage;
    default: return numerical;
    }
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw Error(ErrorKind::io, "cannot write '" + out + "'");
    f << text;
    if (!f) throw Error(ErrorKind::io, "write failed for '" + out + "'");
}

struct SearchFlags {
    SearchConfig cfg;
    double t_max = 0.0;
    double re_cap = 0.0;
    double im_cap = 0.0;

    void add(CLI::App* app) {
        app->add_option("--coarse", cfg.coarse_resolution, "coarse grid resolution per axis")->capture_default_str();
        app->add_option("--refine", cfg.refine_iterations, "refinement iterations")->capture_default_str();
        app->add_option("--threshold", cfg.divergence_threshold, "divergence threshold")->capture_default_str();
        app->add_option("--t-max", t_max, "semigroup time window (default automatic)");
        app->add_option("--nu-max", cfg.nu_max, "largest power examined")->capture_default_str();
        app->add_option("--re-max", re_cap, "real-part cap of the plane search (default automatic)");
        app->add_option("--im-max", im_cap, "imaginary-part cap of the plane search (default automatic)");
        app->add_flag("!--no-spectral-seeds", cfg.seeds_near_spectrum, "skip approach sequences toward eigenvalues");
    }

    SearchConfig get(CLI::App* app) const {
        SearchConfig c = cfg;
        if (app->count("--t-max")) c.t_max = t_max;
        if (app->count("--re-max")) c.re_cap = re_cap;
        if (app->count("--im-max")) c.im_cap = im_cap;
        c.validate();
        return c;
    }
};

struct ModeFlags {
    std::string mode = "continuous";
    bool discrete = false;

    void add(CLI::App* app) {
        app->add_option("--mode", mode, "continuous|discrete")
            ->check(CLI::IsMember({"continuous", "discrete"}))
            ->capture_default_str();
        app->add_flag("--discrete", discrete, "same as --mode discrete");
    }

    Mode get() const { return discrete ? Mode::discrete : parse_mode(mode); }
};

struct GridFlags {
    GridSpec spec{-2.0, 2.0, -2.0, 2.0, 41, 41};
    int grid = 0;

    void add(CLI::App* app) {
        app->add_option("--re-min", spec.re_min)->capture_default_str();
        app->add_option("--re-max", spec.re_max)->capture_default_str();
        app->add_option("--im-min", spec.im_min)->capture_default_str();
        app->add_option("--im-max", spec.im_max)->capture_default_str();
        app->add_option("--re-count", spec.re_count)->capture_default_str();
        app->add_option("--im-count", spec.im_count)->capture_default_str();
        app->add_option("--grid", grid, "points per axis (sets both counts)");
    }

    GridSpec get() const {
        GridSpec s = spec;
        if (grid > 0) s.re_count = s.im_count = grid;
        s.validate();
        return s;
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap_from_env();

    CLI::App app{"Resolvent and Kreiss-constant analysis of dense complex matrices"};
    app.set_version_flag("--version", KREISS_VERSION);
    app.require_subcommand(1);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "stability functionals and certificates for one matrix");
    std::string analyze_path, analyze_out;
    AnalyzeOptions aopt;
    SearchFlags asearch;
    ModeFlags amode;
    analyze->add_option("matrix", analyze_path, "Matrix Market file")->required();
    analyze->add_flag("--certify", aopt.certify, "build condition-3 and condition-4 certificates");
    analyze->add_option("--tol", aopt.tol, "relative classification tolerance")->capture_default_str();
    analyze->add_option("--eps-scaling", aopt.eps_scaling, "condition-3 scaling epsilon")->capture_default_str();
    analyze->add_option("--out", analyze_out, "output path (default stdout)");
    amode.add(analyze);
    asearch.add(analyze);

    // grid
    auto* grid = app.add_subcommand("grid", "resolvent norm and ratio on a rectangular grid (CSV)");
    std::string grid_path, grid_out;
    GridFlags gflags;
    grid->add_option("matrix", grid_path, "Matrix Market file")->required();
    grid->add_option("--out", grid_out, "output path (default stdout)");
    gflags.add(grid);

    // region
    auto* region = app.add_subcommand("region", "S(M,r) / T(M,r) membership samples with the region bound (CSV)");
    std::string region_path, region_out;
    double region_r = 1.0, region_eps = 1.0;
    GridFlags rflags;
    ModeFlags rmode;
    region->add_option("matrix", region_path, "Matrix Market file")->required();
    region->add_option("--r", region_r, "region parameter")->capture_default_str();
    region->add_option("--eps-scaling", region_eps, "condition-3 scaling epsilon")->capture_default_str();
    region->add_option("--out", region_out, "output path (default stdout)");
    rflags.add(region);
    rmode.add(region);

    // family
    auto* family = app.add_subcommand("family", "uniformity sweep over a generated family (JSON)");
    FamilySpec fspec;
    std::string fkind = "normal-stable", family_out;
    SearchFlags fsearch;
    ModeFlags fmode;
    family->add_option("--kind", fkind, "family kind")->capture_default_str();
    family->add_option("--n", fspec.n)->capture_default_str();
    family->add_option("--count", fspec.count)->capture_default_str();
    family->add_option("--seed", fspec.seed)->capture_default_str();
    family->add_option("--shift-margin", fspec.shift_margin)->capture_default_str();
    family->add_option("--delta", fspec.delta)->capture_default_str();
    family->add_option("--theta", fspec.theta)->capture_default_str();
    family->add_option("--block-size", fspec.block_size)->capture_default_str();
    family->add_option("--symbol", fspec.symbol)->capture_default_str();
    family->add_option("--xi-min", fspec.xi_min)->capture_default_str();
    family->add_option("--xi-max", fspec.xi_max)->capture_default_str();
    family->add_option("--table", fspec.table_path, "symbol table file (with --symbol user-table)");
    family->add_option("--out", family_out, "output path (default stdout)");
    fmode.add(family);
    fsearch.add(family);

    // cauchy
    auto* cauchy = app.add_subcommand("cauchy", "contour solution of the Cauchy problem and envelope comparison (CSV)");
    std::string cauchy_path, cauchy_out, solution_out, forcing = "constant";
    double scalar = 0.0, forcing_param = 1.0, c_alpha = 0.0, c_kold = 0.0, c_knew = 0.0;
    CauchyConfig ccfg;
    cauchy->add_option("matrix", cauchy_path, "Matrix Market file");
    cauchy->add_option("--scalar", scalar, "use the 1x1 matrix [value] instead of a file");
    cauchy->add_option("--gamma", ccfg.gamma)->capture_default_str();
    cauchy->add_option("--alpha", c_alpha, "classical-bound shift (default abscissa + 1e-2)");
    cauchy->add_option("--k-old", c_kold, "classical constant (default computed)");
    cauchy->add_option("--k-new", c_knew, "sharpened constant (default computed)");
    cauchy->add_option("--y-max", ccfg.y_max)->capture_default_str();
    cauchy->add_option("--y-count", ccfg.y_count)->capture_default_str();
    cauchy->add_option("--table-count", ccfg.table_count)->capture_default_str();
    cauchy->add_option("--t", ccfg.t_eval, "evaluation times")->capture_default_str();
    cauchy->add_option("--forcing", forcing, "constant|exponential|gaussian|zero")->capture_default_str();
    cauchy->add_option("--forcing-param", forcing_param, "decay rate or pulse centre")->capture_default_str();
    cauchy->add_option("--out", cauchy_out, "envelope CSV path (default stdout)");
    cauchy->add_option("--solution-out", solution_out, "per-t solution CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*analyze) {
            const std::string text = slurp(analyze_path);
            std::istringstream in(text);
            const CMatrix m = read_matrix_market(in, analyze_path);
            aopt.mode = amode.get();
            aopt.search = asearch.get(analyze);
            emit(dump(analysis_report(m, text, aopt)), analyze_out);
        } else if (*grid) {
            const CMatrix m = read_matrix_market_file(grid_path);
            const auto cells = resolvent_grid(m, gflags.get());
            std::ostringstream os;
            write_grid_csv(os, cells);
            emit(os.str(), grid_out);
        } else if (*region) {
            const CMatrix m = read_matrix_market_file(region_path);
            const Mode mode = rmode.get();
            const GridSpec spec = rflags.get();
            const Condition3Certificate cert = build_condition3(m, mode, region_eps);
            const double K = miller_region_bound(cert, region_r);
            const ResolventEvaluator ev(m);
            const DenseVector& d = ev.eigenvalues();
            const std::vector<Complex> lambdas(d.data(), d.data() + d.size());
            std::vector<std::string> rows(spec.size());
            parallel_for(static_cast<std::ptrdiff_t>(spec.size()), [&](std::ptrdiff_t k) {
                const int i = static_cast<int>(k % spec.re_count);
                const int j = static_cast<int>(k / spec.re_count);
                const Complex z(spec.re_at(i), spec.im_at(j));
                const double value = mode == Mode::continuous ? region_S_value(lambdas, z) : region_T_value(lambdas, z);
                const bool member = mode == Mode::continuous ? region_S_membership(lambdas, z, region_r)
                                                             : region_T_membership(lambdas, z, region_r);
                double dmin = infinity;
                for (const Complex& l : lambdas) dmin = std::min(dmin, std::abs(z - l));
                std::string rn = "inf", bound = "inf", holds = "";
                if (dmin > 0.0) {
                    bound = fmt(K / dmin);
                    try {
                        const double r = ev.norm(z);
                        rn = fmt(r);
                        if (member) holds = r <= K / dmin * (1.0 + 1e-8) ? "1" : "0";
                    } catch (const Error& e) {
                        if (e.kind() != ErrorKind::singular_point) throw;
                    }
                }
                rows[static_cast<std::size_t>(k)] = fmt(z.real()) + "," + fmt(z.imag()) + "," + fmt(value) + "," +
                                                     (member ? "1" : "0") + "," + rn + "," + bound + "," + holds + "\n";
            });
            std::string text = "re,im,region_value,member,resolvent_norm,bound,holds\n";
            for (const auto& r : rows) text += r;
            emit(text, region_out);
        } else if (*family) {
            fspec.kind = parse_family_kind(fkind);
            const SearchConfig cfg = fsearch.get(family);
            const Family fam = generate_family(fspec);
            const FamilyReport rep = family_report(fam, fmode.get(), cfg);
            emit(dump(family_report_json(fspec, rep, cfg)), family_out);
        } else if (*cauchy) {
            CMatrix a;
            if (cauchy->count("--scalar")) a = CMatrix{{Complex(scalar)}};
            else if (!cauchy_path.empty()) a = read_matrix_market_file(cauchy_path);
            else throw Error(ErrorKind::configuration, "cauchy needs a matrix file or --scalar");
            if (cauchy->count("--alpha")) ccfg.alpha = c_alpha;
            if (cauchy->count("--k-old")) ccfg.K_old = c_kold;
            if (cauchy->count("--k-new")) ccfg.K_new = c_knew;
            const EnvelopeComparison cmp = envelope_comparison(a, ccfg, make_forcing(forcing, a.n(), forcing_param));
            std::ostringstream env;
            write_envelope_csv(env, cmp);
            emit(env.str(), cauchy_out);
            if (!solution_out.empty()) {
                std::ostringstream sol;
                write_solution_csv(sol, cmp);
                emit(sol.str(), solution_out);
            }
            std::cerr << "alpha=" << fmt(cmp.alpha) << " K_old=" << fmt(cmp.K_old) << " K_new=" << fmt(cmp.K_new)
                      << " violations=" << cmp.violations << (cmp.note.empty() ? "" : " note: " + cmp.note) << "\n";
        }
    } catch (const Error& e) {
        std::cerr << "kreissometer: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "kreissometer: " << e.what() << "\n";
        return numerical;
    }
    return ok;
}
