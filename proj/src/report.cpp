#include "kreiss/report.hpp"

#include <cmath>
#include <cstdio>

#include <openssl/evp.h>

#include "kreiss/error.hpp"

namespace kreiss {

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::io, "sha256 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

Json number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return v;
}

Json complex_json(Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

Json matrix_json(const Dense& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

template <class T>
Json optional_number(const std::optional<T>& v) {
    if (!v) return "auto";
    return number(static_cast<double>(*v));
}

Json location_json(const SearchLocation& l) {
    Json j;
    switch (l.kind) {
    case LocationKind::none: j["kind"] = "none"; break;
    case LocationKind::time:
        j["kind"] = "time";
        j["t"] = number(l.t);
        break;
    case LocationKind::power:
        j["kind"] = "power";
        j["nu"] = l.nu;
        break;
    case LocationKind::point:
        j["kind"] = "point";
        j["z"] = complex_json(l.z);
        break;
    }
    return j;
}

} // namespace

Json to_json(const SearchConfig& cfg) {
    Json j;
    j["coarse_resolution"] = cfg.coarse_resolution;
    j["refine_iterations"] = cfg.refine_iterations;
    j["divergence_threshold"] = number(cfg.divergence_threshold);
    j["t_max"] = optional_number(cfg.t_max);
    j["nu_max"] = cfg.nu_max;
    j["re_cap"] = optional_number(cfg.re_cap);
    j["im_cap"] = optional_number(cfg.im_cap);
    j["seeds_near_spectrum"] = cfg.seeds_near_spectrum;
    return j;
}

Json to_json(const SupSearchResult& r, bool with_trace) {
    Json j;
    j["value"] = number(r.value);
    j["diverged"] = r.diverged;
    j["finite"] = r.finite();
    j["argmax"] = location_json(r.argmax);
    Json growth = Json::array();
    for (const auto& g : r.growth_certificate) growth.push_back(Json::array({number(g.parameter), number(g.value)}));
    j["growth_certificate"] = std::move(growth);
    if (with_trace) {
        Json trace = Json::array();
        for (const auto& t : r.trace) trace.push_back(Json{{"level", t.level}, {"best", number(t.best)}});
        j["trace"] = std::move(trace);
    }
    j["budget_used"] = r.budget_used;
    j["note"] = r.note;
    return j;
}

Json to_json(const SpectrumReport& sp) {
    Json j;
    Json ev = Json::array();
    for (const auto& c : sp.eigenvalues)
        ev.push_back(Json{{"value", complex_json(c.value)},
                          {"algebraic_multiplicity", c.algebraic_multiplicity},
                          {"max_block_size", c.max_block_size}});
    j["eigenvalues"] = std::move(ev);
    j["abscissa"] = number(sp.abscissa);
    j["radius"] = number(sp.radius);
    j["cluster_tolerance"] = number(sp.cluster_tolerance);
    return j;
}

Json to_json(const StabilityVerdict& v) {
    Json j;
    j["stable"] = v.quasi_stable;
    if (v.witness)
        j["witness"] = Json{{"eigenvalue", complex_json(v.witness->eigenvalue)},
                            {"reason", to_string(v.witness->reason)},
                            {"block_size", v.witness->block_size}};
    else
        j["witness"] = nullptr;
    j["tolerance"] = number(v.tolerance);
    j["axis_tolerance"] = number(v.axis_tolerance);
    return j;
}

Json to_json(const Condition3Certificate& c) {
    Json j;
    j["mode"] = to_string(c.mode);
    j["scaling_eps"] = number(c.scaling_eps);
    j["K31"] = number(c.K31);
    j["K32"] = number(c.K32);
    j["kappa_S"] = number(c.kappa_S);
    j["reconstruction_residual"] = number(c.reconstruction_residual);
    j["ordering_valid"] = c.ordering_valid;
    j["triangular_valid"] = c.triangular_valid;
    j["diagonal_sign_valid"] = c.diagonal_sign_valid;
    j["valid"] = c.valid();
    Json profile = Json::array();
    for (const auto& p : c.scaling_profile)
        profile.push_back(Json{{"eps", number(p.eps)}, {"K31", number(p.K31)}, {"K32", number(p.K32)}});
    j["scaling_profile"] = std::move(profile);
    j["T"] = matrix_json(c.T);
    j["S"] = matrix_json(c.S);
    return j;
}

Json to_json(const Condition3Verification& v) {
    Json j;
    Json checks = Json::array();
    for (const auto& c : v.checks) checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"slack", number(c.slack)}});
    j["checks"] = std::move(checks);
    j["all_pass"] = v.all_pass;
    return j;
}

Json to_json(const Condition4Certificate& c) {
    Json j;
    j["mode"] = to_string(c.mode);
    j["K4"] = number(c.K4);
    j["lambda_min"] = number(c.lambda_min);
    j["lambda_max"] = number(c.lambda_max);
    j["negativity_residual"] = number(c.negativity_residual);
    j["residual_tolerance"] = number(c.residual_tolerance);
    j["valid"] = c.valid;
    j["H"] = matrix_json(c.H);
    return j;
}

Json to_json(const FamilySpec& s) {
    Json j;
    j["kind"] = to_string(s.kind);
    j["n"] = s.n;
    j["count"] = s.count;
    j["seed"] = s.seed;
    j["shift_margin"] = number(s.shift_margin);
    j["delta"] = number(s.delta);
    j["theta"] = number(s.theta);
    j["block_size"] = s.block_size;
    j["symbol"] = s.symbol;
    j["xi_min"] = number(s.xi_min);
    j["xi_max"] = number(s.xi_max);
    j["table_path"] = s.table_path;
    return j;
}

namespace {

Json side_json(const SideVerdict& s) {
    Json j;
    j["verdict"] = to_string(s.verdict);
    j["witness"] = s.witness ? Json(*s.witness) : Json(nullptr);
    Json g = Json::array();
    for (double v : s.growth_trace) g.push_back(number(v));
    j["growth_trace"] = std::move(g);
    return j;
}

} // namespace

Json to_json(const FamilyReport& rep) {
    Json j;
    j["mode"] = to_string(rep.mode);
    j["parameterized"] = rep.parameterized;
    j["member_count"] = rep.members.size();
    j["failures"] = rep.failures;
    j["uniformity"] = to_string(rep.uniformity);
    j["sup_K1"] = number(rep.sup_K1);
    j["sup_K2"] = number(rep.sup_K2);
    j["sup_calK"] = number(rep.sup_calK);
    j["sup_K31"] = number(rep.sup_K31);
    j["sup_K32"] = number(rep.sup_K32);
    j["calK_side"] = side_json(rep.calK_side);
    j["K1_side"] = side_json(rep.K1_side);
    Json members = Json::array();
    for (const auto& m : rep.members) {
        Json r;
        r["index"] = m.index;
        r["label"] = m.label;
        r["n"] = m.n;
        r["failed"] = m.failed;
        if (m.failed) {
            r["error"] = m.error;
        } else {
            r["stable"] = m.stable;
            r["K1"] = to_json(m.K1, false);
            r["K2"] = to_json(m.K2, false);
            r["calK"] = to_json(m.calK, false);
            r["K31"] = number(m.K31);
            r["K32"] = number(m.K32);
            r["certificate_bound"] = number(m.certificate_bound);
            r["certificate_valid"] = m.certificate_valid;
        }
        members.push_back(std::move(r));
    }
    j["members"] = std::move(members);
    return j;
}

Json analysis_report(const CMatrix& m, std::string_view input, const AnalyzeOptions& opt) {
    const bool cont = opt.mode == Mode::continuous;
    Json j;
    j["schema"] = report_schema;
    j["tool"] = "kreissometer";
    j["version"] = KREISS_VERSION;
    j["input_digest"] = "sha256:" + sha256_hex(input);

    const SpectrumReport sp = spectrum(m, opt.tol * (1.0 + spectral_norm(m)));
    j["matrix"] = Json{{"n", m.n()}, {"norm", number(sp.matrix_norm)}};
    j["spectrum"] = to_json(sp);
    j["mode"] = to_string(opt.mode);

    const StabilityVerdict verdict = cont ? classify_quasi_stable(sp, opt.tol) : classify_power_bounded(sp, opt.tol);
    const SupSearchResult K1 = cont ? sup_semigroup_norm(m, opt.search) : sup_power_norm(m, opt.search);
    const SupSearchResult K2 =
        cont ? kreiss_constant_continuous(m, opt.search) : kreiss_constant_discrete(m, opt.search);
    const SupSearchResult calK = cont ? calK_continuous(m, opt.search) : calK_discrete(m, opt.search);

    Json f;
    f[cont ? "sup_semigroup_norm" : "sup_power_norm"] = to_json(K1);
    f[cont ? "kreiss_constant_continuous" : "kreiss_constant_discrete"] = to_json(K2);
    f[cont ? "calK_continuous" : "calK_discrete"] = to_json(calK);
    j["functionals"] = std::move(f);

    if (opt.certify) {
        Json c;
        const Condition3Certificate c3 = build_condition3(m, opt.mode, opt.eps_scaling);
        Json c3j = to_json(c3);
        c3j["bound"] = number(cont ? bound_from_condition3(c3) : miller_region_bound(c3, 1.0));
        c3j["verification"] = to_json(verify_condition3(m, c3, c3.K31, c3.K32));
        c["condition3"] = std::move(c3j);
        try {
            c["condition4"] = to_json(build_condition4(m, opt.mode));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::unsolvable_on_boundary) throw;
            c["condition4"] = Json{{"error", to_string(e.kind())}, {"message", e.what()}};
        }
        j["certificates"] = std::move(c);
    }

    Json v = to_json(verdict);
    v["K1_finite"] = K1.finite();
    v["calK_finite"] = calK.finite();
    v["consistent"] = verdict.quasi_stable == K1.finite();
    j["verdict"] = std::move(v);

    Json cfg;
    cfg["mode"] = to_string(opt.mode);
    cfg["certify"] = opt.certify;
    cfg["tol"] = number(opt.tol);
    cfg["eps_scaling"] = number(opt.eps_scaling);
    cfg["search"] = to_json(opt.search);
    j["config"] = std::move(cfg);
    return j;
}

Json family_report_json(const FamilySpec& spec, const FamilyReport& rep, const SearchConfig& cfg) {
    Json j;
    j["schema"] = report_schema;
    j["tool"] = "kreissometer";
    j["version"] = KREISS_VERSION;
    j["family"] = to_json(spec);
    j["report"] = to_json(rep);
    j["config"] = Json{{"mode", to_string(rep.mode)}, {"search", to_json(cfg)}};
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace kreiss
