#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "kreiss/error.hpp"
#include "kreiss/families.hpp"
#include "kreiss/matrix_market.hpp"

using namespace kreiss;

namespace {

SearchConfig quick() {
    SearchConfig c;
    c.coarse_resolution = 24;
    c.refine_iterations = 40;
    return c;
}

} // namespace

TEST_CASE("generation is deterministic in the seed") {
    FamilySpec s;
    s.kind = FamilyKind::random_shifted_stable;
    s.n = 4;
    s.count = 3;
    s.seed = 42;
    const Family a = generate_family(s);
    const Family b = generate_family(s);
    REQUIRE(a.members.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(a.members[i].dense() == b.members[i].dense());
    s.seed = 43;
    CHECK(generate_family(s).members[0].dense() != a.members[0].dense());
}

TEST_CASE("generated kinds have their advertised spectra") {
    for (auto kind : {FamilyKind::normal_stable, FamilyKind::random_shifted_stable, FamilyKind::jordan_parade}) {
        FamilySpec s;
        s.kind = kind;
        s.n = 5;
        s.count = 4;
        for (const auto& m : generate_family(s).members) CHECK(classify_quasi_stable(m).quasi_stable);
    }
    FamilySpec d;
    d.kind = FamilyKind::defective_axis;
    d.n = 4;
    d.block_size = 3;
    d.count = 3;
    for (const auto& m : generate_family(d).members) CHECK_FALSE(classify_quasi_stable(m).quasi_stable);
    FamilySpec c;
    c.kind = FamilyKind::contraction;
    c.n = 4;
    c.count = 5;
    for (const auto& m : generate_family(c).members) CHECK(spectral_norm(m) <= 1.0 + 1e-12);
    FamilySpec nd;
    nd.kind = FamilyKind::near_defective;
    nd.n = 3;
    nd.count = 4;
    const Family f = generate_family(nd);
    CHECK(f.parameterized);
    CHECK(f.members[3](0, 0).real() == doctest::Approx(-0.25));
}

TEST_CASE("family spec validation") {
    FamilySpec s;
    s.count = 0;
    CHECK_THROWS_AS(generate_family(s), Error);
    s = {};
    s.kind = FamilyKind::defective_axis;
    s.n = 2;
    s.block_size = 3;
    CHECK_THROWS_AS(generate_family(s), Error);
    CHECK_THROWS_AS(parse_family_kind("nope"), Error);
    CHECK(parse_family_kind("jordan-parade") == FamilyKind::jordan_parade);
}

TEST_CASE("symbols") {
    const Symbol t = make_symbol("transport", 3);
    const CMatrix a = t({2.0});
    CHECK(a(2, 2) == Complex(0.0, 6.0));
    CHECK_THROWS_AS(make_symbol("missing", 2), Error);
    register_symbol("scaled-identity", [](int n) {
        return Symbol([n](const std::vector<double>& xi) {
            if (xi.at(0) > 5.0) throw Error(ErrorKind::domain, "out of range");
            return CMatrix(Dense(-xi[0] * Dense::Identity(n, n)));
        });
    });
    const auto samples = sample_symbol(make_symbol("scaled-identity", 2), {{1.0}, {9.0}});
    REQUIRE(samples.size() == 2);
    CHECK(samples[0].matrix.has_value());
    CHECK_FALSE(samples[1].matrix.has_value());
    CHECK_FALSE(samples[1].error.empty());
    const auto ids = registered_symbols();
    CHECK(std::find(ids.begin(), ids.end(), "defective-transport") != ids.end());
}

TEST_CASE("family reports and verdicts") {
    FamilySpec s;
    s.kind = FamilyKind::normal_stable;
    s.n = 3;
    s.count = 4;
    const FamilyReport r = family_report(generate_family(s), Mode::continuous, quick());
    CHECK(r.failures == 0);
    CHECK(r.uniformity == Uniformity::uniform);
    CHECK(r.sup_calK == doctest::Approx(1.0).epsilon(1e-6));

    FamilySpec d;
    d.kind = FamilyKind::defective_axis;
    d.n = 3;
    d.count = 2;
    const FamilyReport rd = family_report(generate_family(d), Mode::continuous, quick());
    CHECK(rd.uniformity == Uniformity::non_uniform);
    CHECK(rd.calK_side.witness.has_value());

    FamilySpec nd;
    nd.kind = FamilyKind::near_defective;
    nd.n = 2;
    nd.count = 8;
    // calK(J(-1/m, 2)) grows like m: finite members, no uniform bound.
    const FamilyReport rn = family_report(generate_family(nd), Mode::continuous, quick());
    CHECK(rn.failures == 0);
    CHECK(rn.calK_side.verdict == Uniformity::inconclusive);
    CHECK(rn.K1_side.verdict == Uniformity::inconclusive);
    CHECK(rn.calK_side.growth_trace.back() > 4.0 * rn.calK_side.growth_trace.front());

    FamilySpec sym;
    sym.kind = FamilyKind::symbol_sampled;
    sym.symbol = "defective-transport";
    sym.n = 2;
    sym.count = 3;
    const FamilyReport rs = family_report(generate_family(sym), Mode::continuous, quick());
    CHECK(rs.uniformity == Uniformity::non_uniform);
}

TEST_CASE("side verdict rules") {
    SupSearchResult a, b, c;
    a.value = 1.0;
    b.value = 3.0;
    c.value = 9.0;
    std::vector<const SupSearchResult*> rs{&a, &b, &c};
    CHECK(side_verdict(rs, {false, false, false}, true, true).verdict == Uniformity::inconclusive);
    SupSearchResult flat;
    flat.value = 9.0;
    std::vector<const SupSearchResult*> bumpy{&a, &a, &b, &c, &flat};
    CHECK(side_verdict(bumpy, std::vector<bool>(5, false), true, true).verdict == Uniformity::uniform);
    std::vector<const SupSearchResult*> late{&a, &a, &a, &b, &c};
    CHECK(side_verdict(late, std::vector<bool>(5, false), true, true).verdict == Uniformity::inconclusive);
    CHECK(side_verdict(rs, {false, false, false}, false, true).verdict == Uniformity::uniform);
    CHECK(side_verdict(rs, {false, false, false}, false, false).verdict == Uniformity::inconclusive);
    CHECK(side_verdict(rs, {false, true, false}, false, true).verdict == Uniformity::inconclusive);
    c.diverged = true;
    const SideVerdict v = side_verdict(rs, {false, false, false}, false, true);
    CHECK(v.verdict == Uniformity::non_uniform);
    CHECK(*v.witness == 2);
}

TEST_CASE("user symbol table") {
    const std::string path = "symbol_table_test.mtx";
    {
        std::ofstream f(path);
        f << "% xi: 0\n%%MatrixMarket matrix array real general\n1 1\n-1\n"
          << "% xi: 1\n%%MatrixMarket matrix array complex general\n1 1\n-1 2\n";
    }
    FamilySpec s;
    s.kind = FamilyKind::symbol_sampled;
    s.symbol = "user-table";
    s.table_path = path;
    const Family f = generate_family(s);
    REQUIRE(f.members.size() == 2);
    CHECK(f.members[1](0, 0) == Complex(-1.0, 2.0));
    CHECK(f.labels[1] == "xi=1");
    std::remove(path.c_str());
}

TEST_CASE("constant symbol gives identical members") {
    FamilySpec s;
    s.kind = FamilyKind::symbol_sampled;
    s.symbol = "constant";
    s.n = 1;
    s.count = 3;
    const Family f = generate_family(s);
    REQUIRE(f.members.size() == 3);
    for (const auto& m : f.members) CHECK(m.dense() == CMatrix::diagonal({-1.0}).dense());
}

TEST_CASE("semigroup side and calK side verdicts agree on the curated kinds") {
    const std::vector<FamilyKind> kinds{FamilyKind::normal_stable, FamilyKind::random_shifted_stable,
                                        FamilyKind::defective_axis, FamilyKind::near_defective,
                                        FamilyKind::jordan_parade};
    for (auto kind : kinds) {
        FamilySpec s;
        s.kind = kind;
        s.n = 3;
        s.count = kind == FamilyKind::near_defective ? 20 : 4;
        s.seed = 3;
        const FamilyReport r = family_report(generate_family(s), Mode::continuous, quick());
        CAPTURE(to_string(kind));
        CHECK(r.failures == 0);
        CHECK(r.K1_side.verdict == r.calK_side.verdict);
    }
}
