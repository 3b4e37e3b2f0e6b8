#include <doctest.h>

#include <random>

#include "kreiss/certificates.hpp"
#include "kreiss/error.hpp"
#include "oracles.hpp"

using namespace kreiss;

TEST_CASE("condition-3 certificate for a scaled Jordan-like block") {
    const CMatrix m{{-1.0, 10.0}, {0.0, -1.0}};
    const auto c = build_condition3(m, Mode::continuous, 0.1);
    CHECK(c.valid());
    CHECK(c.K31 == doctest::Approx(11.0));
    CHECK(c.K32 == doctest::Approx(1.0));
    CHECK(c.kappa_S == doctest::Approx(10.0));
    CHECK(c.reconstruction_residual <= 1e-12);
    CHECK((c.S * m.dense() * c.S_inv - c.T).norm() <= 1e-12);
    const auto plain = build_condition3(m, Mode::continuous);
    CHECK(plain.K31 == doctest::Approx(2.0));
    CHECK(plain.K32 == doctest::Approx(10.0));
    REQUIRE(plain.scaling_profile.size() == 3);
    CHECK(plain.scaling_profile[2].K32 == doctest::Approx(0.1));
    CHECK_THROWS_AS(build_condition3(m, Mode::continuous, 0.0), Error);
}

TEST_CASE("K32 conventions") {
    Dense t(2, 2);
    t << Complex(0.0, 1.0), 0.0, 0.0, Complex(0.0, -1.0);
    CHECK(measure_K32(t, Mode::continuous) == 0.0);
    t(0, 1) = 1.0;
    CHECK(measure_K32(t, Mode::continuous) == infinity);
    Dense d(2, 2);
    d << 0.5, 1.0, 0.0, 0.5;
    CHECK(measure_K32(d, Mode::discrete) == doctest::Approx(2.0));
}

TEST_CASE("condition-3 verification") {
    std::mt19937_64 rng(17);
    const CMatrix m = oracle::nonnormal_stable(rng, 4);
    const auto c = build_condition3(m, Mode::continuous);
    const auto v = verify_condition3(m, c, c.K31, c.K32);
    CHECK(v.all_pass);
    for (const char* name : {"similarity", "triangular", "ordering", "entry_bound", "transformation_bound"})
        CHECK(v.check(name).pass);
    const auto low = verify_condition3(m, c, 0.5 * c.K31, 0.5 * c.K32);
    CHECK_FALSE(low.all_pass);
    CHECK_FALSE(low.check("transformation_bound").pass);
    CHECK(low.check("transformation_bound").slack < 0.0);
}

TEST_CASE("condition-4 certificate") {
    const auto c = build_condition4(CMatrix::diagonal({-1.0, -2.0}), Mode::continuous);
    CHECK(c.valid);
    CHECK(c.K4 == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.lambda_min * c.lambda_max == doctest::Approx(1.0));
    const auto d = build_condition4(CMatrix::diagonal({0.5}), Mode::discrete);
    CHECK(d.valid);
    CHECK(d.K4 == doctest::Approx(1.0));
    try {
        build_condition4(CMatrix{{0.0, 1.0}, {-1.0, 0.0}}, Mode::continuous);
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsolvable_on_boundary);
    }
}

TEST_CASE("explicit constants") {
    CHECK(unit_triangular_constant(1, 5.0) == 1.0);
    CHECK(unit_triangular_constant(3, 0.5) == doctest::Approx(81.0));
    CHECK(unit_triangular_constant(2, 2.0) == doctest::Approx(8.0));
    const auto c = build_condition3(CMatrix::jordan(-1.0, 2), Mode::continuous);
    CHECK(bound_from_condition3(c) == doctest::Approx(4.0));
    CHECK(miller_region_bound(c, 1.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(miller_region_bound(c, 0.0), Error);
    const auto dc = build_condition3(CMatrix::diagonal({0.5}), Mode::discrete);
    CHECK_THROWS_AS(bound_from_condition3(dc), Error);
}

TEST_CASE("resolvent inequality check") {
    const CMatrix m = CMatrix::jordan(-1.0, 2);
    std::vector<Complex> pts{Complex(0.01), Complex(1.0, 1.0), Complex(-1.0), Complex(0.5, -3.0)};
    const auto ok = check_resolvent_inequality(m, 4.0, pts, Denominator::full_spectrum);
    CHECK(ok.violations == 0);
    CHECK(ok.singular == 1);
    const auto bad = check_resolvent_inequality(m, 1.0, pts, Denominator::excluded);
    CHECK(bad.violations >= 1);
}
