#include <doctest.h>

#include <sstream>

#include "kreiss/cauchy.hpp"
#include "kreiss/error.hpp"

using namespace kreiss;

namespace {

CauchyConfig base() {
    CauchyConfig c;
    c.gamma = 1.0;
    c.y_max = 200.0;
    c.y_count = 200000;
    c.t_eval = {1.0};
    c.table_count = 401;
    return c;
}

} // namespace

TEST_CASE("scalar decay with constant forcing") {
    const CMatrix a = CMatrix::diagonal({-1.0});
    const auto rec = laplace_reconstruct(a, constant_forcing(DenseVector::Ones(1)).transform, base());
    CHECK(std::abs(rec.u[0](0) - (1.0 - std::exp(-1.0))) <= 1e-4);
    CHECK(rec.nodes == 200000);
}

TEST_CASE("zero forcing gives zero") {
    CauchyConfig c = base();
    c.y_count = 2001;
    c.t_eval = {0.0, 0.5, 2.0};
    const auto rec = laplace_reconstruct(CMatrix::diagonal({-1.0}), make_forcing("zero", 1).transform, c);
    for (const auto& u : rec.u) CHECK(u.norm() == 0.0);
    const auto ref = reference_solution(CMatrix::diagonal({-1.0}), make_forcing("zero", 1).time, c.t_eval);
    for (const auto& u : ref) CHECK(u.norm() == 0.0);
}

TEST_CASE("oscillating scalar with exponential forcing") {
    const CMatrix a = CMatrix::diagonal({Complex(0.0, 1.0)});
    const Complex i(0.0, 1.0);
    const Complex exact = (std::exp(i) - std::exp(-1.0)) / (1.0 + i);
    CauchyConfig c = base();
    c.y_max = 1000.0;
    c.y_count = 400001;
    const auto rec = laplace_reconstruct(a, exponential_forcing(DenseVector::Ones(1), 1.0).transform, c);
    CHECK(std::abs(rec.u[0](0) - exact) <= 1e-4);
    const double t1[] = {1.0};
    const auto ref = reference_solution(a, exponential_forcing(DenseVector::Ones(1), 1.0).time, t1);
    CHECK(std::abs(ref[0](0) - exact) <= 1e-8);
}

TEST_CASE("reference solution closed forms") {
    const double ts[] = {0.0, 0.5, 3.0};
    DenseVector c(2);
    c << 2.0, Complex(0.0, -1.0);
    const auto zero_a = reference_solution(CMatrix::zero(2), constant_forcing(c).time, ts);
    for (int k = 0; k < 3; ++k) CHECK((zero_a[k] - c * ts[k]).norm() <= 1e-10 * (1 + ts[k]));
    const auto decay = reference_solution(CMatrix::diagonal({-1.0}), constant_forcing(DenseVector::Ones(1)).time, ts);
    CHECK(std::abs(decay[2](0) - (1.0 - std::exp(-3.0))) <= 1e-8);
}

TEST_CASE("quadrature improves with more nodes") {
    const CMatrix a = CMatrix::diagonal({-1.0});
    const auto f = constant_forcing(DenseVector::Ones(1)).transform;
    const double exact = 1.0 - std::exp(-1.0);
    double prev = infinity;
    for (long scale : {1, 2, 4, 8}) {
        CauchyConfig c = base();
        c.y_max = 25.0 * scale;
        c.y_count = 25000 * scale + 1;
        const double err = std::abs(laplace_reconstruct(a, f, c).u[0](0) - exact);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("numerical transform agrees with the closed form") {
    const auto e = exponential_forcing(DenseVector::Ones(1), 2.0);
    const Transform num = numerical_transform(e.time, 30.0);
    for (Complex z : {Complex(1.0, 0.0), Complex(1.0, 7.0), Complex(0.5, -40.0)})
        CHECK(std::abs(num(z)(0) - e.transform(z)(0)) <= 1e-8);
}

TEST_CASE("envelope comparison for the scalar decay") {
    CauchyConfig c = base();
    c.y_max = 1000.0;
    c.y_count = 400001;
    c.table_count = 2001;
    const auto cmp = envelope_comparison(CMatrix::diagonal({-1.0}), c, constant_forcing(DenseVector::Ones(1)));
    CHECK(cmp.envelopes_available);
    CHECK(cmp.violations == 0);
    CHECK(cmp.alpha == doctest::Approx(-0.99));
    for (const auto& r : cmp.rows) {
        CHECK(r.old_env == cmp.rows.front().old_env);
        CHECK(r.new_env >= r.true_norm * (1 - 1e-8));
    }
    CHECK(std::abs(cmp.reconstruction.u[0](0) - cmp.reference[0](0)) <= 1e-4);
    std::ostringstream os;
    write_envelope_csv(os, cmp);
    CHECK(os.str().rfind("y,true_norm,old_env,new_env\n", 0) == 0);
}

TEST_CASE("normal matrix with K_new = 1 reproduces the true norm") {
    CauchyConfig c = base();
    c.y_count = 2001;
    c.K_new = 1.0;
    c.K_old = 1.0;
    const auto cmp = envelope_comparison(CMatrix::diagonal({-1.0, Complex(-0.5, 2.0)}), c,
                                         constant_forcing(DenseVector::Ones(2)));
    for (const auto& r : cmp.rows) CHECK(r.new_env == doctest::Approx(r.true_norm).epsilon(1e-12));
}

TEST_CASE("defective axis spectrum with alpha on the axis marks envelopes unavailable") {
    CauchyConfig c = base();
    c.y_count = 2001;
    c.alpha = 0.0;
    const auto cmp = envelope_comparison(CMatrix::jordan(Complex(0.0, 1.0), 2), c, constant_forcing(DenseVector::Ones(2)));
    CHECK_FALSE(cmp.envelopes_available);
    CHECK_FALSE(cmp.note.empty());
    CHECK(std::isnan(cmp.rows[0].old_env));
    // The default alpha sits right of the axis and keeps both constants finite.
    c.alpha.reset();
    const auto shifted = envelope_comparison(CMatrix::jordan(Complex(0.0, 1.0), 2), c, constant_forcing(DenseVector::Ones(2)));
    CHECK(shifted.envelopes_available);
    CHECK(shifted.violations == 0);
}

TEST_CASE("cauchy configuration errors") {
    CauchyConfig c = base();
    c.gamma = -2.0;
    CHECK_THROWS_AS(laplace_reconstruct(CMatrix::diagonal({-1.0}), make_forcing("constant", 1).transform, c), Error);
    c = base();
    c.y_count = 1;
    CHECK_THROWS_AS(c.validate(), Error);
    c = base();
    c.alpha = 2.0;
    CHECK_THROWS_AS(c.validate(), Error);
}
