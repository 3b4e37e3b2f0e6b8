#include <doctest.h>

#include <random>

#include "kreiss/error.hpp"
#include "kreiss/la_kernel.hpp"
#include "oracles.hpp"

using namespace kreiss;

TEST_CASE("matrix construction validates shape and entries") {
    CHECK_THROWS_AS(CMatrix(Dense(2, 3)), Error);
    CHECK_THROWS_AS(CMatrix(Dense(0, 0)), Error);
    Dense bad = Dense::Identity(2, 2);
    bad(0, 1) = Complex(std::nan(""), 0.0);
    try {
        CMatrix m(bad);
        FAIL("accepted NaN");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::invalid_matrix);
    }
    const CMatrix j = CMatrix::jordan(Complex(2.0, 1.0), 3);
    CHECK(j(0, 0) == Complex(2.0, 1.0));
    CHECK(j(0, 1) == Complex(1.0));
    CHECK(j(0, 2) == Complex(0.0));
    CHECK(direct_sum(CMatrix::identity(2), CMatrix::zero(1)).n() == 3);
}

TEST_CASE("spectral norm against the SVD oracle") {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 8; ++n) {
        const Dense a = oracle::gaussian(rng, n);
        CHECK(spectral_norm(a) == doctest::Approx(oracle::norm2(a)).epsilon(1e-12));
    }
    CHECK(spectral_norm(CMatrix::identity(4)) == doctest::Approx(1.0));
    CHECK(spectral_norm(CMatrix{{0.0, 1.0}, {0.0, 0.0}}) == doctest::Approx(1.0));
}

TEST_CASE("schur form reconstructs and orders") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 8; ++n) {
        const CMatrix a(oracle::gaussian(rng, n));
        for (auto ord : {SchurOrdering::none, SchurOrdering::descending_real_part, SchurOrdering::descending_modulus}) {
            const SchurForm f = schur(a, ord);
            CHECK((f.Q * f.T * f.Q.adjoint() - a.dense()).norm() <= 1e-12 * (1 + a.dense().norm()));
            CHECK((f.Q.adjoint() * f.Q - Dense::Identity(n, n)).norm() <= 1e-12);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j) CHECK(std::abs(f.T(i, j)) <= 1e-13);
            const DenseVector d = f.eigenvalues();
            for (int i = 0; i + 1 < n; ++i) {
                if (ord == SchurOrdering::descending_real_part) CHECK(d(i).real() >= d(i + 1).real() - 1e-12);
                if (ord == SchurOrdering::descending_modulus) CHECK(std::abs(d(i)) >= std::abs(d(i + 1)) - 1e-12);
            }
        }
    }
}

TEST_CASE("schur ordering of a diagonal matrix") {
    const SchurForm f = schur(CMatrix::diagonal({-3.0, 1.0, -1.0}), SchurOrdering::descending_real_part);
    CHECK(f.T(0, 0).real() == doctest::Approx(1.0));
    CHECK(f.T(1, 1).real() == doctest::Approx(-1.0));
    CHECK(f.T(2, 2).real() == doctest::Approx(-3.0));
}

TEST_CASE("expm against closed forms and the Taylor oracle") {
    CHECK((expm(CMatrix::zero(3)).dense() - Dense::Identity(3, 3)).norm() <= 1e-15);
    const CMatrix n2{{0.0, 1.0}, {0.0, 0.0}};
    const Dense e = expm(n2).dense();
    CHECK(std::abs(e(0, 1) - Complex(1.0)) <= 1e-14);
    CHECK(std::abs(e(0, 0) - Complex(1.0)) <= 1e-14);
    const Dense d = expm(CMatrix::diagonal({Complex(-1.0), Complex(0.0, M_PI)})).dense();
    CHECK(std::abs(d(0, 0) - std::exp(-1.0)) <= 1e-14);
    CHECK(std::abs(d(1, 1) - Complex(-1.0)) <= 1e-14);
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 6; ++n)
        for (double scale : {0.01, 1.0, 10.0}) {
            const Dense a = oracle::gaussian(rng, n) * scale;
            const Dense ref = oracle::expm(a);
            CHECK((expm(a) - ref).norm() <= 1e-11 * std::max(1.0, ref.norm()));
        }
}

TEST_CASE("lyapunov and stein solvers") {
    const CMatrix h = solve_lyapunov_continuous(CMatrix::diagonal({-2.0}));
    CHECK(h(0, 0).real() == doctest::Approx(0.25));
    const CMatrix s = solve_stein_discrete(CMatrix{{0.0, 1.0}, {0.0, 0.0}});
    CHECK((s.dense() - CMatrix::diagonal({1.0, 2.0}).dense()).norm() <= 1e-14);
    std::mt19937_64 rng(9);
    for (int n = 1; n <= 8; ++n) {
        const CMatrix m = oracle::nonnormal_stable(rng, n);
        const Dense H = solve_lyapunov_continuous(m).dense();
        const Dense res = H * m.dense() + m.dense().adjoint() * H + Dense::Identity(n, n);
        CHECK(res.norm() <= 1e-9 * (1 + H.norm()) * (1 + m.dense().norm()));
        CHECK((H - H.adjoint()).norm() <= 1e-10 * H.norm());
        const Dense g = oracle::gaussian(rng, n);
        const CMatrix c(Dense(0.9 * g / oracle::norm2(g)));
        const Dense P = solve_stein_discrete(c).dense();
        CHECK((P - c.dense().adjoint() * P * c.dense() - Dense::Identity(n, n)).norm() <= 1e-9 * (1 + P.norm()));
    }
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::spec;
    };
    CHECK(kind_of([] { solve_lyapunov_continuous(CMatrix{{0.0, 1.0}, {-1.0, 0.0}}); }) ==
          ErrorKind::unsolvable_on_boundary);
    CHECK(kind_of([] { solve_stein_discrete(CMatrix::identity(2)); }) == ErrorKind::unsolvable_on_boundary);
}

TEST_CASE("unit triangular factored inverse") {
    const UnitTriInverse id = unit_tri_inverse_factored(CMatrix::identity(4));
    CHECK(id.factorization.factors.empty());
    CHECK((id.inverse.dense() - Dense::Identity(4, 4)).norm() == 0.0);

    const UnitTriInverse two = unit_tri_inverse_factored(CMatrix{{1.0, 3.0}, {0.0, 1.0}});
    CHECK(std::abs(two.inverse(0, 1) - Complex(-3.0)) <= 1e-15);
    REQUIRE(two.factorization.factors.size() == 1);

    std::mt19937_64 rng(21);
    for (int n = 1; n <= 6; ++n) {
        Dense a = oracle::gaussian(rng, n);
        for (int i = 0; i < n; ++i) {
            a(i, i) = 1.0;
            for (int j = 0; j < i; ++j) a(i, j) = 0.0;
        }
        const UnitTriInverse r = unit_tri_inverse_factored(CMatrix(a));
        const Dense ref = a.triangularView<Eigen::Upper>().solve(Dense::Identity(n, n));
        CHECK((r.inverse.dense() - ref).norm() <= 1e-10 * (1 + ref.norm()));
        CHECK((r.factorization.assemble() - ref).norm() <= 1e-10 * (1 + ref.norm()));
    }
    CHECK_THROWS_AS(unit_tri_inverse_factored(CMatrix{{2.0, 0.0}, {0.0, 1.0}}), Error);
    CHECK_THROWS_AS(unit_tri_inverse_factored(CMatrix{{1.0, 0.0}, {1.0, 1.0}}), Error);
}

TEST_CASE("unit triangular bound") {
    CHECK(unit_tri_bound(1, 5.0) == 1.0);
    CHECK(unit_tri_bound(3, 2.0) == doctest::Approx(36.0));
    CHECK_THROWS_AS(unit_tri_bound(3, 0.5), Error);
    CHECK_THROWS_AS(unit_tri_bound(0, 2.0), Error);
}

TEST_CASE("abscissa and radius") {
    DenseVector v(3);
    v << Complex(-1.0, 2.0), Complex(0.5, 0.0), Complex(0.0, -3.0);
    CHECK(spectral_abscissa(v) == 0.5);
    CHECK(spectral_radius(v) == doctest::Approx(3.0));
}
