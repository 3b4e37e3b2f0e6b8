#include <doctest.h>

#include <random>

#include "kreiss/spectra.hpp"
#include "oracles.hpp"

using namespace kreiss;

namespace {

const EigenCluster* find(const SpectrumReport& sp, Complex z) {
    for (const auto& c : sp.eigenvalues)
        if (std::abs(c.value - z) < 1e-6) return &c;
    return nullptr;
}

} // namespace

TEST_CASE("diagonal spectrum is sorted and simple") {
    const SpectrumReport sp = spectrum(CMatrix::diagonal({Complex(-2.0), Complex(0.0, 1.0), Complex(0.0, -1.0)}));
    REQUIRE(sp.eigenvalues.size() == 3);
    CHECK(sp.eigenvalues[0].value.imag() == doctest::Approx(-1.0));
    CHECK(sp.eigenvalues[1].value.imag() == doctest::Approx(1.0));
    CHECK(sp.eigenvalues[2].value.real() == doctest::Approx(-2.0));
    for (const auto& c : sp.eigenvalues) CHECK(c.max_block_size == 1);
    CHECK(sp.abscissa == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sp.radius == doctest::Approx(2.0));
}

TEST_CASE("jordan block structure is recovered") {
    for (int k = 2; k <= 5; ++k) {
        const SpectrumReport sp = spectrum(CMatrix::jordan(Complex(0.0, 1.0), k));
        REQUIRE(sp.eigenvalues.size() == 1);
        CHECK(sp.eigenvalues[0].algebraic_multiplicity == k);
        CHECK(sp.eigenvalues[0].max_block_size == k);
    }
    const CMatrix m = direct_sum(CMatrix::jordan(-1.0, 2), CMatrix::diagonal({-1.0}));
    const SpectrumReport sp = spectrum(m);
    REQUIRE(sp.eigenvalues.size() == 1);
    CHECK(sp.eigenvalues[0].algebraic_multiplicity == 3);
    CHECK(sp.eigenvalues[0].max_block_size == 2);
}

TEST_CASE("structure survives a unitary similarity") {
    std::mt19937_64 rng(4);
    const Dense q = oracle::unitary(rng, 4);
    const CMatrix j = direct_sum(CMatrix::jordan(Complex(0.0, 0.5), 3), CMatrix::diagonal({-1.0}));
    const SpectrumReport sp = spectrum(CMatrix(Dense(q * j.dense() * q.adjoint())));
    const EigenCluster* c = find(sp, Complex(0.0, 0.5));
    REQUIRE(c != nullptr);
    CHECK(c->algebraic_multiplicity == 3);
    CHECK(c->max_block_size == 3);
}

TEST_CASE("quasi-stable classification") {
    CHECK(classify_quasi_stable(CMatrix::zero(2)).quasi_stable);
    CHECK(classify_quasi_stable(CMatrix::jordan(-1.0, 3)).quasi_stable);
    CHECK(classify_quasi_stable(CMatrix{{0.0, 1.0}, {-1.0, 0.0}}).quasi_stable);
    const StabilityVerdict nil = classify_quasi_stable(CMatrix::jordan(0.0, 2));
    CHECK_FALSE(nil.quasi_stable);
    REQUIRE(nil.witness);
    CHECK(nil.witness->reason == InstabilityReason::defective_on_axis);
    CHECK(nil.witness->block_size == 2);
    const StabilityVerdict pos = classify_quasi_stable(CMatrix::diagonal({0.1, -1.0}));
    CHECK_FALSE(pos.quasi_stable);
    CHECK(pos.witness->reason == InstabilityReason::positive_real_part);
}

TEST_CASE("power-bounded classification") {
    CHECK(classify_power_bounded(CMatrix::diagonal({0.5})).quasi_stable);
    CHECK(classify_power_bounded(CMatrix::diagonal({Complex(0.0, 1.0), -1.0})).quasi_stable);
    CHECK_FALSE(classify_power_bounded(CMatrix{{1.0, 1.0}, {0.0, 1.0}}).quasi_stable);
    CHECK_FALSE(classify_power_bounded(CMatrix::diagonal({1.1})).quasi_stable);
    CHECK(classify_power_bounded(CMatrix::jordan(0.5, 3)).quasi_stable);
}

TEST_CASE("excluded spectrum keeps the closed left half-plane") {
    const SpectrumReport sp = spectrum(CMatrix::diagonal({Complex(1.0), Complex(0.0, 2.0), Complex(-1.0)}));
    const auto ex = boundary_excluded_spectrum(sp);
    CHECK(ex.size() == 2);
    for (const auto& z : ex) CHECK(z.real() <= 1e-12);
    CHECK(boundary_excluded_spectrum(spectrum(CMatrix::diagonal({1.0, 2.0}))).empty());
}
