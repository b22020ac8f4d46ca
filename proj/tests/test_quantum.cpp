#include <doctest.h>

#include <cmath>

#include "checks.hpp"
#include "macrosize/error.hpp"
#include "macrosize/fisher.hpp"
#include "macrosize/quantum.hpp"

using namespace macrosize;

TEST_CASE("eigh of small Hermitian matrices") {
    const Spectrum z = eigh(pauli_z());
    CHECK(z.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(z.eigenvalues(1) == doctest::Approx(-1.0));

    const FockOperators f = fock_operators(2, 0.5);
    const Spectrum x = eigh(f.x);
    CHECK(x.eigenvalues(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(x.eigenvalues(1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("eigh reconstructs random Hermitian inputs") {
    checks::Rng rng(5);
    for (int d : {2, 8, 17, 64}) {
        const Operator h = checks::random_hermitian(d, rng);
        const Spectrum s = eigh(h);
        const Matrix& v = s.eigenvectors;
        const Matrix rebuilt = v * s.eigenvalues.cast<cplx>().asDiagonal() * v.adjoint();
        CHECK((rebuilt - h.matrix()).cwiseAbs().maxCoeff() <= 1e-9 * h.matrix().cwiseAbs().maxCoeff());
        CHECK((v.adjoint() * v - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-9);
        for (int i = 1; i < d; ++i) CHECK(s.eigenvalues(i - 1) >= s.eigenvalues(i));
    }
}

TEST_CASE("eigh rejects non-Hermitian input") {
    Matrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(eigh(Operator(m)), DomainError);
}

TEST_CASE("Fock operators") {
    const FockOperators f = fock_operators(3, 0.5);
    CHECK(f.x.matrix()(0, 1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    const DensityMatrix vac = make_state(Vacuum{}, 3);
    CHECK(vac.expectation(f.x) == doctest::Approx(0.0));

    const double nu = 0.7;
    const double hbar = 1.3;
    const FockOperators g = fock_operators(8, nu, hbar);
    const Matrix comm = g.x.matrix() * g.p.matrix() - g.p.matrix() * g.x.matrix();
    for (int i = 0; i < 7; ++i) {
        CHECK(comm(i, i).imag() == doctest::Approx(hbar));
        CHECK(std::abs(comm(i, i).real()) < 1e-12);
    }
    const DensityMatrix v8 = make_state(Vacuum{}, 8);
    CHECK(variance(v8, g.x) == doctest::Approx(nu));
    CHECK(variance(v8, g.p) == doctest::Approx(hbar * hbar / (4 * nu)));
    CHECK_THROWS_AS(fock_operators(1, 0.5), DomainError);
}

TEST_CASE("reference states") {
    const DensityMatrix th = make_state(Thermal{1.0}, 60);
    for (int n = 0; n < 10; ++n) CHECK(th.matrix()(n, n).real() == doctest::Approx(0.5 * std::pow(0.5, n)));

    const DensityMatrix cat = make_state(Cat{cplx(2.0, 0.0)}, 30);
    const FockOperators f = fock_operators(30, 0.5);
    CHECK(std::abs(cat.expectation(f.x)) < 1e-12);
    CHECK(cat.purity() == doctest::Approx(1.0));

    const int d = suggested_dim(Coherent{cplx(1.5, 0.0)});
    const DensityMatrix coh = make_state(Coherent{cplx(1.5, 0.0)}, d);
    const FockOperators fc = fock_operators(d, 0.5);
    const cplx a = (coh.matrix() * fc.annihilate.matrix()).trace();
    CHECK(a.real() == doctest::Approx(1.5).epsilon(1e-8));
    CHECK(std::abs(a.imag()) < 1e-12);
}

TEST_CASE("truncation error carries a suggested dimension") {
    try {
        make_state(Thermal{5.0}, 20);
        FAIL("expected a truncation error");
    } catch (const TruncationError& e) {
        CHECK(e.tail_weight >= 1e-8);
        CHECK(e.suggested_dim > 20);
        CHECK_NOTHROW(make_state(Thermal{5.0}, e.suggested_dim));
    }
}

TEST_CASE("tail weight decreases with dimension") {
    for (const StateSpec& s : {StateSpec{Thermal{2.0}}, StateSpec{Cat{cplx(2.0, 0.0)}}, StateSpec{Coherent{cplx(1.0, 1.0)}}}) {
        double prev = 1.0;
        for (int d = 2; d < 60; ++d) {
            const double t = tail_weight(s, d);
            CHECK(t <= prev + 1e-15);
            prev = t;
        }
    }
}

TEST_CASE("GHZ-like states") {
    const GhzSystem g3 = ghz_state(3, 0.5);
    CHECK(qfi(g3.state, g3.observable.total).value == doctest::Approx(36.0));

    const GhzSystem g0 = ghz_state(3, 0.0);
    CHECK(qfi(g0.state, g0.observable.total).value == doctest::Approx(0.0));

    const GhzSystem g4 = ghz_state(4, 0.3);
    CHECK(variance(g4.state, g4.observable.total) == doctest::Approx(4 * 16 * 0.3 * 0.7));
    CHECK_THROWS_AS(ghz_state(13, 0.5), DomainError);
    CHECK_THROWS_AS(ghz_state(3, 1.5), DomainError);
}

TEST_CASE("partitioned observable sums its locals") {
    const PartitionedObservable a = PartitionedObservable::collective(pauli_x(), 3, "qubits");
    Matrix sum = Matrix::Zero(8, 8);
    for (const auto& l : a.locals) sum += l.matrix();
    CHECK((sum - a.total.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("tensor and mix") {
    checks::Rng rng(9);
    const DensityMatrix r = checks::random_state(2, 2, rng);
    const DensityMatrix s = checks::random_state(2, 1, rng);
    CHECK((mix(1.0, r, s).matrix() - r.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    const DensityMatrix rs = tensor(r, s);
    CHECK(rs.dim() == 4);
    CHECK(rs.matrix().trace().real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(mix(1.2, r, s), DomainError);

    for (int i = 0; i < 20; ++i) {
        const DensityMatrix a = checks::random_state(2, rng.integer(1, 2), rng);
        const DensityMatrix b = checks::random_state(2, rng.integer(1, 2), rng);
        const Operator ha = checks::random_hermitian(2, rng);
        const Operator hb = checks::random_hermitian(2, rng);
        const Operator total = tensor(ha, Operator::identity(2)) + tensor(Operator::identity(2), hb);
        CHECK(variance(tensor(a, b), total) == doctest::Approx(variance(a, ha) + variance(b, hb)));
    }
}

TEST_CASE("density matrix invariants are enforced") {
    Matrix m = Matrix::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix::from_matrix(m), DomainError);  // trace 2
    Matrix neg(2, 2);
    neg << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(neg), DomainError);
}
