#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "checks.hpp"
#include "macrosize/error.hpp"
#include "macrosize/fisher.hpp"
#include "macrosize/quantum.hpp"

using namespace macrosize;

namespace {

Vector ket(std::initializer_list<cplx> amps) {
    Vector v(static_cast<Eigen::Index>(amps.size()));
    int i = 0;
    for (cplx a : amps) v(i++) = a;
    return v.normalized();
}

std::vector<double> gaussian(double sigma, double lo, double hi, double h) {
    std::vector<double> p;
    for (double x = lo; x <= hi + 1e-12; x += h) {
        p.push_back(std::exp(-x * x / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * std::numbers::pi)));
    }
    return p;
}

}  // namespace

TEST_CASE("qfi reference values") {
    const DensityMatrix plus = DensityMatrix::pure(ket({1.0, 1.0}));
    const FisherResult f = qfi(plus, pauli_z());
    CHECK(f.value == doctest::Approx(4.0));
    CHECK(f.method == FisherMethod::pure_variance);

    const DensityMatrix th = make_state(Thermal{1.0}, 60);
    const FockOperators ops = fock_operators(60, 0.5);
    CHECK(qfi(th, ops.x).value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(qfi(th, ops.x).method == FisherMethod::spectral);
}

TEST_CASE("qfi agrees with the symmetric logarithmic derivative oracle") {
    // Reference values from an independent Sylvester-equation solve.
    const DensityMatrix q = mix(0.7, DensityMatrix::pure(ket({1.0, 0.0})), DensityMatrix::pure(ket({1.0, 1.0})));
    CHECK(qfi(q, pauli_x()).value == doctest::Approx(1.9599999999999989).epsilon(1e-10));

    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 0.5;
    diag(1, 1) = 0.3;
    diag(2, 2) = 0.2;
    const Vector v = ket({1.0, cplx(0.0, 1.0), 1.0});
    const DensityMatrix rho3 = DensityMatrix::from_matrix(0.8 * diag + 0.2 * v * v.adjoint());
    Matrix jx = Matrix::Zero(3, 3);
    jx(0, 1) = jx(1, 0) = jx(1, 2) = jx(2, 1) = 1.0 / std::sqrt(2.0);
    CHECK(qfi(rho3, Operator(jx)).value == doctest::Approx(0.3359341563786006).epsilon(1e-10));
}

TEST_CASE("qfi errors and diagnostics") {
    const DensityMatrix r = DensityMatrix::maximally_mixed(2);
    CHECK_THROWS_AS(qfi(r, Operator::identity(3)), DimensionError);

    const DensityMatrix g = ghz_state(3, 0.5).state;
    Matrix m = g.matrix() * 0.9 + Matrix::Identity(8, 8) * (0.1 / 8);
    const FisherResult f = qfi(DensityMatrix::from_matrix(m), ghz_state(3, 0.5).observable.total);
    CHECK(f.value > 0.0);
    CHECK(f.diagnostics.count("discarded_pairs") == 1);
}

TEST_CASE("variance and covariance") {
    const FockOperators ops = fock_operators(60, 0.5);
    CHECK(variance(make_state(Vacuum{}, 60), ops.x) == doctest::Approx(0.5));
    for (double n : {0.0, 0.5, 1.0}) {
        CHECK(variance(make_state(Thermal{n}, 60), ops.x) == doctest::Approx(0.5 * (2 * n + 1)).epsilon(1e-8));
    }
    const GhzSystem g = ghz_state(3, 0.5);
    CHECK(covariance(g.state, g.observable.locals[0], g.observable.locals[1]) == doctest::Approx(1.0));

    checks::Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix r = checks::random_state(4, rng.integer(1, 4), rng);
        const Operator a = checks::random_hermitian(4, rng);
        const Operator b = checks::random_hermitian(4, rng);
        CHECK(covariance(r, a, a) == doctest::Approx(variance(r, a)));
        CHECK(std::abs(covariance(r, a, b)) <= std::sqrt(variance(r, a) * variance(r, b)) + 1e-10);
    }
}

TEST_CASE("sub-QFI lower bound") {
    const DensityMatrix plus = DensityMatrix::pure(ket({1.0, 1.0}));
    CHECK(sub_qfi_f2(plus, pauli_z()).value == doctest::Approx(4.0));
    CHECK(sub_qfi_f2(DensityMatrix::maximally_mixed(2), pauli_z()).value == doctest::Approx(0.0));
    const DensityMatrix th = make_state(Thermal{1.0}, 60);
    const FockOperators ops = fock_operators(60, 0.5);
    const double f2 = sub_qfi_f2(th, ops.x).value;
    CHECK(f2 > 0.0);
    CHECK(f2 <= 2.0 / 3.0 + 1e-9);
}

TEST_CASE("classical FI of sampled densities") {
    const double h = 1e-3;
    CHECK(classical_fi_grid(gaussian(1.0, -8, 8, h), h).value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(classical_fi_grid(gaussian(2.0, -16, 16, h), h).value == doctest::Approx(0.25).epsilon(1e-3));
    std::vector<double> flat(1000, 1.0 / (1000 * h));
    CHECK(classical_fi_grid(flat, h).value == doctest::Approx(0.0));
    std::vector<double> bad(100, 1.0);
    CHECK_THROWS_AS(classical_fi_grid(bad, h), DomainError);
}

TEST_CASE("binary trial FI") {
    CHECK(binary_trial_fi(0.5, 1.0) == doctest::Approx(4.0));
    CHECK(binary_trial_fi(0.3, 0.0) == doctest::Approx(0.0));
    const double g = 0.43;
    const double v = 0.25;
    const double k = 2 * std::numbers::pi / 266e-9;
    CHECK(binary_trial_fi(g, g * v * k) == doctest::Approx(g / (1 - g) * v * v * k * k));
    CHECK_THROWS_AS(binary_trial_fi(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(binary_trial_fi(1.0, 1.0), DomainError);
}

TEST_CASE("discrete classical FI") {
    const std::vector<double> p = {0.25, 0.75};
    const std::vector<double> dp = {0.5, -0.5};
    CHECK(classical_fi_discrete(p, dp).value == doctest::Approx(0.25 / 0.25 + 0.25 / 0.75));
}

TEST_CASE("quadrature maximisation") {
    const int d = 40;
    const FockOperators ops = fock_operators(d, 0.5);
    const QuadratureOptimum vac = qfi_max_quadrature(make_state(Vacuum{}, d), ops.x, ops.p);
    CHECK(vac.fisher.value == doctest::Approx(2.0));
    for (double f : vac.scan) CHECK(f == doctest::Approx(2.0));

    const double r = 0.4;
    const StateSpec sq = Squeezed{r};
    const int ds = suggested_dim(sq);
    const FockOperators os = fock_operators(ds, 0.5);
    const QuadratureOptimum best = qfi_max_quadrature(make_state(sq, ds), os.x, os.p);
    CHECK(best.fisher.value == doctest::Approx(2 * std::exp(2 * r)).epsilon(1e-6));
    CHECK(best.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-3));
    for (double f : best.scan) CHECK(f <= best.fisher.value + 1e-12);

    const StateSpec cat = Cat{cplx(2.0, 0.0)};
    const int dc = suggested_dim(cat);
    const FockOperators oc = fock_operators(dc, 0.5);
    const QuadratureOptimum c = qfi_max_quadrature(make_state(cat, dc), oc.x, oc.p);
    const double theta = std::min(c.theta, std::numbers::pi - c.theta);
    CHECK(theta < 1e-3);
    CHECK_THROWS_AS(qfi_max_quadrature(make_state(Vacuum{}, d), ops.x, ops.p, 4), DomainError);
}
