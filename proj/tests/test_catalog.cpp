#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "checks.hpp"
#include "macrosize/catalog.hpp"
#include "macrosize/diffraction.hpp"
#include "macrosize/error.hpp"
#include "macrosize/fisher.hpp"

using namespace macrosize;

TEST_CASE("oscillator table") {
    const auto rows = table1();
    REQUIRE(rows.size() == 10);
    for (const TableRow& r : rows) {
        INFO(r.label);
        CHECK(r.within_tolerance());
        CHECK(r.n_ext > 0.0);
    }
    CHECK(rows[1].label.rfind("Teufel", 0) == 0);
    CHECK(rows[1].n_ext == doctest::Approx(7.9e17).epsilon(0.01));
}

TEST_CASE("Leggett crystal") {
    const CrystalReport r = leggett_crystal(leggett_scenario());
    CHECK(r.n_ext_p == doctest::Approx(6.9e11).epsilon(0.01));
    CHECK(r.n_ext_q == doctest::Approx(8.9e37).epsilon(0.01));
    CHECK(r.r_q == doctest::Approx(2.5e5));
    CHECK(r.n_ent_q == doctest::Approx(1.6e13).epsilon(1e-6));
    CHECK(r.n_ent_p < r.n_ent_q);

    const PartitionComparison p = nucleon_partition_comparison(leggett_scenario());
    CHECK(p.momentum_ratio == doctest::Approx(1e8).epsilon(1e-3));
    CHECK(p.momentum_ratio_refined == doctest::Approx(1.25e9).epsilon(1e-3));
    CHECK(p.position_ratio == doctest::Approx(12.5).epsilon(1e-6));

    CrystalScenario bad = leggett_scenario();
    bad.velocity = -1.0;
    CHECK_THROWS_AS(leggett_crystal(bad), DomainError);
}

TEST_CASE("flux qubit") {
    const FluxQubitReport f = flux_qubit(2e-6, 5.6e-4);
    CHECK(f.momentum_split == doctest::Approx(constants().electron_mass * 5.6e-4 * 2e-6 / constants().elementary_charge));
    CHECK(f.n_ext == doctest::Approx(1.021e7).epsilon(1e-3));
    CHECK(std::abs(std::log10(f.n_ext / f.expected_ext)) <= 1.0);
    CHECK(f.n_ent == 1e9);
    CHECK(flux_qubit(0.0, 5.6e-4).n_ext == 0.0);
    CHECK_THROWS_AS(flux_qubit(2e-6, 0.0), DomainError);
}

TEST_CASE("collapse-model exclusion") {
    const TalbotLauSetup fein = fein_setup();
    const double n_ext = diffraction_sizes(fein).sizes.n_ext;
    const NHReport r = nh_mu(NHParams{fein.flight_time, 1e-7, n_ext});
    CHECK(r.mu == doctest::Approx(11.7003).epsilon(1e-4));
    CHECK(r.mu_simplified == doctest::Approx(11.7315).epsilon(1e-4));
    CHECK(r.mu - r.mu_simplified == doctest::Approx(r.correction).epsilon(1e-9));
    CHECK(std::abs(r.mu - r.mu_simplified) <= 0.2);
    CHECK_THROWS_AS(nh_mu(NHParams{1.0, 1e-15, 1e10}), DomainError);
    CHECK(nh_decoherence_rate(r.sigma_q, r.tau_e, n_ext) ==
          doctest::Approx(nh_strength(r.sigma_q, r.tau_e) * std::pow(constants().position_unit(), 2) * n_ext));
}

TEST_CASE("purity loss equals kappa F2") {
    checks::Rng rng(11);
    const DensityMatrix rho = checks::random_state(6, 3, rng);
    const Operator q = checks::random_hermitian(6, rng);
    const double kappa = 0.7;
    const Matrix drho = nh_generator(rho, q, kappa);
    const double loss = -2.0 * (rho.matrix() * drho).trace().real();
    CHECK(nh_purity_loss_rate(rho, q, kappa) == doctest::Approx(loss).epsilon(1e-10));
    CHECK(std::abs(drho.trace()) < 1e-12);
}

TEST_CASE("combined dataset") {
    const auto rows = figure3_dataset();
    CHECK(rows.size() == 14);
    std::ostringstream a;
    std::ostringstream b;
    write_dataset_csv(a, rows);
    write_dataset_csv(b, figure3_dataset());
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("label,n_ext,n_ent,class,deviation_ext,deviation_ent\n", 0) == 0);
    CHECK(a.str().find("Bose et al. (2017),") != std::string::npos);
}
