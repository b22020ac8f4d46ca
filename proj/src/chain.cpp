#include "macrosize/chain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "macrosize/error.hpp"
#include "macrosize/measures.hpp"
#include "macrosize/oscillator.hpp"

namespace macrosize {

namespace {

void require_atoms(int atoms) {
    if (atoms < 2 || atoms > kMaxChainAtoms) {
        std::ostringstream os;
        os << "chain must have between 2 and " << kMaxChainAtoms << " atoms (got " << atoms << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

std::vector<double> acoustic_spectrum(int atoms, double omega_max, ChainBoundary boundary, double cm_frequency) {
    require_atoms(atoms);
    if (!(omega_max > 0.0)) throw DomainError("acoustic_spectrum: omega_max must be positive");
    std::vector<double> w(static_cast<std::size_t>(atoms));
    const double pi = std::numbers::pi;
    for (int i = 0; i < atoms; ++i) {
        if (boundary == ChainBoundary::fixed) {
            w[static_cast<std::size_t>(i)] = omega_max * std::sin((i + 1) * pi / (2.0 * (atoms + 1)));
        } else {
            w[static_cast<std::size_t>(i)] = i == 0 ? cm_frequency : omega_max * std::sin(i * pi / (2.0 * atoms));
        }
    }
    return w;
}

double chain_mode(int atoms, ChainBoundary boundary, int mode, int atom) {
    const double pi = std::numbers::pi;
    if (boundary == ChainBoundary::fixed) return std::sin((mode + 1) * pi * atom / (atoms + 1));
    return std::cos(mode * pi * (atom - 0.5) / atoms);
}

ChainResult chain_oracle(const ChainSpec& spec) {
    const int n = spec.atoms;
    require_atoms(n);
    if (!(spec.atom_mass > 0.0)) throw DomainError("chain_oracle: atom mass must be positive");
    if (spec.omega.size() != static_cast<std::size_t>(n)) {
        throw DimensionError("chain_oracle: need one frequency per mode");
    }
    if (spec.addressed_mode < 0 || spec.addressed_mode >= n) throw DomainError("chain_oracle: addressed mode out of range");
    if (spec.region_size < 1 || n % spec.region_size != 0) {
        throw DomainError("chain_oracle: region size must divide the atom count");
    }
    if (spec.addressed_nbar && !(*spec.addressed_nbar >= 0.0)) {
        throw DomainError("chain_oracle: addressed nbar must be >= 0");
    }

    const double hbar = constants().hbar;
    const double m = spec.atom_mass;
    const int k = spec.addressed_mode;
    const int s = spec.region_size;
    const int regions = n / s;

    // Mode table W(l, j - 1) and per-mode variances.
    std::vector<double> table(static_cast<std::size_t>(n) * n);
    auto wt = [&](int l, int j) -> double& { return table[static_cast<std::size_t>(l) * n + j]; };
    std::vector<double> var(static_cast<std::size_t>(n));
    double nbar_k = 0.0;
    for (int l = 0; l < n; ++l) {
        double volume = 0.0;
        for (int j = 0; j < n; ++j) {
            wt(l, j) = chain_mode(n, spec.boundary, l, j + 1);
            volume += wt(l, j) * wt(l, j);
        }
        const double omega = spec.omega[static_cast<std::size_t>(l)];
        if (!(omega > 0.0)) throw DomainError("chain_oracle: every mode frequency must be positive");
        const double nu = hbar / (2.0 * m * volume * omega);
        double nbar = thermal_occupation(omega, spec.temperature);
        if (l == k && spec.addressed_nbar) nbar = *spec.addressed_nbar;
        if (l == k) nbar_k = nbar;
        var[static_cast<std::size_t>(l)] = nu * (2.0 * nbar + 1.0);
    }

    double vk = 0.0;
    for (int j = 0; j < n; ++j) vk += wt(k, j) * wt(k, j);
    const double mk = m * vk;
    const double nu_k = var[static_cast<std::size_t>(k)] / (2.0 * nbar_k + 1.0);
    const double fisher = mk * mk * 4.0 * nu_k / (2.0 * nbar_k + 1.0);

    double exact = 0.0;
    for (int l = 0; l < n; ++l) {
        double overlap_sq = 0.0;
        for (int i = 0; i < regions; ++i) {
            double zeta = 0.0;
            for (int j = i * s; j < (i + 1) * s; ++j) zeta += wt(k, j) * wt(l, j);
            overlap_sq += zeta * zeta;
        }
        exact += overlap_sq * var[static_cast<std::size_t>(l)];
    }
    exact *= m * m;

    double weighted = 0.0;
    for (int j = 0; j < n; ++j) {
        double vx = 0.0;
        for (int l = 0; l < n; ++l) vx += wt(l, j) * wt(l, j) * var[static_cast<std::size_t>(l)];
        weighted += wt(k, j) * wt(k, j) * vx;
    }
    const double continuum = s * m * m * weighted;

    ChainResult r;
    r.fisher = fisher;
    r.variance_sum_exact = exact;
    r.variance_sum_continuum = continuum;
    r.n_ent_exact = fisher / (4.0 * exact);
    r.n_ent_continuum = fisher / (4.0 * continuum);
    r.mean_spread_sq = weighted / vk;
    r.mode_volume = vk;
    r.regions = regions;
    r.mode_variance = std::move(var);
    return r;
}

}  // namespace macrosize
