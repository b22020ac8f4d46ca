#pragma once

// One-dimensional harmonic chain: mode-resolved variance sum of a partitioned
// mode observable, compared with the continuum single-spread approximation.

#include <optional>
#include <vector>

namespace macrosize {

enum class ChainBoundary {
    fixed,  // w_l(j) = sin(l pi j / (N + 1)), l = 1..N
    free,   // w_l(j) = cos(l pi (j - 1/2) / N), l = 0..N-1
};

inline constexpr int kMaxChainAtoms = 2048;

/// Nearest-neighbour spectrum omega_max sin(l pi / 2(N+1)) (fixed) or
/// omega_max sin(l pi / 2N) (free). The free-chain centre-of-mass mode has
/// zero frequency and is replaced by `cm_frequency`.
std::vector<double> acoustic_spectrum(int atoms, double omega_max, ChainBoundary boundary, double cm_frequency = 0.0);

/// Mode function value w_l(j) for mode index `mode` (0-based position in the
/// spectrum) and 1-based atom index j.
double chain_mode(int atoms, ChainBoundary boundary, int mode, int atom);

struct ChainSpec {
    int atoms = 64;
    double atom_mass = 0.0;         // kg
    std::vector<double> omega;      // one frequency per mode, rad/s
    double temperature = 0.0;       // K, for all unaddressed modes
    int addressed_mode = 0;         // index into omega
    std::optional<double> addressed_nbar;  // defaults to the thermal value
    int region_size = 1;            // atoms per region, must divide `atoms`
    ChainBoundary boundary = ChainBoundary::fixed;
};

struct ChainResult {
    double n_ent_exact;
    double n_ent_continuum;
    double fisher;                 // F(rho, Q_k), kg^2 m^2
    double variance_sum_exact;     // sum_i Var(A_i), kg^2 m^2
    double variance_sum_continuum;
    double mean_spread_sq;         // w_k^2-weighted mean single-atom variance, m^2
    double mode_volume;            // sum_j w_k(j)^2, in atoms
    int regions;
    std::vector<double> mode_variance;  // Var(X_l), m^2
};

/// Exact: F / (4 m^2 sum_i sum_l zeta(i,k,l)^2 Var(X_l)) with zeta the
/// in-region overlap of modes k and l. Continuum: the same with
/// sum_i Var(A_i) replaced by s m^2 sum_j w_k(j)^2 Var(x_j), s the region size.
ChainResult chain_oracle(const ChainSpec& spec);

}  // namespace macrosize
