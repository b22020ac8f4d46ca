#pragma once

// Worked examples: Leggett's crystal, the oscillator table, the flux qubit,
// the Nimmrichter-Hornberger relation and the combined size dataset.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "macrosize/measures.hpp"
#include "macrosize/quantum.hpp"

namespace macrosize {

struct CrystalScenario {
    double atoms;          // N
    double atom_mass;      // kg
    double velocity;       // relative branch speed, m/s
    double confinement;    // single-atom delta x, m
    double time;           // drift time, s
};

/// N = 1.6e13 atoms of 12.5 m_u, 5 um/s, delta x = 1e-11 m, t = 1 s.
CrystalScenario leggett_scenario();

struct CrystalReport {
    double momentum_split;  // Delta P = N m v
    double atom_momentum_spread;  // delta p = hbar / 2 delta x
    double r_p;
    double n_ext_p;
    double n_ent_p;
    double separation;      // Delta X = v t
    double r_q;
    double n_ext_q;
    double n_ent_q;
};

CrystalReport leggett_crystal(const CrystalScenario& s);

struct PartitionComparison {
    double momentum_ratio;          // N_ent(P) atoms / nucleons, only delta x changed
    double momentum_ratio_refined;  // same with nucleon count and per-nucleon shift
    double position_ratio;          // N_ent(Q) nucleons / atoms
    double nucleon_confinement;
};

PartitionComparison nucleon_partition_comparison(const CrystalScenario& s, double nucleon_confinement = 1e-15);

enum class Tolerance { tight, order_of_magnitude };
const char* to_string(Tolerance t);

struct TableRow {
    std::string label;
    std::string kind;        // thermal, measured-qfi, collective, levitated
    std::map<std::string, double> parameters;
    double n_ext = 0.0;
    double n_ent = 0.0;
    double expected_ext = 0.0;
    double expected_ent = 0.0;
    Tolerance tolerance = Tolerance::tight;
    std::vector<std::string> notes;

    double deviation_ext() const { return n_ext / expected_ext - 1.0; }
    double deviation_ent() const { return n_ent / expected_ent - 1.0; }
    /// Within 10 % (tight) or a factor of 10 (order of magnitude) for both sizes.
    bool within_tolerance() const;
};

/// The ten oscillator rows, each recomputed from its parameters.
std::vector<TableRow> table1();

struct FluxQubitReport {
    double momentum_split;  // m_e l Delta I / e
    double n_ext;           // (momentum_split / 2 P0)^2
    double n_ent;           // full-cat regime: N_pairs
    double pair_length;     // hbar / Delta p per pair
    double expected_ext;    // published estimate, order-of-magnitude check
};

FluxQubitReport flux_qubit(double current_difference, double loop_length, double pairs = 1e9,
                           double pair_momentum_shift = 6e-29);

/// Critical length floor for the nonrelativistic model.
inline constexpr double kMinCriticalLength = 1e-14;

struct NHParams {
    double coherence_time;   // tau, s
    double critical_length;  // l_q, m
    double n_ext;
};

struct NHReport {
    double sigma_q;           // hbar / l_q
    double tau_e;             // excluded time parameter, s
    double mu;                // log10 tau_e, full form
    double mu_simplified;     // log10 N_ext + log10 tau
    double correction;        // 2 log10(a0 / l_q) + 2 log10(m_u / m_e)
};

NHReport nh_mu(const NHParams& p);

/// Gamma = sigma_q^2 m_u^2 a0^2 N_ext / (tau_e m_e^2 hbar^2).
double nh_decoherence_rate(double sigma_q, double tau_e, double n_ext);

/// kappa = sigma_q^2 / (tau_e m_e^2 hbar^2).
double nh_strength(double sigma_q, double tau_e);

/// d rho / dt = -kappa [Q, [Q, rho]].
Matrix nh_generator(const DensityMatrix& rho, const Operator& q, double kappa);

/// -d tr(rho^2)/dt = kappa F_2(rho, Q). Notes that F_2 stands in for F.
double nh_purity_loss_rate(const DensityMatrix& rho, const Operator& q, double kappa);

struct DatasetRow {
    std::string label;
    double n_ext;
    double n_ent;
    std::string cls;
    std::optional<double> expected_ext;
    std::optional<double> expected_ent;
    std::string note;
};

/// Every system of the combined size plot: the table rows, Leggett at t = 0
/// (momentum) and t = 1 s, the diffraction experiment and the Bose proposal.
std::vector<DatasetRow> figure3_dataset();

/// CSV with header label,n_ext,n_ent,class,deviation_ext,deviation_ent.
/// Missing expected values leave the deviation empty.
void write_dataset_csv(std::ostream& out, const std::vector<DatasetRow>& rows);

}  // namespace macrosize
