#pragma once

// Extensive and entangled size, their atomic-scale units and the
// entanglement-depth witness.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "macrosize/quantum.hpp"

namespace macrosize {

/// CODATA 2018 values, 10 significant digits, SI units.
struct PhysicalConstants {
    double atomic_mass_unit;  // m_u, kg
    double bohr_radius;       // a0, m
    double hbar;              // J s
    double boltzmann;         // J/K
    double electron_mass;     // kg
    double elementary_charge; // C

    /// Q0 = m_u a0 (kg m).
    double position_unit() const { return atomic_mass_unit * bohr_radius; }
    /// P0 = hbar / (2 a0) (kg m / s).
    double momentum_unit() const { return hbar / (2.0 * bohr_radius); }
    /// J0 = Q0 P0 / m_u = hbar / 2 (J s).
    double angular_momentum_unit() const { return position_unit() * momentum_unit() / atomic_mass_unit; }
};

const PhysicalConstants& constants();

/// Collects both sizes with the inputs that produced them.
struct SizeReport {
    double n_ext = 0.0;
    double n_ent = 0.0;
    int witness_depth = 0;
    std::string unit = "Q0";    // Q0, P0 or custom
    double partition_count = 0; // upper bound on n_ent
    std::map<std::string, double> inputs;
    std::vector<std::string> notes;
};

/// N_ext = F / (4 A0^2).
double extensive_size(double fisher, double unit);

struct EntangledSize {
    double value;
    double fisher;
    double local_variance_sum;
    int parts;
};

/// F(rho, A) / (4 sum_i Var(rho, A_i)) on dense operators.
/// Throws DomainError ("incoherent-local") when all local variances vanish.
EntangledSize entangled_size(const DensityMatrix& rho, const PartitionedObservable& a);

/// Closed-form variant: the QFI of the total observable and the local
/// variances are supplied directly (used for macroscopic particle numbers).
double entangled_size(double fisher, std::span<const double> local_variances);
/// Same with n identical local variances.
double entangled_size(double fisher, double local_variance, double parts);

/// ceil(n_ent): the entanglement depth certified by n_ent (n_ent > k rules out
/// k-producibility). Returns 0 for n_ent = 0.
int witness_depth(double n_ent);

/// N r^2 / (1 + r^2) for two branches whose per-particle separation is r times
/// twice the per-branch spread. Returns N for r = infinity.
double two_branch_entangled_size(double count, double ratio);

/// sqrt(Q0^2 + t^2 P0^2): the unit for R(t) = Q + t P.
double rotated_unit(double t);

}  // namespace macrosize
