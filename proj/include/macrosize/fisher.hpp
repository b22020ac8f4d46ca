#pragma once

// Quantum and classical Fisher-information kernels.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "macrosize/quantum.hpp"

namespace macrosize {

enum class FisherMethod { spectral, pure_variance, closed_form, classical, sub_qfi };

const char* to_string(FisherMethod m);

struct FisherResult {
    double value = 0.0;
    FisherMethod method = FisherMethod::spectral;
    std::map<std::string, double> diagnostics;
};

// Relative eigenvalue cutoff below which spectral pairs are dropped.
inline constexpr double kPairCutoff = 1e-12;
// Relative density floor for classical FI cells.
inline constexpr double kDensityFloor = 1e-12;
// Purity above 1 - kPureThreshold takes the 4 Var path.
inline constexpr double kPureThreshold = 1e-10;

double variance(const DensityMatrix& rho, const Operator& a);
/// Symmetrised covariance 1/2 tr[rho {A,B}] - tr[rho A] tr[rho B].
double covariance(const DensityMatrix& rho, const Operator& a, const Operator& b);

/// F(rho, A) = 2 sum_ij (l_i - l_j)^2 / (l_i + l_j) |<i|A|j>|^2.
///
/// Pairs with l_i + l_j <= 1e-12 l_max are skipped. Their count and the total
/// eigenvalue weight below the cutoff are reported as diagnostics
/// `discarded_pairs` and `discarded_mass`. States with purity above
/// 1 - 1e-10 use F = 4 Var directly.
FisherResult qfi(const DensityMatrix& rho, const Operator& a);

/// F_2(rho, A) = -2 tr([rho, A]^2), a lower bound on the QFI that is tight for pure states.
FisherResult sub_qfi_f2(const DensityMatrix& rho, const Operator& a);

/// int p'(x)^2 / p(x) dx for a density sampled on a uniform grid with step h.
/// Central differences on interior cells; cells below 1e-12 max(p) are skipped
/// and counted in `floored_cells`.
FisherResult classical_fi_grid(std::span<const double> density, double step);

/// sum_k p_k'^2 / p_k for a discrete outcome distribution and its derivative.
FisherResult classical_fi_discrete(std::span<const double> prob, std::span<const double> dprob);

/// Fisher information of a binary trial {R, 1 - R}: R'^2 / (R (1 - R)).
double binary_trial_fi(double prob, double dprob);

/// cos(theta) x + sin(theta) p.
Operator quadrature(const Operator& x, const Operator& p, double theta);

struct QuadratureOptimum {
    double theta = 0.0;  // in [0, pi)
    FisherResult fisher;
    std::vector<double> scan;  // F at theta_k = k pi / angle_count
};

/// Maximises F(rho, cos(t) x + sin(t) p) over t in [0, pi): a uniform scan of
/// `angle_count` angles followed by golden-section refinement to 1e-4 rad
/// around the best scanned angle.
QuadratureOptimum qfi_max_quadrature(const DensityMatrix& rho, const Operator& x, const Operator& p,
                                     int angle_count = 64);

}  // namespace macrosize
