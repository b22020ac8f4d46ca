#pragma once

// Wigner-function grids: file I/O, synthesis from a density matrix,
// kernel-overlap reconstruction and QFI over phase-space quadratures.
//
// Convention: x = (a + a^dag) / sqrt 2, p = i (a^dag - a) / sqrt 2, so the
// vacuum is W = exp(-x^2 - p^2) / pi with Var(x) = 1/2.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "macrosize/fisher.hpp"
#include "macrosize/quantum.hpp"

namespace macrosize {

struct Axis {
    double min = 0.0;
    double max = 0.0;
    int count = 0;

    double step() const { return (max - min) / (count - 1); }
    double value(int i) const { return min + i * step(); }
};

/// Values are row-major: row i holds the p = p.value(i) samples over x.
struct WignerGrid {
    Axis x;
    Axis p;
    std::vector<double> values;

    double at(int ip, int ix) const { return values[static_cast<std::size_t>(ip) * x.count + ix]; }
    /// Trapezoid-rule integral of W.
    double normalization() const;
};

inline constexpr int kDefaultWignerDim = 40;
inline constexpr int kMaxWignerDim = 200;
inline constexpr double kMaxWignerTail = 1e-3;
inline constexpr double kMaxResidual = 0.05;
inline constexpr double kMaxClippedMass = 0.05;

/// Checks axis sanity, finiteness, normalisation 1 +- 0.02 and |W| <= 1/pi + 0.05.
void validate(const WignerGrid& g);

/// `wigner-grid v1` text format. Errors are ParseError with a message that
/// starts with "header error", "axis-count mismatch" or "non-finite value".
WignerGrid read_grid(std::istream& in);
WignerGrid load_grid(const std::filesystem::path& path);
void write_grid(std::ostream& out, const WignerGrid& g);
void save_grid(const std::filesystem::path& path, const WignerGrid& g);

/// W(x, p) of rho at a single phase-space point.
double wigner_value(const DensityMatrix& rho, double x, double p);

/// Samples W of rho on the axes. Both axes must reach 5 vacuum widths past
/// sqrt(2<n> + 1), the radius of the state's energy support.
WignerGrid synth_grid(const DensityMatrix& rho, const Axis& x, const Axis& p);

struct ReconstructionReport {
    DensityMatrix rho;
    int dim;
    double tail;           // 1 - raw trace / grid normalisation
    double clipped_mass;   // total negative eigenvalue weight removed
    double residual;       // L2 norm of W(rho) - W_input over the grid
};

/// Kernel-overlap estimate rho_mn = 2 pi int W conj(W_{|m><n|}), then PSD
/// repair by clipping and renormalisation. Throws ReconstructionError when the
/// residual exceeds 0.05 or the clipped mass exceeds 0.05.
ReconstructionReport reconstruct(const WignerGrid& g, int dim);

/// Starts at `dim` and doubles (up to 200) until the tail drops below 1e-3.
ReconstructionReport reconstruct_auto(const WignerGrid& g, int dim = kDefaultWignerDim);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct GridFisher {
    double theta;       // maximising quadrature angle in [0, pi)
    double fisher_hat;  // dimensionless QFI, vacuum = 2
    ReconstructionReport reconstruction;
};

/// Reconstructs (auto-raising dim) and maximises the QFI over quadratures.
GridFisher qfi_from_grid(const WignerGrid& g, int dim = kDefaultWignerDim);

/// QFI maximised over quadratures cos(t) x + sin(t) p in this convention.
QuadratureOptimum quadrature_qfi(const DensityMatrix& rho);

}  // namespace macrosize
