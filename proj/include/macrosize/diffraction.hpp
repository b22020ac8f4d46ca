#pragma once

// Talbot-Lau diffraction: fringe fitting, Fisher-information bounds from
// detection statistics, coherence length and centre-of-mass spread.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "macrosize/measures.hpp"

namespace macrosize {

struct TalbotLauSetup {
    double mass;            // kg
    double atoms;           // N
    double period;          // grating period lambda, m
    double open_fraction;   // <g>
    double visibility;      // v
    double flight_time;     // t, s
    double source_length;   // L0, m
    double grating_length;  // L, m
    std::optional<double> wavenumber;  // fringe k, defaults to 2 pi / period

    double k() const;
    void validate() const;
};

/// Flight time distance / speed.
double flight_time(double distance, double speed);

/// The published setup: M = 26777 m_u, N = 2000, 266 nm, <g> = 0.43,
/// v = 0.25, 1 m at 260 m/s, L = 1 m.
TalbotLauSetup fein_setup(double source_length = 0.2);

struct FringeScan {
    std::vector<double> positions;  // s, m
    std::vector<double> counts;     // n(s)

    double mean() const;
    /// Copy rescaled to unit mean.
    FringeScan normalized() const;
};

/// `fringe-scan v1` header, then one `s n` pair per line.
FringeScan read_scan(std::istream& in);
FringeScan load_scan(const std::filesystem::path& path);
void write_scan(std::ostream& out, const FringeScan& scan);

/// 1 + v sin(k s + phase) at `points` uniformly spaced positions over
/// [0, span], plus Gaussian noise of standard deviation `noise`.
FringeScan synth_scan(double visibility, double k, double phase, int points, double span, double noise = 0.0,
                      std::uint64_t seed = 0);

struct FringeFit {
    double visibility;
    double k;
    double phase;
    double rms;
    int iterations;
};

/// Least-squares fit of 1 + v sin(k s + phase) to a unit-mean scan. k is
/// seeded from the periodogram peak (or fixed when `known_k` is given) and
/// refined by Gauss-Newton. Throws DomainError ("non-sinusoidal scan") when the
/// rms residual exceeds 0.2.
FringeFit fit_fringe(const FringeScan& scan, std::optional<double> known_k = std::nullopt);

/// Binary-trial FI at ks = n pi: <g> v^2 k^2 / (1 - <g>), in m^-2.
double fi_bound(double open_fraction, double visibility, double k);

/// Binary-trial FI of R(s) = <g>(1 + v sin ks) at a given s.
double fi_exact(double open_fraction, double visibility, double k, double s);

/// max_s fi_exact over one period (dense scan plus golden refinement).
double fi_exact_max(double open_fraction, double visibility, double k);

/// (hbar t)^2 fi_cl, in kg^2 m^2.
double qfi_bound(double fi_cl, double t);

/// (hbar t)^2 times the classical FI of a detection density sampled with step h.
double qfi_bound_from_density(std::span<const double> density, double step, double t);

/// sqrt(F) / (2 M).
double coherence_length(double fisher, double mass);

struct CmSpread {
    double slit_width;  // w = <g> lambda
    double at_first;    // Delta X1 = w / sqrt 3
    double at_second;   // Delta X2 = Delta X1 (1 + L / L0)
};

CmSpread cm_spread(const TalbotLauSetup& s);

struct DiffractionSizes {
    double fi_classical;   // m^-2
    double fisher;         // kg^2 m^2
    double coherence;      // chi, m
    CmSpread spread;
    SizeReport sizes;
};

/// fi_bound -> qfi_bound -> extensive size, and N (chi / Delta X2)^2.
DiffractionSizes diffraction_sizes(const TalbotLauSetup& s);
/// Same with visibility and k taken from a fitted scan.
DiffractionSizes diffraction_sizes(TalbotLauSetup s, const FringeFit& fit);

/// Entangled size over the source-length range [l0_min, l0_max].
struct SourceLengthRange {
    DiffractionSizes at_min;
    DiffractionSizes at_max;
};
SourceLengthRange source_length_range(TalbotLauSetup s, double l0_min = 0.2, double l0_max = 1.0);

}  // namespace macrosize
