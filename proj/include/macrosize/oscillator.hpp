#pragma once

// Vibrational modes of solid oscillators: geometry, mode volume, thermal and
// measured-state sizes, collective scaling and levitated particles.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "macrosize/measures.hpp"

namespace macrosize {

/// First zero of J0.
inline constexpr double kBesselJ0Zero = 2.404825557695773;

/// Room-temperature single-atom rms displacement (m).
inline constexpr double kDefaultDeltaU = 1.0e-11;

struct SingleParticleSpread {
    double value = kDefaultDeltaU;
    std::string source = "default";
};

/// Named presets: aluminium, silica, sapphire, silicon-nitride, default.
/// Throws DomainError for unknown names.
SingleParticleSpread delta_u_preset(std::string_view material);

struct CircularDrum {
    double radius;
    double thickness;
};
struct SquareDrum {
    double side;
    double thickness;
};
struct UniformBody {
    double volume;
};
struct Torus {
    double minor_radius;
    double major_radius;
};
/// Mode function w(x, y) on [0, width] x [0, height], constant through the thickness.
struct CustomMode {
    double width;
    double height;
    double thickness;
    std::function<double(double, double)> mode;
};
/// Sampled mode function on a uniform grid covering [0, width] x [0, height]
/// (row-major, ny rows of nx samples), bilinearly interpolated.
struct GridMode {
    double width;
    double height;
    double thickness;
    int nx;
    int ny;
    std::vector<double> samples;
};

using Shape = std::variant<CircularDrum, SquareDrum, UniformBody, Torus, CustomMode, GridMode>;

struct ModeGeometry {
    Shape shape;
    double density;           // kg / m^3
    double mean_atomic_mass;  // kg
};

/// Which mode of the body is addressed. Drums default to the fundamental;
/// tori and uniform bodies only support the uniform mode.
enum class ModeKind { fundamental, uniform };

double body_volume(const ModeGeometry& g);

struct ModeVolume {
    double body_volume;    // V
    double mode_volume;    // V_k
    double mode_mass;      // M_k = density V_k
    double particle_count; // N = density V / mean atomic mass
    double mode_particles; // N_k = N V_k / V
    std::string method;    // closed-form, adaptive-simpson, bilinear-exact
};

/// Closed forms for drums and uniform modes; adaptive Simpson for custom
/// mode functions; exact integration of the bilinear interpolant for grids.
/// Custom modes must satisfy max|w| = 1 within 1e-6.
ModeVolume mode_volume(const ModeGeometry& g, ModeKind kind = ModeKind::fundamental);

/// Numerical V_k / V for the circular drum fundamental (polar adaptive Simpson),
/// for comparison with J1(alpha)^2.
double drum_mode_fraction_numeric(double rel_tol = 1e-10);

/// 2-D adaptive Simpson on a rectangle; the inner integral is itself adaptive.
double integrate_2d(const std::function<double(double, double)>& f, double x0, double x1, double y0, double y1,
                    double rel_tol = 1e-8);

struct OscillatorMode {
    double mode_mass;       // M_k, kg
    double frequency;       // omega, rad/s
    double zero_point;      // Delta X_zp, m
    double mode_particles;  // N_k

    /// Zero-point spread from sqrt(hbar / 2 M omega).
    static OscillatorMode from_mass_frequency(double mass, double omega, double mode_particles);
    /// All four values given; each must be positive and finite.
    static OscillatorMode from_parameters(double mass, double omega, double zero_point, double mode_particles);
    static OscillatorMode from_geometry(const ModeGeometry& g, double omega, ModeKind kind = ModeKind::fundamental);
};

struct ModeFisher {
    double position;  // F(rho, Q_k), kg^2 m^2
    double momentum;  // F(rho, P_k), kg^2 m^2 s^-2
};

/// Thermal-state QFI of Q_k = M_k X_k and P_k.
ModeFisher thermal_mode_qfi(const OscillatorMode& mode, double nbar);

struct ThermalSizes {
    SizeReport position;
    SizeReport momentum;
};

/// Extensive sizes of Q_k and P_k, and the single-atom-partition entangled
/// sizes N_k (dX_zp / du)^2 / (2n+1) and (du / dX_zp)^2 / (N_k (2n+1)).
ThermalSizes thermal_sizes(const OscillatorMode& mode, double nbar, const SingleParticleSpread& du);

/// How a dimensionless QFI value F^ maps onto F(X) in m^2.
enum class QuadratureConvention {
    vacuum_half,      // quadratures with vacuum variance 1/2, F^(vacuum) = 2: F(X) = 2 dX_zp^2 F^
    zero_point_unit,  // X^ = X / dX_zp: F(X) = dX_zp^2 F^
};

const char* to_string(QuadratureConvention c);

/// Sizes from a dimensionless position-quadrature QFI.
SizeReport measured_qfi_sizes(const OscillatorMode& mode, double fisher_hat, const SingleParticleSpread& du,
                              QuadratureConvention convention = QuadratureConvention::vacuum_half);

struct CollectiveSizes {
    SizeReport collective;   // N_ext x N_osc^2, N_ent x N_osc
    SizeReport independent;  // N_ext x N_osc, N_ent unchanged
};

CollectiveSizes collective_scaling(const SizeReport& base, int oscillator_count);

/// Centre-of-mass mode of a levitated particle with F(X_cm) = 4 chi^2.
SizeReport levitated_sizes(double mass, double coherence_length, double cm_spread, double particle_count,
                           const SingleParticleSpread& du = {});

/// Mean phonon number 1 / (exp(hbar omega / k_B T) - 1). T = 0 gives 0.
/// Throws DomainError when the result exceeds 1e12 (classical limit overflow).
double thermal_occupation(double omega, double temperature);

}  // namespace macrosize
