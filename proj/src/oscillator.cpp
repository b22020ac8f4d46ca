#include "macrosize/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "macrosize/error.hpp"

namespace macrosize {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << what << " must be positive and finite (got " << v << ")";
        throw DomainError(os.str());
    }
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // A coarse 5-point estimate sets the absolute tolerance scale.
    double scale = std::abs(whole);
    for (int i = 1; i < 4; ++i) scale = std::max(scale, std::abs(f(a + i * (b - a) / 4.0)) * std::abs(b - a));
    const double tol = std::max(rel_tol * scale, 1e-300);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 40);
}

double mode_max_abs(const CustomMode& c) {
    constexpr int n = 128;
    double best = -1.0;
    double bx = 0.0;
    double by = 0.0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const double x = c.width * i / n;
            const double y = c.height * j / n;
            const double v = std::abs(c.mode(x, y));
            if (v > best) {
                best = v;
                bx = x;
                by = y;
            }
        }
    }
    // Pattern search refines the sampled maximum.
    double hx = c.width / n;
    double hy = c.height / n;
    while (hx > 1e-9 * c.width || hy > 1e-9 * c.height) {
        bool moved = false;
        for (const auto& [sx, sy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            const double x = std::clamp(bx + sx * hx, 0.0, c.width);
            const double y = std::clamp(by + sy * hy, 0.0, c.height);
            const double v = std::abs(c.mode(x, y));
            if (v > best) {
                best = v;
                bx = x;
                by = y;
                moved = true;
            }
        }
        if (!moved) {
            hx *= 0.5;
            hy *= 0.5;
        }
    }
    return best;
}

void require_unit_max(double max_abs, const char* what) {
    if (std::abs(max_abs - 1.0) > 1e-6) {
        std::ostringstream os;
        os << what << ": mode function must be normalised to max|w| = 1 (got " << max_abs << ")";
        throw DomainError(os.str());
    }
}

// Exact integral of the squared bilinear interpolant, in units of cell area.
double grid_square_integral(const GridMode& g) {
    const double cell = (g.width / (g.nx - 1)) * (g.height / (g.ny - 1));
    auto at = [&](int i, int j) { return g.samples[static_cast<std::size_t>(j) * g.nx + i]; };
    static constexpr double m[2][2] = {{1.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 1.0 / 3.0}};
    double total = 0.0;
    for (int j = 0; j + 1 < g.ny; ++j) {
        for (int i = 0; i + 1 < g.nx; ++i) {
            const double f[2][2] = {{at(i, j), at(i, j + 1)}, {at(i + 1, j), at(i + 1, j + 1)}};
            double s = 0.0;
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d) s += f[a][b] * f[c][d] * m[a][c] * m[b][d];
            total += s;
        }
    }
    return total * cell;
}

}  // namespace

SingleParticleSpread delta_u_preset(std::string_view material) {
    if (material == "aluminium" || material == "aluminum" || material == "Al") return {1.7e-11, "aluminium"};
    if (material == "silica" || material == "SiO2") return {2.5e-11, "silica"};
    if (material == "sapphire" || material == "Al2O3") return {6.5e-12, "sapphire"};
    if (material == "silicon-nitride" || material == "Si3N4") return {2.0e-11, "silicon-nitride"};
    if (material == "default") return {};
    throw DomainError("unknown material preset '" + std::string(material) + "'");
}

double integrate_2d(const std::function<double(double, double)>& f, double x0, double x1, double y0, double y1,
                    double rel_tol) {
    auto inner = [&](double x) {
        return adaptive_simpson([&](double y) { return f(x, y); }, y0, y1, rel_tol * 0.1);
    };
    return adaptive_simpson(inner, x0, x1, rel_tol);
}

double body_volume(const ModeGeometry& g) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CircularDrum>) {
                require_positive(s.radius, "drum radius");
                require_positive(s.thickness, "drum thickness");
                return kPi * s.radius * s.radius * s.thickness;
            } else if constexpr (std::is_same_v<T, SquareDrum>) {
                require_positive(s.side, "drum side");
                require_positive(s.thickness, "drum thickness");
                return s.side * s.side * s.thickness;
            } else if constexpr (std::is_same_v<T, UniformBody>) {
                require_positive(s.volume, "body volume");
                return s.volume;
            } else if constexpr (std::is_same_v<T, Torus>) {
                require_positive(s.minor_radius, "torus minor radius");
                require_positive(s.major_radius, "torus major radius");
                if (s.minor_radius > s.major_radius) throw DomainError("torus minor radius exceeds major radius");
                return 2.0 * kPi * kPi * s.major_radius * s.minor_radius * s.minor_radius;
            } else {
                require_positive(s.width, "mode width");
                require_positive(s.height, "mode height");
                require_positive(s.thickness, "mode thickness");
                return s.width * s.height * s.thickness;
            }
        },
        g.shape);
}

ModeVolume mode_volume(const ModeGeometry& g, ModeKind kind) {
    require_positive(g.density, "density");
    require_positive(g.mean_atomic_mass, "mean atomic mass");
    ModeVolume out{};
    out.body_volume = body_volume(g);
    out.method = "closed-form";
    if (kind == ModeKind::uniform) {
        out.mode_volume = out.body_volume;
    } else if (std::holds_alternative<CircularDrum>(g.shape)) {
        const double j1 = std::cyl_bessel_j(1.0, kBesselJ0Zero);
        out.mode_volume = out.body_volume * j1 * j1;
    } else if (std::holds_alternative<SquareDrum>(g.shape)) {
        out.mode_volume = out.body_volume / 4.0;
    } else if (const auto* c = std::get_if<CustomMode>(&g.shape)) {
        if (!c->mode) throw DomainError("custom mode function is empty");
        require_unit_max(mode_max_abs(*c), "custom mode");
        const auto sq = [&](double x, double y) {
            const double w = c->mode(x, y);
            return w * w;
        };
        out.mode_volume = c->thickness * integrate_2d(sq, 0.0, c->width, 0.0, c->height, 1e-8);
        out.method = "adaptive-simpson";
    } else if (const auto* gm = std::get_if<GridMode>(&g.shape)) {
        if (gm->nx < 2 || gm->ny < 2) throw DomainError("grid mode needs at least 2 x 2 samples");
        if (gm->samples.size() != static_cast<std::size_t>(gm->nx) * gm->ny) {
            throw DimensionError("grid mode sample count does not match nx * ny");
        }
        double mx = 0.0;
        for (double v : gm->samples) mx = std::max(mx, std::abs(v));
        require_unit_max(mx, "grid mode");
        out.mode_volume = gm->thickness * grid_square_integral(*gm);
        out.method = "bilinear-exact";
    } else {
        // Tori and other bulk shapes are treated with a constant mode function.
        out.mode_volume = out.body_volume;
    }
    out.mode_mass = g.density * out.mode_volume;
    out.particle_count = g.density * out.body_volume / g.mean_atomic_mass;
    out.mode_particles = out.particle_count * out.mode_volume / out.body_volume;
    return out;
}

double drum_mode_fraction_numeric(double rel_tol) {
    // V_k / V = (1 / pi) int_0^{2 pi} int_0^1 J0(alpha r)^2 r dr dtheta on the unit disc.
    const auto f = [](double r, double) {
        const double w = std::cyl_bessel_j(0.0, kBesselJ0Zero * r);
        return w * w * r;
    };
    return integrate_2d(f, 0.0, 1.0, 0.0, 2.0 * kPi, rel_tol) / kPi;
}

OscillatorMode OscillatorMode::from_mass_frequency(double mass, double omega, double mode_particles) {
    require_positive(mass, "mode mass");
    require_positive(omega, "mode frequency");
    require_positive(mode_particles, "mode particle number");
    const double zp = std::sqrt(constants().hbar / (2.0 * mass * omega));
    return OscillatorMode{mass, omega, zp, mode_particles};
}

OscillatorMode OscillatorMode::from_parameters(double mass, double omega, double zero_point,
                                               double mode_particles) {
    require_positive(mass, "mode mass");
    require_positive(omega, "mode frequency");
    require_positive(zero_point, "zero-point spread");
    require_positive(mode_particles, "mode particle number");
    return OscillatorMode{mass, omega, zero_point, mode_particles};
}

OscillatorMode OscillatorMode::from_geometry(const ModeGeometry& g, double omega, ModeKind kind) {
    const ModeVolume v = mode_volume(g, kind);
    return from_mass_frequency(v.mode_mass, omega, v.mode_particles);
}

ModeFisher thermal_mode_qfi(const OscillatorMode& mode, double nbar) {
    if (!(nbar >= 0.0)) throw DomainError("thermal_mode_qfi: nbar must be >= 0");
    const double g = 2.0 * nbar + 1.0;
    const double q = mode.mode_mass * mode.zero_point;
    const double p = constants().hbar / (2.0 * mode.zero_point);
    return ModeFisher{4.0 * q * q / g, 4.0 * p * p / g};
}

ThermalSizes thermal_sizes(const OscillatorMode& mode, double nbar, const SingleParticleSpread& du) {
    require_positive(du.value, "single-particle spread du");
    const ModeFisher f = thermal_mode_qfi(mode, nbar);
    const double g = 2.0 * nbar + 1.0;
    const double zr = mode.zero_point / du.value;
    const auto& c = constants();

    ThermalSizes out;
    auto echo = [&](SizeReport& r) {
        r.inputs["mode_mass"] = mode.mode_mass;
        r.inputs["frequency"] = mode.frequency;
        r.inputs["zero_point"] = mode.zero_point;
        r.inputs["mode_particles"] = mode.mode_particles;
        r.inputs["nbar"] = nbar;
        r.inputs["delta_u"] = du.value;
        r.partition_count = mode.mode_particles;
        r.notes.push_back("delta_u source: " + du.source);
    };
    out.position.n_ext = extensive_size(f.position, c.position_unit());
    out.position.n_ent = mode.mode_particles * zr * zr / g;
    out.position.unit = "Q0";
    echo(out.position);

    out.momentum.n_ext = extensive_size(f.momentum, c.momentum_unit());
    out.momentum.n_ent = 1.0 / (g * mode.mode_particles * zr * zr);
    out.momentum.unit = "P0";
    echo(out.momentum);

    out.position.witness_depth = witness_depth(out.position.n_ent);
    out.momentum.witness_depth = witness_depth(out.momentum.n_ent);
    return out;
}

const char* to_string(QuadratureConvention c) {
    switch (c) {
        case QuadratureConvention::vacuum_half: return "vacuum-half";
        case QuadratureConvention::zero_point_unit: return "zero-point-unit";
    }
    return "unknown";
}

SizeReport measured_qfi_sizes(const OscillatorMode& mode, double fisher_hat, const SingleParticleSpread& du,
                              QuadratureConvention convention) {
    if (!(fisher_hat >= 0.0)) throw DomainError("measured_qfi_sizes: dimensionless QFI must be >= 0");
    require_positive(du.value, "single-particle spread du");
    const double per_unit = convention == QuadratureConvention::vacuum_half ? 2.0 : 1.0;
    const double f_x = per_unit * mode.zero_point * mode.zero_point * fisher_hat;
    const auto& c = constants();

    SizeReport r;
    r.n_ext = extensive_size(mode.mode_mass * mode.mode_mass * f_x, c.position_unit());
    r.n_ent = mode.mode_particles * f_x / (4.0 * du.value * du.value);
    r.witness_depth = witness_depth(r.n_ent);
    r.unit = "Q0";
    r.partition_count = mode.mode_particles;
    r.inputs["fisher_hat"] = fisher_hat;
    r.inputs["mode_mass"] = mode.mode_mass;
    r.inputs["zero_point"] = mode.zero_point;
    r.inputs["mode_particles"] = mode.mode_particles;
    r.inputs["delta_u"] = du.value;
    r.notes.push_back(std::string("quadrature convention: ") + to_string(convention));
    r.notes.push_back("delta_u source: " + du.source);
    return r;
}

CollectiveSizes collective_scaling(const SizeReport& base, int oscillator_count) {
    if (oscillator_count < 1) throw DomainError("collective_scaling: oscillator count must be >= 1");
    const double n = oscillator_count;
    CollectiveSizes out{base, base};
    out.collective.n_ext *= n * n;
    out.collective.n_ent *= n;
    out.collective.partition_count *= n;
    out.collective.inputs["oscillator_count"] = n;
    out.collective.notes.push_back("collective mode: N_ext x N_osc^2, N_ent x N_osc");
    out.collective.witness_depth = witness_depth(out.collective.n_ent);

    out.independent.n_ext *= n;
    out.independent.partition_count *= n;
    out.independent.inputs["oscillator_count"] = n;
    out.independent.notes.push_back("independent oscillators: N_ext x N_osc, N_ent unchanged");
    return out;
}

SizeReport levitated_sizes(double mass, double coherence_length, double cm_spread, double particle_count,
                           const SingleParticleSpread& du) {
    require_positive(mass, "particle mass");
    require_positive(cm_spread, "centre-of-mass spread");
    require_positive(particle_count, "particle count");
    require_positive(du.value, "single-particle spread du");
    if (!(coherence_length >= 0.0)) throw DomainError("coherence length must be >= 0");
    const double chi2 = coherence_length * coherence_length;
    SizeReport r;
    r.n_ext = extensive_size(4.0 * mass * mass * chi2, constants().position_unit());
    r.n_ent = particle_count * chi2 / (cm_spread * cm_spread + du.value * du.value);
    r.witness_depth = witness_depth(r.n_ent);
    r.unit = "Q0";
    r.partition_count = particle_count;
    r.inputs["mass"] = mass;
    r.inputs["coherence_length"] = coherence_length;
    r.inputs["cm_spread"] = cm_spread;
    r.inputs["particle_count"] = particle_count;
    r.inputs["delta_u"] = du.value;
    r.notes.push_back("delta_u source: " + du.source);
    return r;
}

double thermal_occupation(double omega, double temperature) {
    require_positive(omega, "mode frequency");
    if (!(temperature >= 0.0)) throw DomainError("temperature must be >= 0");
    if (temperature == 0.0) return 0.0;
    const double x = constants().hbar * omega / (constants().boltzmann * temperature);
    const double n = 1.0 / std::expm1(x);
    if (!std::isfinite(n) || n > 1e12) {
        std::ostringstream os;
        os << "thermal occupation overflow: hbar omega / k_B T = " << x;
        throw DomainError(os.str());
    }
    return n;
}

}  // namespace macrosize
