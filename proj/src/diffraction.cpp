#include "macrosize/diffraction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "macrosize/error.hpp"
#include "macrosize/fisher.hpp"

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

void require_open_fraction(double g) {
    if (!(g > 0.0 && g < 1.0)) throw DomainError("open fraction must lie strictly inside (0, 1)");
}

// Linear least squares for n - 1 = a sin(ks) + b cos(ks) at fixed k.
Eigen::Vector2d linear_amplitudes(const std::vector<double>& s, const std::vector<double>& y, double k) {
    Eigen::Matrix2d ata = Eigen::Matrix2d::Zero();
    Eigen::Vector2d aty = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double sn = std::sin(k * s[i]);
        const double cs = std::cos(k * s[i]);
        ata(0, 0) += sn * sn;
        ata(0, 1) += sn * cs;
        ata(1, 1) += cs * cs;
        aty(0) += sn * y[i];
        aty(1) += cs * y[i];
    }
    ata(1, 0) = ata(0, 1);
    return ata.ldlt().solve(aty);
}

double sum_sq(const std::vector<double>& s, const std::vector<double>& y, double a, double b, double k) {
    double r = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = y[i] - a * std::sin(k * s[i]) - b * std::cos(k * s[i]);
        r += d * d;
    }
    return r;
}

}  // namespace

double TalbotLauSetup::k() const { return wavenumber ? *wavenumber : 2.0 * kPi / period; }

void TalbotLauSetup::validate() const {
    require_positive(mass, "mass");
    require_positive(atoms, "atom count");
    require_positive(period, "grating period");
    require_open_fraction(open_fraction);
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw DomainError("visibility must lie in [0, 1]");
    require_positive(flight_time, "flight time");
    require_positive(source_length, "source length L0");
    require_positive(grating_length, "grating separation L");
    if (wavenumber) require_positive(*wavenumber, "fringe wavenumber");
}

double flight_time(double distance, double speed) {
    require_positive(distance, "flight distance");
    require_positive(speed, "speed");
    return distance / speed;
}

TalbotLauSetup fein_setup(double source_length) {
    return TalbotLauSetup{26777.0 * constants().atomic_mass_unit,
                          2000.0,
                          266e-9,
                          0.43,
                          0.25,
                          flight_time(1.0, 260.0),
                          source_length,
                          1.0,
                          std::nullopt};
}

double FringeScan::mean() const {
    if (counts.empty()) return 0.0;
    double s = 0.0;
    for (double c : counts) s += c;
    return s / static_cast<double>(counts.size());
}

FringeScan FringeScan::normalized() const {
    const double m = mean();
    if (!(m > 0.0)) throw DomainError("fringe scan has non-positive mean count");
    FringeScan out = *this;
    for (double& c : out.counts) c /= m;
    return out;
}

FringeScan read_scan(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("header error: empty fringe-scan file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "fringe-scan v1") throw ParseError("header error: expected 'fringe-scan v1', got '" + line + "'");
    FringeScan scan;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ss(line);
        double s = 0.0;
        double n = 0.0;
        std::string extra;
        if (!(ss >> s >> n) || (ss >> extra)) {
            throw ParseError("fringe-scan line " + std::to_string(lineno) + ": expected '<s> <n>'");
        }
        if (!std::isfinite(s) || !std::isfinite(n)) {
            throw ParseError("non-finite value on fringe-scan line " + std::to_string(lineno));
        }
        scan.positions.push_back(s);
        scan.counts.push_back(n);
    }
    return scan;
}

FringeScan load_scan(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open fringe-scan file '" + path.string() + "'");
    return read_scan(in);
}

void write_scan(std::ostream& out, const FringeScan& scan) {
    out << std::setprecision(17) << "fringe-scan v1\n";
    for (std::size_t i = 0; i < scan.positions.size(); ++i) out << scan.positions[i] << ' ' << scan.counts[i] << '\n';
}

FringeScan synth_scan(double visibility, double k, double phase, int points, double span, double noise,
                      std::uint64_t seed) {
    if (points < 2) throw DomainError("synth_scan: need at least 2 points");
    require_positive(span, "scan span");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    FringeScan scan;
    for (int i = 0; i < points; ++i) {
        const double s = span * i / (points - 1);
        scan.positions.push_back(s);
        scan.counts.push_back(1.0 + visibility * std::sin(k * s + phase) + (noise > 0.0 ? noise * gauss(rng) : 0.0));
    }
    return scan;
}

FringeFit fit_fringe(const FringeScan& scan, std::optional<double> known_k) {
    const std::size_t n = scan.positions.size();
    if (scan.counts.size() != n) throw DimensionError("fringe scan: positions and counts differ in length");
    if (n < 8) throw DomainError("fit_fringe: need at least 8 points");
    if (std::abs(scan.mean() - 1.0) > 0.05) throw DomainError("fit_fringe: scan must be normalised to unit mean");

    const auto [lo_it, hi_it] = std::minmax_element(scan.positions.begin(), scan.positions.end());
    const double s0 = *lo_it;
    const double span = *hi_it - s0;
    require_positive(span, "scan span");
    std::vector<double> s(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = scan.positions[i] - s0;
        y[i] = scan.counts[i] - 1.0;
    }

    double k = 0.0;
    if (known_k) {
        require_positive(*known_k, "fringe wavenumber");
        k = *known_k;
    } else {
        // Periodogram over one period per span up to the mean-spacing Nyquist limit.
        const double kmin = 2.0 * kPi / span;
        const double kmax = kPi * static_cast<double>(n - 1) / span;
        const double dk = kPi / (8.0 * span);
        double best = -1.0;
        for (double kk = kmin; kk <= kmax; kk += dk) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += y[i] * std::polar(1.0, -kk * s[i]);
            if (std::norm(acc) > best) {
                best = std::norm(acc);
                k = kk;
            }
        }
    }

    Eigen::Vector2d ab = linear_amplitudes(s, y, k);
    int iterations = 0;
    if (!known_k) {
        // Gauss-Newton on (a, b, k) with step halving.
        double cost = sum_sq(s, y, ab(0), ab(1), k);
        for (; iterations < 100; ++iterations) {
            Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
            Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
            for (std::size_t i = 0; i < n; ++i) {
                const double sn = std::sin(k * s[i]);
                const double cs = std::cos(k * s[i]);
                const Eigen::Vector3d g(sn, cs, s[i] * (ab(0) * cs - ab(1) * sn));
                const double r = y[i] - ab(0) * sn - ab(1) * cs;
                jtj += g * g.transpose();
                jtr += g * r;
            }
            const Eigen::Vector3d step = jtj.ldlt().solve(jtr);
            if (!step.allFinite()) break;
            double lambda = 1.0;
            bool improved = false;
            for (int h = 0; h < 30; ++h, lambda *= 0.5) {
                const double a = ab(0) + lambda * step(0);
                const double b = ab(1) + lambda * step(1);
                const double kk = k + lambda * step(2);
                const double c = sum_sq(s, y, a, b, kk);
                if (c <= cost) {
                    improved = cost - c > 1e-15 * std::max(cost, 1e-300);
                    ab = {a, b};
                    k = kk;
                    cost = c;
                    break;
                }
            }
            if (!improved || std::abs(step(2)) < 1e-13 * k) break;
        }
    }

    FringeFit fit{};
    fit.k = k;
    fit.visibility = std::min(1.0, std::hypot(ab(0), ab(1)));
    // a sin + b cos = v sin(k s' + phi') with s' = s - s0.
    const double phase_shifted = std::atan2(ab(1), ab(0));
    fit.phase = std::remainder(phase_shifted - k * s0, 2.0 * kPi);
    fit.iterations = iterations;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = scan.counts[i] - 1.0 - fit.visibility * std::sin(k * scan.positions[i] + fit.phase);
        rss += d * d;
    }
    fit.rms = std::sqrt(rss / static_cast<double>(n));
    if (fit.rms > 0.2) {
        std::ostringstream os;
        os << "non-sinusoidal scan: rms residual " << fit.rms << " exceeds 0.2";
        throw DomainError(os.str());
    }
    if (fit.visibility > 0.0 && span * k < 2.0 * kPi * (1.0 - 1e-9)) {
        throw DomainError("fit_fringe: scan spans less than one fringe period");
    }
    return fit;
}

double fi_bound(double open_fraction, double visibility, double k) {
    require_open_fraction(open_fraction);
    return open_fraction / (1.0 - open_fraction) * visibility * visibility * k * k;
}

double fi_exact(double open_fraction, double visibility, double k, double s) {
    require_open_fraction(open_fraction);
    const double r = open_fraction * (1.0 + visibility * std::sin(k * s));
    const double dr = open_fraction * visibility * k * std::cos(k * s);
    if (r <= 0.0 || r >= 1.0) return 0.0;
    return binary_trial_fi(r, dr);
}

double fi_exact_max(double open_fraction, double visibility, double k) {
    require_positive(k, "fringe wavenumber");
    constexpr int samples = 720;
    const double period = 2.0 * kPi / k;
    int best = 0;
    double best_v = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double v = fi_exact(open_fraction, visibility, k, period * i / samples);
        if (v > best_v) {
            best_v = v;
            best = i;
        }
    }
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = period * (best - 1) / samples;
    double hi = period * (best + 1) / samples;
    for (int it = 0; it < 80; ++it) {
        const double c = hi - inv_phi * (hi - lo);
        const double d = lo + inv_phi * (hi - lo);
        if (fi_exact(open_fraction, visibility, k, c) > fi_exact(open_fraction, visibility, k, d)) {
            hi = d;
        } else {
            lo = c;
        }
    }
    return std::max(best_v, fi_exact(open_fraction, visibility, k, 0.5 * (lo + hi)));
}

double qfi_bound(double fi_cl, double t) {
    require_positive(t, "flight time");
    if (!(fi_cl >= 0.0)) throw DomainError("classical Fisher information must be >= 0");
    const double ht = constants().hbar * t;
    return ht * ht * fi_cl;
}

double qfi_bound_from_density(std::span<const double> density, double step, double t) {
    return qfi_bound(classical_fi_grid(density, step).value, t);
}

double coherence_length(double fisher, double mass) {
    require_positive(mass, "mass");
    if (!(fisher >= 0.0)) throw DomainError("Fisher information must be >= 0");
    return std::sqrt(fisher) / (2.0 * mass);
}

CmSpread cm_spread(const TalbotLauSetup& s) {
    require_positive(s.period, "grating period");
    require_open_fraction(s.open_fraction);
    require_positive(s.source_length, "source length L0");
    require_positive(s.grating_length, "grating separation L");
    CmSpread c{};
    c.slit_width = s.open_fraction * s.period;
    c.at_first = c.slit_width / std::sqrt(3.0);
    c.at_second = c.at_first * (1.0 + s.grating_length / s.source_length);
    return c;
}

DiffractionSizes diffraction_sizes(const TalbotLauSetup& s) {
    s.validate();
    DiffractionSizes d{};
    d.fi_classical = fi_bound(s.open_fraction, s.visibility, s.k());
    d.fisher = qfi_bound(d.fi_classical, s.flight_time);
    d.coherence = coherence_length(d.fisher, s.mass);
    d.spread = cm_spread(s);
    const double ratio = d.coherence / d.spread.at_second;

    SizeReport& r = d.sizes;
    r.n_ext = extensive_size(d.fisher, constants().position_unit());
    r.n_ent = s.atoms * ratio * ratio;
    r.witness_depth = witness_depth(r.n_ent);
    r.unit = "Q0";
    r.partition_count = s.atoms;
    r.inputs["mass"] = s.mass;
    r.inputs["atoms"] = s.atoms;
    r.inputs["open_fraction"] = s.open_fraction;
    r.inputs["visibility"] = s.visibility;
    r.inputs["k"] = s.k();
    r.inputs["flight_time"] = s.flight_time;
    r.inputs["source_length"] = s.source_length;
    r.inputs["grating_length"] = s.grating_length;
    r.inputs["fisher"] = d.fisher;
    r.inputs["coherence_length"] = d.coherence;
    r.inputs["cm_spread"] = d.spread.at_second;
    r.notes.push_back("classical FI evaluated at ks = n pi (sinusoidal fringe model)");
    return d;
}

DiffractionSizes diffraction_sizes(TalbotLauSetup s, const FringeFit& fit) {
    s.visibility = fit.visibility;
    s.wavenumber = fit.k;
    DiffractionSizes d = diffraction_sizes(s);
    d.sizes.notes.push_back("visibility and k from fringe fit");
    d.sizes.inputs["fit_rms"] = fit.rms;
    return d;
}

SourceLengthRange source_length_range(TalbotLauSetup s, double l0_min, double l0_max) {
    require_positive(l0_min, "minimum source length");
    if (!(l0_max >= l0_min)) throw DomainError("source length range must satisfy max >= min");
    s.source_length = l0_min;
    DiffractionSizes lo = diffraction_sizes(s);
    s.source_length = l0_max;
    DiffractionSizes hi = diffraction_sizes(s);
    return SourceLengthRange{lo, hi};
}

}  // namespace macrosize
