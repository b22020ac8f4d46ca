#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "macrosize/catalog.hpp"
#include "macrosize/diffraction.hpp"
#include "macrosize/error.hpp"
#include "macrosize/fisher.hpp"
#include "macrosize/measures.hpp"
#include "macrosize/oscillator.hpp"
#include "macrosize/quantum.hpp"
#include "macrosize/wigner.hpp"
#include "report.hpp"

namespace macrosize::cli {

namespace {

using D = Dimension;

struct Globals {
    Format format = Format::table;
    bool format_given = false;
    std::uint64_t seed = 0;
    std::string out_path;
};

void add_sizes(Report& r, const SizeReport& s, const std::string& suffix) {
    r.add("n_ext" + suffix, s.n_ext);
    r.add("n_ent" + suffix, s.n_ent);
    r.add_count("witness_depth" + suffix, s.witness_depth);
}

SingleParticleSpread read_spread(const Section& s) {
    if (s.has("delta_u") && s.has("material")) throw ParseError("give either 'delta_u' or 'material', not both");
    if (s.has("delta_u")) return SingleParticleSpread{s.quantity("delta_u", D::length), "config"};
    return delta_u_preset(s.text_or("material", "default"));
}

QuadratureConvention read_convention(const Section& s) {
    const std::string c = s.text_or("convention", "vacuum-half");
    if (c == "vacuum-half") return QuadratureConvention::vacuum_half;
    if (c == "zero-point-unit") return QuadratureConvention::zero_point_unit;
    throw ParseError("convention must be 'vacuum-half' or 'zero-point-unit', got '" + c + "'");
}

// mode_mass, frequency, optional zero_point, mode_particles.
OscillatorMode read_direct_mode(const Section& s) {
    const double mass = s.quantity("mode_mass", D::mass);
    const double omega = s.quantity("frequency", D::frequency);
    const double particles = s.quantity("mode_particles", D::dimensionless);
    if (const auto zp = s.optional_quantity("zero_point", D::length)) {
        return OscillatorMode::from_parameters(mass, omega, *zp, particles);
    }
    return OscillatorMode::from_mass_frequency(mass, omega, particles);
}

// Mean occupation from either nbar or a temperature.
double read_occupation(const Section& s, double omega) {
    if (s.has("nbar") && s.has("temperature")) throw ParseError("give either 'nbar' or 'temperature', not both");
    if (s.has("temperature")) return thermal_occupation(omega, s.quantity("temperature", D::temperature));
    return s.quantity("nbar", D::dimensionless);
}

void add_mode(Report& r, const OscillatorMode& m) {
    r.add("mode_mass", m.mode_mass, "kg");
    r.add("frequency", m.frequency, "rad/s");
    r.add("zero_point", m.zero_point, "m");
    r.add("mode_particles", m.mode_particles);
}

void add_thermal(Report& r, const OscillatorMode& mode, double nbar, const SingleParticleSpread& du,
                 const std::string& observable) {
    const ThermalSizes t = thermal_sizes(mode, nbar, du);
    r.add("nbar", nbar);
    r.add("delta_u", du.value, "m");
    if (observable == "position" || observable == "both") add_sizes(r, t.position, "(Q)");
    if (observable == "momentum" || observable == "both") add_sizes(r, t.momentum, "(P)");
    r.note("delta_u source: " + du.source);
}

// ---------------------------------------------------------------- measure

Report qubit_measure(const Section& state, const std::string& kind, const std::string& observable,
                     const std::string& partition) {
    if (observable != "sigma-z") throw ParseError("qubit systems support observable 'sigma-z' only");
    if (partition != "qubits" && partition != "whole") {
        throw ParseError("qubit systems support partition 'qubits' or 'whole'");
    }
    const int n = state.count("qubits");
    if (n < 1 || n > kMaxGhzQubits) {
        throw DomainError("qubit count must lie in [1, " + std::to_string(kMaxGhzQubits) + "]");
    }

    std::optional<DensityMatrix> rho;
    if (kind == "ghz" || kind == "noisy-ghz") {
        const double q = state.quantity_or("weight", D::dimensionless, 0.5);
        const double phi = state.quantity_or("phase", D::dimensionless, 0.0);
        rho = ghz_state(n, q, phi).state;
        if (kind == "noisy-ghz") {
            const double p = state.quantity("visibility", D::dimensionless);
            if (!(p >= 0.0 && p <= 1.0)) throw DomainError("visibility must lie in [0, 1]");
            rho = mix(p, *rho, DensityMatrix::maximally_mixed(rho->dim()));
        }
    } else {
        const double theta = state.quantity_or("angle", D::dimensionless, std::numbers::pi / 2.0);
        Vector psi(2);
        psi << std::cos(theta / 2.0), std::sin(theta / 2.0);
        DensityMatrix single = DensityMatrix::pure(psi);
        DensityMatrix acc = single;
        for (int i = 1; i < n; ++i) acc = tensor(acc, single);
        rho = acc;
    }

    const PartitionedObservable sites = PartitionedObservable::collective(pauli_z(), n, "qubits");
    const PartitionedObservable a =
        partition == "qubits" ? sites : PartitionedObservable::from_locals({sites.total}, "whole");
    const EntangledSize e = entangled_size(*rho, a);

    Report r;
    r.title = "measure: " + kind + ", " + std::to_string(n) + " qubits";
    r.add("fisher", e.fisher);
    r.add("n_ext", extensive_size(e.fisher, 1.0));
    r.add("n_ent", e.value);
    r.add_count("witness_depth", witness_depth(e.value));
    r.add_count("parts", e.parts);
    r.note("observable: sum of sigma-z, extensive unit = 1 (eigenvalue spacing 2)");
    r.note("partition: " + partition);
    return r;
}

Report cmd_measure(const std::filesystem::path& path) {
    std::vector<std::string> notes;
    const Section top(load_document(path), "measure config", {"state", "observable", "partition"}, &notes);
    const auto& state_node = top.node("state");
    if (!state_node.is_object() || !state_node.contains("kind") || !state_node.at("kind").is_string()) {
        throw ParseError("measure config: state needs a string 'kind'");
    }
    const std::string kind = state_node.at("kind").get<std::string>();

    Report r;
    if (kind == "ghz" || kind == "noisy-ghz" || kind == "product") {
        std::vector<std::string> keys = {"kind", "qubits"};
        if (kind == "product") keys.push_back("angle");
        if (kind != "product") keys.insert(keys.end(), {"weight", "phase"});
        if (kind == "noisy-ghz") keys.push_back("visibility");
        const Section state = top.child("state", keys);
        r = qubit_measure(state, kind, top.text_or("observable", "sigma-z"), top.text_or("partition", "qubits"));
    } else if (kind == "thermal-oscillator") {
        const Section state = top.child("state", {"kind", "mode_mass", "frequency", "zero_point", "mode_particles",
                                                  "nbar", "temperature", "delta_u", "material"});
        const std::string observable = top.text_or("observable", "both");
        if (observable != "position" && observable != "momentum" && observable != "both") {
            throw ParseError("oscillator observable must be 'position', 'momentum' or 'both'");
        }
        if (top.text_or("partition", "atoms") != "atoms") throw ParseError("oscillator partition must be 'atoms'");
        const OscillatorMode mode = read_direct_mode(state);
        const double nbar = read_occupation(state, mode.frequency);
        r.title = "measure: thermal oscillator";
        add_mode(r, mode);
        add_thermal(r, mode, nbar, read_spread(state), observable);
    } else if (kind == "levitated") {
        const Section state = top.child(
            "state", {"kind", "mass", "coherence_length", "cm_spread", "particles", "delta_u", "material"});
        if (top.text_or("observable", "position") != "position") {
            throw ParseError("levitated observable must be 'position'");
        }
        if (top.text_or("partition", "atoms") != "atoms") throw ParseError("levitated partition must be 'atoms'");
        const SingleParticleSpread du = read_spread(state);
        const SizeReport s = levitated_sizes(state.quantity("mass", D::mass),
                                             state.quantity("coherence_length", D::length),
                                             state.quantity("cm_spread", D::length),
                                             state.quantity("particles", D::dimensionless), du);
        r.title = "measure: levitated particle";
        r.add("mass", s.inputs.at("mass"), "kg");
        r.add("coherence_length", s.inputs.at("coherence_length"), "m");
        r.add("cm_spread", s.inputs.at("cm_spread"), "m");
        r.add("delta_u", du.value, "m");
        add_sizes(r, s, "");
        r.note("delta_u source: " + du.source);
    } else {
        throw ParseError("measure config: unknown state kind '" + kind + "'");
    }
    for (auto& n : notes) r.note(n);
    return r;
}

// ------------------------------------------------------------- oscillator

Shape read_shape(const Section& g, const std::string& shape) {
    if (shape == "circular-drum") return CircularDrum{g.quantity("radius", D::length), g.quantity("thickness", D::length)};
    if (shape == "square-drum") return SquareDrum{g.quantity("side", D::length), g.quantity("thickness", D::length)};
    return Torus{g.quantity("minor_radius", D::length), g.quantity("major_radius", D::length)};
}

Report cmd_oscillator(const std::filesystem::path& path) {
    std::vector<std::string> notes;
    const Section top(load_document(path), "oscillator config",
                      {"geometry", "mode", "mode_mass", "mode_particles", "zero_point", "frequency", "nbar",
                       "temperature", "fisher_hat", "convention", "delta_u", "material", "oscillators"},
                      &notes);
    Report r;
    r.title = "oscillator";

    OscillatorMode mode{};
    if (top.has("geometry")) {
        for (const char* k : {"mode_mass", "mode_particles", "zero_point"}) {
            if (top.has(k)) throw ParseError(std::string("oscillator config: '") + k + "' conflicts with 'geometry'");
        }
        const auto& gnode = top.node("geometry");
        if (!gnode.is_object() || !gnode.contains("shape") || !gnode.at("shape").is_string()) {
            throw ParseError("oscillator config: geometry needs a string 'shape'");
        }
        const std::string shape = gnode.at("shape").get<std::string>();
        std::vector<std::string> keys = {"shape", "body_mass", "mean_atomic_mass"};
        if (shape == "circular-drum") {
            keys.insert(keys.end(), {"radius", "thickness"});
        } else if (shape == "square-drum") {
            keys.insert(keys.end(), {"side", "thickness"});
        } else if (shape == "torus") {
            keys.insert(keys.end(), {"minor_radius", "major_radius"});
        } else {
            throw ParseError("geometry shape must be 'circular-drum', 'square-drum' or 'torus', got '" + shape + "'");
        }
        const Section g = top.child("geometry", keys);
        ModeGeometry geo{read_shape(g, shape), 1.0, g.quantity("mean_atomic_mass", D::mass)};
        const double body_mass = g.quantity("body_mass", D::mass);
        if (!(body_mass > 0.0)) throw DomainError("body mass must be positive");
        geo.density = body_mass / body_volume(geo);

        const std::string kind_name = top.text_or("mode", "fundamental");
        if (kind_name != "fundamental" && kind_name != "uniform") {
            throw ParseError("mode must be 'fundamental' or 'uniform'");
        }
        const ModeKind kind = kind_name == "fundamental" ? ModeKind::fundamental : ModeKind::uniform;
        const ModeVolume v = mode_volume(geo, kind);
        const double omega = top.quantity("frequency", D::frequency);
        mode = OscillatorMode::from_geometry(geo, omega, kind);
        r.add("body_mass", body_mass, "kg");
        r.add("mode_fraction", v.mode_volume / v.body_volume);
        r.add("particle_count", v.particle_count);
        r.note("mode volume method: " + v.method);
    } else {
        if (top.has("mode")) throw ParseError("oscillator config: 'mode' needs 'geometry'");
        mode = read_direct_mode(top);
    }
    add_mode(r, mode);

    const SingleParticleSpread du = read_spread(top);
    std::optional<SizeReport> position;
    if (top.has("fisher_hat")) {
        if (top.has("nbar") || top.has("temperature")) {
            throw ParseError("oscillator config: 'fisher_hat' excludes 'nbar' and 'temperature'");
        }
        const QuadratureConvention conv = read_convention(top);
        position = measured_qfi_sizes(mode, top.quantity("fisher_hat", D::dimensionless), du, conv);
        r.add("fisher_hat", top.quantity("fisher_hat", D::dimensionless));
        r.add("delta_u", du.value, "m");
        add_sizes(r, *position, "(Q)");
        r.note(std::string("quadrature convention: ") + to_string(conv));
        r.note("delta_u source: " + du.source);
    } else {
        if (top.has("convention")) throw ParseError("oscillator config: 'convention' needs 'fisher_hat'");
        const double nbar = read_occupation(top, mode.frequency);
        position = thermal_sizes(mode, nbar, du).position;
        add_thermal(r, mode, nbar, du, "both");
    }

    const int count = top.count_or("oscillators", 1);
    if (count != 1) {
        const CollectiveSizes c = collective_scaling(*position, count);
        r.add_count("oscillators", count);
        add_sizes(r, c.collective, "(Q, collective)");
        add_sizes(r, c.independent, "(Q, independent)");
        r.note("collective: one mode shared by all oscillators; independent: separate modes");
    }
    for (auto& n : notes) r.note(n);
    return r;
}

// ----------------------------------------------------------------- wigner

struct SynthOptions {
    std::string kind;
    double alpha = 2.0;
    double r = 0.5;
    double nbar = 1.0;
    int n = 1;
    double extent = 0.0;
    int points = 161;
};

StateSpec synth_spec(const SynthOptions& o) {
    if (o.kind == "vacuum") return Vacuum{};
    if (o.kind == "coherent") return Coherent{cplx(o.alpha, 0.0)};
    if (o.kind == "cat") return Cat{cplx(o.alpha, 0.0)};
    if (o.kind == "thermal") return Thermal{o.nbar};
    if (o.kind == "squeezed") return Squeezed{o.r};
    return NumberState{o.n};
}

void cmd_wigner_synth(const SynthOptions& o, std::ostream& out) {
    const StateSpec spec = synth_spec(o);
    const DensityMatrix rho = make_state(spec, suggested_dim(spec));
    double extent = o.extent;
    if (extent <= 0.0) {
        const auto fock = fock_operators(rho.dim(), 0.5, 1.0);
        const double n_mean = rho.expectation(Operator(fock.annihilate.matrix().adjoint() * fock.annihilate.matrix()));
        extent = std::ceil(std::sqrt(2.0 * n_mean + 1.0) + 5.0 / std::sqrt(2.0) + 0.5);
    }
    if (o.points < 3) throw DomainError("grid needs at least 3 points per axis");
    const Axis axis{-extent, extent, o.points};
    write_grid(out, synth_grid(rho, axis, axis));
}

Report cmd_wigner(const std::filesystem::path& grid_path, int dim, bool detail,
                  const std::optional<std::filesystem::path>& mode_path) {
    // Mode parameters are parsed before any computation.
    std::vector<std::string> notes;
    std::optional<Section> mode_doc;
    if (mode_path) {
        mode_doc.emplace(load_document(*mode_path), "mode config",
                         std::vector<std::string>{"mode_mass", "frequency", "zero_point", "mode_particles", "delta_u",
                                                  "material", "convention"},
                         &notes);
    }
    const WignerGrid grid = load_grid(grid_path);
    const GridFisher gf = qfi_from_grid(grid, dim);
    const ReconstructionReport& rec = gf.reconstruction;

    Report r;
    r.title = "wigner: " + grid_path.filename().string();
    r.add_count("dim", rec.dim);
    r.add("tail", rec.tail);
    r.add("residual", rec.residual);
    r.add("clipped_mass", rec.clipped_mass);
    r.add("theta", gf.theta, "rad");
    r.add("fisher_hat", gf.fisher_hat);
    if (mode_doc) {
        const OscillatorMode mode = read_direct_mode(*mode_doc);
        const SingleParticleSpread du = read_spread(*mode_doc);
        const QuadratureConvention conv = read_convention(*mode_doc);
        const SizeReport s = measured_qfi_sizes(mode, gf.fisher_hat, du, conv);
        r.add("zero_point", mode.zero_point, "m");
        r.add("delta_u", du.value, "m");
        add_sizes(r, s, "(Q)");
        r.note(std::string("quadrature convention: ") + to_string(conv));
        r.note("delta_u source: " + du.source);
    }
    if (detail) {
        r.columns = {"n", "population"};
        const int shown = std::min(rec.dim, 30);
        for (int n = 0; n < shown; ++n) {
            r.rows.push_back({static_cast<double>(n), rec.rho.matrix()(n, n).real()});
        }
    }
    for (auto& n : notes) r.note(n);
    return r;
}

// ------------------------------------------------------------ diffraction

TalbotLauSetup read_setup(const Section& s, bool visibility_from_scan) {
    TalbotLauSetup setup{};
    const std::string preset = s.text_or("preset", "");
    if (!preset.empty() && preset != "fein") throw ParseError("unknown diffraction preset '" + preset + "'");
    const bool base = preset == "fein";
    if (base) setup = fein_setup();
    auto pick = [&](const char* key, D d, double& slot) {
        if (s.has(key)) {
            slot = s.quantity(key, d);
        } else if (!base) {
            throw ParseError(std::string("diffraction config: missing key '") + key + "'");
        }
    };
    pick("mass", D::mass, setup.mass);
    pick("atoms", D::dimensionless, setup.atoms);
    pick("period", D::length, setup.period);
    pick("open_fraction", D::dimensionless, setup.open_fraction);
    pick("flight_time", D::time, setup.flight_time);
    pick("grating_length", D::length, setup.grating_length);
    if (!visibility_from_scan) {
        pick("visibility", D::dimensionless, setup.visibility);
    } else if (s.has("visibility")) {
        throw ParseError("diffraction config: 'visibility' conflicts with a fringe scan");
    }
    // The source length is never taken from a preset.
    setup.source_length = s.quantity("source_length", D::length);
    return setup;
}

void add_diffraction(Report& r, const DiffractionSizes& d, const std::string& suffix) {
    r.add("fi_classical" + suffix, d.fi_classical, "1/m^2");
    r.add("fisher" + suffix, d.fisher, "kg^2 m^2");
    r.add("coherence_length" + suffix, d.coherence, "m");
    r.add("slit_width" + suffix, d.spread.slit_width, "m");
    r.add("cm_spread_first" + suffix, d.spread.at_first, "m");
    r.add("cm_spread_second" + suffix, d.spread.at_second, "m");
    add_sizes(r, d.sizes, suffix);
}

Report cmd_diffraction(const std::filesystem::path& path, const std::optional<std::filesystem::path>& scan_path,
                       int calibrate, std::uint64_t seed) {
    std::vector<std::string> notes;
    const Section top(load_document(path), "diffraction config",
                      {"preset", "mass", "atoms", "period", "open_fraction", "visibility", "flight_time",
                       "source_length", "grating_length", "l0_range"},
                      &notes);
    TalbotLauSetup setup = read_setup(top, scan_path.has_value());
    double l0_min = 0.2;
    double l0_max = 1.0;
    if (top.has("l0_range")) {
        const auto& range = top.node("l0_range");
        if (!range.is_array() || range.size() != 2) throw ParseError("l0_range must hold two lengths");
        l0_min = parse_quantity(range[0], D::length, "l0_range", &notes);
        l0_max = parse_quantity(range[1], D::length, "l0_range", &notes);
    }

    Report r;
    r.title = "diffraction";
    r.add("mass", setup.mass, "kg");
    r.add("atoms", setup.atoms);
    r.add("period", setup.period, "m");
    r.add("flight_time", setup.flight_time, "s");
    r.add("source_length", setup.source_length, "m");

    std::optional<FringeFit> fit;
    std::optional<FringeScan> scan;
    if (scan_path) {
        scan = load_scan(*scan_path).normalized();
        fit = fit_fringe(*scan);
        r.add_count("scan_points", static_cast<long long>(scan->positions.size()));
        r.add("fit_visibility", fit->visibility);
        r.add("fit_wavenumber", fit->k, "1/m");
        r.add("fit_phase", fit->phase, "rad");
        r.add("fit_rms", fit->rms);
        r.note("counts normalised to unit mean before fitting");
    } else {
        r.add("visibility", setup.visibility);
    }

    auto sizes_at = [&](double l0) {
        TalbotLauSetup s = setup;
        s.source_length = l0;
        return fit ? diffraction_sizes(s, *fit) : diffraction_sizes(s);
    };
    add_diffraction(r, sizes_at(setup.source_length), "");
    if (!(l0_max >= l0_min)) throw DomainError("l0_range must satisfy max >= min");
    r.add("l0_min", l0_min, "m");
    r.add("n_ent(l0_min)", sizes_at(l0_min).sizes.n_ent);
    r.add("l0_max", l0_max, "m");
    r.add("n_ent(l0_max)", sizes_at(l0_max).sizes.n_ent);

    if (calibrate > 0) {
        if (!fit) throw ParseError("--calibrate needs a fringe scan");
        const auto [lo, hi] = std::minmax_element(scan->positions.begin(), scan->positions.end());
        const int points = static_cast<int>(scan->positions.size());
        std::vector<double> vis;
        std::vector<double> next;
        for (int i = 0; i < calibrate; ++i) {
            const FringeScan sim = synth_scan(fit->visibility, fit->k, fit->phase + fit->k * *lo, points, *hi - *lo,
                                              fit->rms, seed + static_cast<std::uint64_t>(i));
            const FringeFit f = fit_fringe(sim.normalized());
            vis.push_back(f.visibility);
            TalbotLauSetup s = setup;
            next.push_back(diffraction_sizes(s, f).sizes.n_ext);
        }
        auto sd = [](const std::vector<double>& v) {
            double m = 0.0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            double acc = 0.0;
            for (double x : v) acc += (x - m) * (x - m);
            return v.size() > 1 ? std::sqrt(acc / static_cast<double>(v.size() - 1)) : 0.0;
        };
        r.add_count("calibration_runs", calibrate);
        r.add("fit_visibility_sd", sd(vis));
        r.add("n_ext_sd", sd(next));
        r.note("calibration: synthetic scans with the fitted fringe and rms noise, seed " + std::to_string(seed));
    }
    for (auto& n : notes) r.note(n);
    return r;
}

// ---------------------------------------------------------------- catalog

Cell optional_cell(const std::optional<double>& v) {
    if (v) return *v;
    return std::string();
}

Report catalog_table1() {
    Report r;
    r.title = "catalog: oscillator table";
    r.columns = {"label",        "kind",         "n_ext",         "expected_ext", "deviation_ext",
                 "n_ent",        "expected_ent", "deviation_ent", "tolerance",    "within"};
    for (const TableRow& row : table1()) {
        r.rows.push_back({row.label, row.kind, row.n_ext, row.expected_ext, row.deviation_ext(), row.n_ent,
                          row.expected_ent, row.deviation_ent(), std::string(to_string(row.tolerance)),
                          std::string(row.within_tolerance() ? "yes" : "no")});
        for (const auto& n : row.notes) r.note(row.label + ": " + n);
    }
    return r;
}

Report catalog_fig3() {
    Report r;
    r.title = "catalog: size dataset";
    r.columns = {"label", "n_ext", "n_ent", "class", "deviation_ext", "deviation_ent"};
    for (const DatasetRow& row : figure3_dataset()) {
        std::optional<double> de;
        std::optional<double> dn;
        if (row.expected_ext) de = row.n_ext / *row.expected_ext - 1.0;
        if (row.expected_ent) dn = row.n_ent / *row.expected_ent - 1.0;
        r.rows.push_back({row.label, row.n_ext, row.n_ent, row.cls, optional_cell(de), optional_cell(dn)});
        if (!row.note.empty()) r.note(row.label + ": " + row.note);
    }
    return r;
}

Report catalog_leggett() {
    const CrystalScenario s = leggett_scenario();
    const CrystalReport c = leggett_crystal(s);
    const PartitionComparison p = nucleon_partition_comparison(s);
    Report r;
    r.title = "catalog: Leggett crystal";
    r.add("atoms", s.atoms);
    r.add("atom_mass", s.atom_mass, "kg");
    r.add("velocity", s.velocity, "m/s");
    r.add("confinement", s.confinement, "m");
    r.add("time", s.time, "s");
    r.add("momentum_split", c.momentum_split, "kg m/s");
    r.add("atom_momentum_spread", c.atom_momentum_spread, "kg m/s");
    r.add("r_p", c.r_p);
    r.add("n_ext(P)", c.n_ext_p);
    r.add("n_ent(P)", c.n_ent_p);
    r.add("separation", c.separation, "m");
    r.add("r_q", c.r_q);
    r.add("n_ext(Q)", c.n_ext_q);
    r.add("n_ent(Q)", c.n_ent_q);
    r.add("nucleon_confinement", p.nucleon_confinement, "m");
    r.add("momentum_ratio", p.momentum_ratio);
    r.add("momentum_ratio_refined", p.momentum_ratio_refined);
    r.add("position_ratio", p.position_ratio);
    r.note("momentum_ratio: atoms over nucleons with only the confinement changed");
    r.note("momentum_ratio_refined: nucleon count and per-nucleon momentum shift");
    return r;
}

Report catalog_nh(double n_ext, double tau, double lq) {
    const NHReport h = nh_mu(NHParams{tau, lq, n_ext});
    Report r;
    r.title = "catalog: collapse-model relation";
    r.add("n_ext", n_ext);
    r.add("coherence_time", tau, "s");
    r.add("critical_length", lq, "m");
    r.add("sigma_q", h.sigma_q, "kg m/s");
    r.add("tau_e", h.tau_e, "s");
    r.add("mu", h.mu);
    r.add("mu_simplified", h.mu_simplified);
    r.add("correction", h.correction);
    return r;
}

Report catalog_flux(double delta_i, double loop) {
    const FluxQubitReport f = flux_qubit(delta_i, loop);
    Report r;
    r.title = "catalog: flux qubit";
    r.add("current_difference", delta_i, "A");
    r.add("loop_length", loop, "m");
    r.add("momentum_split", f.momentum_split, "kg m/s");
    r.add("n_ext", f.n_ext);
    r.add("expected_ext", f.expected_ext);
    r.add("n_ent", f.n_ent);
    r.add("pair_length", f.pair_length, "m");
    r.note("published estimate is a factor 4 lower, as if P0 = hbar / a0");
    return r;
}

double cli_quantity(const std::string& text, D d, const std::string& name, std::vector<std::string>& notes) {
    return parse_quantity(nlohmann::json(text), d, name, &notes);
}

int emit(const Globals& g, std::ostream& out, const std::function<void(std::ostream&)>& write) {
    if (g.out_path.empty()) {
        write(out);
        return exit_ok;
    }
    std::ostringstream buf;
    write(buf);
    std::ofstream file(g.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw ParseError("cannot open output file '" + g.out_path + "'");
    file << buf.str();
    if (!file) throw Error("write failed for '" + g.out_path + "'");
    return exit_ok;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Macroscopicity sizes from quantum states, oscillator models, Wigner grids and diffraction data",
                 "macrosize"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::string format = "table";
    auto* format_opt = app.add_option("--format", format, "Output format")
                           ->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--seed", g.seed, "Seed for stochastic calibrations");
    app.add_option("--out", g.out_path, "Write output to this file");

    std::string measure_config;
    auto* measure = app.add_subcommand("measure", "Sizes of a configured state and partitioned observable");
    measure->add_option("--config", measure_config, "State, observable and partition document")->required();

    std::string osc_config;
    auto* oscillator = app.add_subcommand("oscillator", "Mode geometry, thermal or measured sizes");
    oscillator->add_option("--config", osc_config, "Oscillator document")->required();

    std::string grid_path;
    int dim = kDefaultWignerDim;
    bool detail = false;
    std::string mode_config;
    SynthOptions synth;
    auto* wigner = app.add_subcommand("wigner", "Reconstruct a Wigner grid and maximise the quadrature QFI");
    wigner->add_option("grid", grid_path, "Wigner grid file");
    wigner->add_option("--dim", dim, "Initial Fock truncation")->check(CLI::Range(1, kMaxWignerDim));
    wigner->add_flag("--report", detail, "Also list reconstructed Fock populations");
    wigner->add_option("--mode", mode_config, "Mode document for physical sizes");
    wigner->add_option("--synth", synth.kind, "Write a synthetic grid instead")
        ->check(CLI::IsMember({"vacuum", "coherent", "cat", "thermal", "squeezed", "number"}));
    wigner->add_option("--alpha", synth.alpha, "Coherent or cat amplitude");
    wigner->add_option("--squeeze", synth.r, "Squeezing parameter r");
    wigner->add_option("--nbar", synth.nbar, "Thermal occupation");
    wigner->add_option("--number", synth.n, "Fock number")->check(CLI::NonNegativeNumber);
    wigner->add_option("--extent", synth.extent, "Half width of both axes (0 = automatic)");
    wigner->add_option("--points", synth.points, "Samples per axis");

    std::string diff_config;
    std::string scan_path;
    int calibrate = 0;
    auto* diffraction = app.add_subcommand("diffraction", "Fisher bounds and sizes from a Talbot-Lau setup");
    diffraction->add_option("--config", diff_config, "Setup document")->required();
    diffraction->add_option("--scan", scan_path, "Fringe scan file");
    diffraction->add_option("--calibrate", calibrate, "Monte Carlo refits of the scan")->check(CLI::NonNegativeNumber);

    std::string what;
    std::string n_ext_text;
    std::string tau_text;
    std::string lq_text = "1e-7 m";
    std::string delta_i_text = "2e-6 A";
    std::string loop_text = "5.6e-4 m";
    auto* catalog = app.add_subcommand("catalog", "Worked examples and the combined size dataset");
    catalog->add_option("--what", what, "table1, fig3, leggett, nh or flux")
        ->required()
        ->check(CLI::IsMember({"table1", "fig3", "leggett", "nh", "flux"}));
    catalog->add_option("--n-ext", n_ext_text, "Extensive size for nh (default: diffraction setup)");
    catalog->add_option("--tau", tau_text, "Coherence time for nh, e.g. \"3.8e-3 s\"");
    catalog->add_option("--lq", lq_text, "Critical length for nh");
    catalog->add_option("--delta-i", delta_i_text, "Current difference for flux");
    catalog->add_option("--loop-length", loop_text, "Loop length for flux");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_parse;
    }
    g.format_given = format_opt->count() > 0;
    g.format = format == "csv" ? Format::csv : format == "json" ? Format::json : Format::table;

    auto report = [&](const Report& r) { return emit(g, out, [&](std::ostream& os) { render(os, r, g.format); }); };

    if (*measure) return report(cmd_measure(measure_config));
    if (*oscillator) return report(cmd_oscillator(osc_config));
    if (*wigner) {
        if (!synth.kind.empty()) {
            if (!grid_path.empty()) throw ParseError("--synth writes a grid; do not pass an input grid");
            return emit(g, out, [&](std::ostream& os) { cmd_wigner_synth(synth, os); });
        }
        if (grid_path.empty()) throw ParseError("wigner: missing grid path");
        std::optional<std::filesystem::path> mode;
        if (!mode_config.empty()) mode = mode_config;
        return report(cmd_wigner(grid_path, dim, detail, mode));
    }
    if (*diffraction) {
        std::optional<std::filesystem::path> scan;
        if (!scan_path.empty()) scan = scan_path;
        return report(cmd_diffraction(diff_config, scan, calibrate, g.seed));
    }
    if (what == "table1") return report(catalog_table1());
    if (what == "fig3") {
        if (!g.format_given || g.format == Format::csv) {
            return emit(g, out, [](std::ostream& os) { write_dataset_csv(os, figure3_dataset()); });
        }
        return report(catalog_fig3());
    }
    if (what == "leggett") return report(catalog_leggett());
    std::vector<std::string> notes;
    if (what == "nh") {
        const TalbotLauSetup fein = fein_setup();
        const double n_ext = n_ext_text.empty() ? diffraction_sizes(fein).sizes.n_ext
                                                : cli_quantity(n_ext_text, D::dimensionless, "--n-ext", notes);
        const double tau = tau_text.empty() ? fein.flight_time : cli_quantity(tau_text, D::time, "--tau", notes);
        Report r = catalog_nh(n_ext, tau, cli_quantity(lq_text, D::length, "--lq", notes));
        if (n_ext_text.empty()) r.note("n_ext from the default diffraction setup");
        return report(r);
    }
    Report r = catalog_flux(cli_quantity(delta_i_text, D::current, "--delta-i", notes),
                            cli_quantity(loop_text, D::length, "--loop-length", notes));
    return report(r);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return dispatch(args, out, err);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const nlohmann::json::exception& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const ReconstructionError& e) {
        err << "reconstruction rejected: " << e.what() << " (residual " << format_number(e.residual) << ")\n";
        return exit_reconstruction;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return exit_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

}  // namespace macrosize::cli
