#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using macrosize::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "macrosize_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path p = scratch(name);
    std::ofstream(p) << text;
    return p;
}

/// Runs with --format json and returns the named field's value.
double field(const Outcome& o, const std::string& name) {
    const auto doc = nlohmann::json::parse(o.out);
    for (const auto& f : doc.at("fields")) {
        if (f.at("name") == name) return f.at("value").get<double>();
    }
    FAIL("missing field " << name);
    return 0.0;
}

Outcome json_run(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    return invoke(args);
}

const char* teufel_state = R"({
  "state": {"kind": "thermal-oscillator", "mode_mass": "1.3e-14 kg", "frequency": "1.1e7 Hz",
            "zero_point": "7.8e-15 m", "mode_particles": 2.9e11, "nbar": 0.34, "material": "aluminium"},
  "observable": "position",
  "partition": "atoms"
})";

}  // namespace

TEST_CASE("measure: GHZ state") {
    const fs::path cfg = write_file("ghz.json", R"({"state": {"kind": "ghz", "qubits": 5}})");
    const Outcome o = json_run({"measure", "--config", cfg.string()});
    REQUIRE(o.code == 0);
    CHECK(field(o, "n_ent") == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(field(o, "witness_depth") == 5);
}

TEST_CASE("measure: thermal oscillator") {
    const Outcome o = json_run({"measure", "--config", write_file("teufel.json", teufel_state).string()});
    REQUIRE(o.code == 0);
    CHECK(field(o, "n_ext(Q)") == doctest::Approx(7.9e17).epsilon(0.01));
    CHECK(field(o, "n_ent(Q)") == doctest::Approx(3.7e4).epsilon(0.10));
    CHECK(field(o, "frequency") == doctest::Approx(2 * M_PI * 1.1e7));
    CHECK(o.out.find("Hz") != std::string::npos);
}

TEST_CASE("measure: rejected inputs") {
    std::string text = teufel_state;
    text.replace(text.find("1.3e-14 kg"), 10, "-1.3e-14 kg");
    const Outcome negative = invoke({"measure", "--config", write_file("neg.json", text).string()});
    CHECK(negative.code == 3);
    CHECK(negative.err.find("mass") != std::string::npos);

    const Outcome unknown =
        invoke({"measure", "--config", write_file("unknown.json", R"({"state": {"kind": "ghz", "qubits": 3}, "colour": 1})").string()});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("colour") != std::string::npos);

    text = teufel_state;
    text.replace(text.find("7.8e-15 m"), 9, "7.8e-15 ft");
    CHECK(invoke({"measure", "--config", write_file("unit.json", text).string()}).code == 2);

    text = teufel_state;
    text.replace(text.find("7.8e-15 m"), 9, "7.8e-15 kg");
    CHECK(invoke({"measure", "--config", write_file("dim.json", text).string()}).code == 2);

    CHECK(invoke({"measure", "--config", write_file("broken.json", "{\"state\": ").string()}).code == 2);
    CHECK(invoke({"measure", "--config", scratch("absent.json").string()}).code == 2);
    CHECK(invoke({"nonsense"}).code == 2);
}

TEST_CASE("oscillator: drum geometry") {
    const fs::path cfg = write_file("drum.json", R"({
      "geometry": {"shape": "circular-drum", "radius": "7.5e-6 m", "thickness": "1e-7 m",
                   "body_mass": "4.8e-14 kg", "mean_atomic_mass": "4.48e-26 kg"},
      "frequency": "1.1e7 Hz", "nbar": 0.34, "material": "aluminium", "oscillators": 6
    })");
    const Outcome o = json_run({"oscillator", "--config", cfg.string()});
    REQUIRE(o.code == 0);
    CHECK(field(o, "mode_fraction") == doctest::Approx(0.269514123941917).epsilon(1e-9));
    CHECK(field(o, "n_ext(Q, collective)") == doctest::Approx(36 * field(o, "n_ext(Q)")));
    CHECK(field(o, "n_ent(Q, independent)") == doctest::Approx(field(o, "n_ent(Q)")));
}

TEST_CASE("wigner: synthesised grids") {
    const fs::path vac = scratch("vacuum.grid");
    REQUIRE(invoke({"--out", vac.string(), "wigner", "--synth", "vacuum", "--points", "81"}).code == 0);
    const Outcome v = json_run({"wigner", vac.string()});
    REQUIRE(v.code == 0);
    CHECK(field(v, "fisher_hat") == doctest::Approx(2.0).epsilon(0.025));

    const fs::path cat = scratch("cat.grid");
    REQUIRE(invoke({"wigner", "--synth", "cat", "--alpha", "2", "--points", "121", "--out", cat.string()}).code == 0);
    const Outcome c = json_run({"wigner", cat.string(), "--report"});
    REQUIRE(c.code == 0);
    const double theta = field(c, "theta");
    CHECK(std::min(theta, M_PI - theta) < 0.05);
    CHECK(nlohmann::json::parse(c.out).at("rows").size() > 0);

    const fs::path bad = write_file("bad.grid", "wigner-grid v1\nx -1 1 2\np -1 1 2\nscale 1\n0.1 nan\n0.1 0.1\n");
    const Outcome b = invoke({"wigner", bad.string()});
    CHECK(b.code == 2);
    CHECK(b.err.find("non-finite value") != std::string::npos);
}

TEST_CASE("diffraction") {
    const fs::path cfg = write_file("fein.json", R"({"preset": "fein", "source_length": "0.2 m"})");
    const Outcome o = json_run({"diffraction", "--config", cfg.string()});
    REQUIRE(o.code == 0);
    CHECK(field(o, "n_ext") == doctest::Approx(1.401e14).epsilon(1e-3));
    CHECK(field(o, "n_ent(l0_min)") == doctest::Approx(6.97).epsilon(2e-3));
    CHECK(field(o, "n_ent(l0_max)") == doctest::Approx(62.7).epsilon(2e-3));

    std::ostringstream flat;
    flat << "fringe-scan v1\n";
    for (int i = 0; i < 40; ++i) flat << i * 1e-8 << " 100\n";
    const fs::path scan = write_file("flat.scan", flat.str());
    const Outcome f = json_run({"diffraction", "--config", cfg.string(), "--scan", scan.string()});
    REQUIRE(f.code == 0);
    CHECK(field(f, "n_ext") == 0.0);
    CHECK(field(f, "n_ent") == 0.0);

    const fs::path clash =
        write_file("clash.json", R"({"preset": "fein", "source_length": "0.2 m", "visibility": 0.3})");
    CHECK(invoke({"diffraction", "--config", clash.string(), "--scan", scan.string()}).code == 2);
    const fs::path no_l0 = write_file("nol0.json", R"({"preset": "fein"})");
    CHECK(invoke({"diffraction", "--config", no_l0.string()}).code == 2);
}

TEST_CASE("catalog") {
    const Outcome t = json_run({"catalog", "--what", "table1"});
    REQUIRE(t.code == 0);
    CHECK(nlohmann::json::parse(t.out).at("rows").size() == 10);

    const Outcome l = json_run({"catalog", "--what", "leggett"});
    REQUIRE(l.code == 0);
    CHECK(field(l, "n_ext(P)") == doctest::Approx(6.9e11).epsilon(0.01));
    CHECK(field(l, "n_ext(Q)") == doctest::Approx(8.9e37).epsilon(0.01));

    const Outcome a = invoke({"catalog", "--what", "fig3"});
    const Outcome b = invoke({"catalog", "--what", "fig3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("label,n_ext,n_ent,class", 0) == 0);

    CHECK(invoke({"catalog", "--what", "bogus"}).code == 2);
    CHECK(invoke({"catalog", "--what", "nh", "--lq", "1e-16 m"}).code == 3);
    CHECK(invoke({"catalog", "--what", "flux", "--delta-i", "2e-6 V"}).code == 2);
}

TEST_CASE("output formats and files") {
    const Outcome csv = invoke({"--format", "csv", "catalog", "--what", "flux"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("quantity,value,unit", 0) == 0);

    const Outcome table = invoke({"catalog", "--what", "flux"});
    CHECK(table.out.rfind("# catalog: flux qubit", 0) == 0);

    const fs::path out = scratch("flux.json");
    fs::remove(out);
    REQUIRE(invoke({"catalog", "--what", "flux", "--format", "json", "--out", out.string()}).code == 0);
    std::ifstream in(out);
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc.at("title") == "catalog: flux qubit");
}
