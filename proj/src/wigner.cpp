#include "macrosize/wigner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "macrosize/error.hpp"

namespace macrosize {

namespace {

constexpr double kPi = std::numbers::pi;

// Fills k[m * dim + n] (m <= n) with the Wigner function of |m><n| at (x, p).
// The |n><m| kernel is the complex conjugate.
class KernelRow {
public:
    explicit KernelRow(int dim) : dim_(dim), list_(static_cast<std::size_t>(dim)) {}

    template <typename Visit>
    void run(double x, double p, Visit&& visit) {
        const cplx a(x / std::numbers::sqrt2, p / std::numbers::sqrt2);
        auto& l = list_;
        l[0] = std::exp(-2.0 * std::norm(a)) / kPi;
        visit(0, 0, l[0]);
        for (int n = 1; n < dim_; ++n) {
            l[n] = 2.0 * a * l[n - 1] / std::sqrt(double(n));
            visit(0, n, l[n]);
        }
        for (int m = 1; m < dim_; ++m) {
            const double sm = std::sqrt(double(m));
            cplx temp = l[m];
            l[m] = (2.0 * std::conj(a) * temp - sm * l[m - 1]) / sm;
            visit(m, m, l[m]);
            for (int n = m + 1; n < dim_; ++n) {
                const cplx next = (2.0 * a * l[n - 1] - sm * temp) / std::sqrt(double(n));
                temp = l[n];
                l[n] = next;
                visit(m, n, l[n]);
            }
        }
    }

private:
    int dim_;
    std::vector<cplx> list_;
};

double trapezoid_weight(const Axis& a, int i) {
    return (i == 0 || i == a.count - 1) ? 0.5 * a.step() : a.step();
}

void require_axis(const Axis& a, const char* name) {
    if (a.count < 2 || !std::isfinite(a.min) || !std::isfinite(a.max) || !(a.max > a.min)) {
        std::ostringstream os;
        os << "invalid " << name << " axis (" << a.min << ", " << a.max << ", " << a.count << ")";
        throw DomainError(os.str());
    }
}

double grid_wigner(const Matrix& rho, KernelRow& row, double x, double p) {
    double w = 0.0;
    row.run(x, p, [&](int m, int n, cplx k) {
        const double term = std::real(rho(m, n) * std::conj(k));
        w += m == n ? term : 2.0 * term;
    });
    return w;
}

WignerGrid sample(const Matrix& rho, const Axis& x, const Axis& p) {
    WignerGrid g{x, p, std::vector<double>(static_cast<std::size_t>(x.count) * p.count)};
    KernelRow row(static_cast<int>(rho.rows()));
    for (int ip = 0; ip < p.count; ++ip) {
        for (int ix = 0; ix < x.count; ++ix) {
            g.values[static_cast<std::size_t>(ip) * x.count + ix] = grid_wigner(rho, row, x.value(ix), p.value(ip));
        }
    }
    return g;
}

std::string next_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError(std::string("header error: missing ") + what + " line");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_number(std::string_view tok, const char* context) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range) {
        throw ParseError(std::string("non-finite value in ") + context + ": '" + std::string(tok) + "'");
    }
    if (ec != std::errc() || ptr != last) {
        const std::string s(tok);
        if (s == "nan" || s == "NaN" || s == "inf" || s == "-inf" || s == "Inf" || s == "-Inf") {
            throw ParseError(std::string("non-finite value in ") + context + ": '" + s + "'");
        }
        throw ParseError(std::string("malformed number in ") + context + ": '" + s + "'");
    }
    if (!std::isfinite(v)) throw ParseError(std::string("non-finite value in ") + context);
    return v;
}

Axis parse_axis(const std::string& line, const char* name) {
    std::istringstream ss(line);
    std::string tag, lo, hi, count, extra;
    if (!(ss >> tag >> lo >> hi >> count) || tag != name || (ss >> extra)) {
        throw ParseError(std::string("header error: expected '") + name + " <min> <max> <count>', got '" + line + "'");
    }
    Axis a;
    a.min = parse_number(lo, "axis header");
    a.max = parse_number(hi, "axis header");
    int n = 0;
    const auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (ec != std::errc() || ptr != count.data() + count.size() || n < 2) {
        throw ParseError(std::string("header error: bad ") + name + " count '" + count + "'");
    }
    a.count = n;
    if (!(a.max > a.min)) throw ParseError(std::string("header error: ") + name + " axis max must exceed min");
    return a;
}

}  // namespace

double WignerGrid::normalization() const {
    double total = 0.0;
    for (int ip = 0; ip < p.count; ++ip) {
        const double wp = trapezoid_weight(p, ip);
        for (int ix = 0; ix < x.count; ++ix) total += wp * trapezoid_weight(x, ix) * at(ip, ix);
    }
    return total;
}

void validate(const WignerGrid& g) {
    require_axis(g.x, "x");
    require_axis(g.p, "p");
    if (g.values.size() != static_cast<std::size_t>(g.x.count) * g.p.count) {
        throw DimensionError("Wigner grid value count does not match the axes");
    }
    double peak = 0.0;
    for (double v : g.values) {
        if (!std::isfinite(v)) throw DomainError("Wigner grid contains a non-finite value");
        peak = std::max(peak, std::abs(v));
    }
    if (peak > 1.0 / kPi + 0.05) {
        std::ostringstream os;
        os << "Wigner grid violates |W| <= 1/pi (max |W| = " << peak << ")";
        throw DomainError(os.str());
    }
    const double norm = g.normalization();
    if (std::abs(norm - 1.0) > 0.02) {
        std::ostringstream os;
        os << "Wigner grid integrates to " << norm << ", not 1 +- 0.02";
        throw DomainError(os.str());
    }
}

WignerGrid read_grid(std::istream& in) {
    const std::string magic = next_line(in, "format");
    if (magic != "wigner-grid v1") throw ParseError("header error: expected 'wigner-grid v1', got '" + magic + "'");
    WignerGrid g;
    g.x = parse_axis(next_line(in, "x axis"), "x");
    g.p = parse_axis(next_line(in, "p axis"), "p");
    const std::string scale_line = next_line(in, "scale");
    std::istringstream ss(scale_line);
    std::string tag, value, extra;
    if (!(ss >> tag >> value) || tag != "scale" || (ss >> extra)) {
        throw ParseError("header error: expected 'scale <s>', got '" + scale_line + "'");
    }
    const double scale = parse_number(value, "scale");

    g.values.reserve(static_cast<std::size_t>(g.x.count) * g.p.count);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ++rows;
        if (rows > g.p.count) {
            throw ParseError("axis-count mismatch: more than " + std::to_string(g.p.count) + " rows");
        }
        std::istringstream row(line);
        std::string tok;
        int cols = 0;
        while (row >> tok) {
            ++cols;
            g.values.push_back(parse_number(tok, "grid values"));
        }
        if (cols != g.x.count) {
            throw ParseError("axis-count mismatch: row " + std::to_string(rows) + " has " + std::to_string(cols) +
                             " values, expected " + std::to_string(g.x.count));
        }
    }
    if (rows != g.p.count) {
        throw ParseError("axis-count mismatch: " + std::to_string(rows) + " rows, expected " +
                         std::to_string(g.p.count));
    }
    if (scale != 1.0) {
        for (double& v : g.values) v *= scale;
    }
    return g;
}

WignerGrid load_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open Wigner grid file '" + path.string() + "'");
    return read_grid(in);
}

void write_grid(std::ostream& out, const WignerGrid& g) {
    out << std::setprecision(17);
    out << "wigner-grid v1\n";
    out << "x " << g.x.min << ' ' << g.x.max << ' ' << g.x.count << '\n';
    out << "p " << g.p.min << ' ' << g.p.max << ' ' << g.p.count << '\n';
    out << "scale 1\n";
    for (int ip = 0; ip < g.p.count; ++ip) {
        for (int ix = 0; ix < g.x.count; ++ix) {
            if (ix) out << ' ';
            out << g.at(ip, ix);
        }
        out << '\n';
    }
}

void save_grid(const std::filesystem::path& path, const WignerGrid& g) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write Wigner grid file '" + path.string() + "'");
    write_grid(out, g);
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

double wigner_value(const DensityMatrix& rho, double x, double p) {
    KernelRow row(rho.dim());
    return grid_wigner(rho.matrix(), row, x, p);
}

WignerGrid synth_grid(const DensityMatrix& rho, const Axis& x, const Axis& p) {
    require_axis(x, "x");
    require_axis(p, "p");
    double mean_n = 0.0;
    for (int n = 0; n < rho.dim(); ++n) mean_n += n * std::real(rho.matrix()(n, n));
    const double reach = std::sqrt(2.0 * mean_n + 1.0) + 5.0 / std::numbers::sqrt2;
    for (const Axis* a : {&x, &p}) {
        if (a->min > -reach || a->max < reach) {
            std::ostringstream os;
            os << "synth_grid: axes must cover [-" << reach << ", " << reach << "] for this state";
            throw DomainError(os.str());
        }
    }
    return sample(rho.matrix(), x, p);
}

ReconstructionReport reconstruct(const WignerGrid& g, int dim) {
    validate(g);
    if (dim < 1 || dim > kMaxWignerDim) {
        throw DomainError("reconstruct: dim must lie in [1, " + std::to_string(kMaxWignerDim) + "]");
    }
    Matrix raw = Matrix::Zero(dim, dim);
    KernelRow row(dim);
    for (int ip = 0; ip < g.p.count; ++ip) {
        const double pv = g.p.value(ip);
        const double wp = trapezoid_weight(g.p, ip);
        for (int ix = 0; ix < g.x.count; ++ix) {
            const double weight = 2.0 * kPi * wp * trapezoid_weight(g.x, ix) * g.at(ip, ix);
            if (weight == 0.0) continue;
            row.run(g.x.value(ix), pv, [&](int m, int n, cplx k) { raw(m, n) += weight * std::conj(k); });
        }
    }
    for (int m = 0; m < dim; ++m) {
        raw(m, m) = std::real(raw(m, m));
        for (int n = m + 1; n < dim; ++n) raw(n, m) = std::conj(raw(m, n));
    }

    const double norm = g.normalization();
    const double tail = std::max(0.0, 1.0 - raw.trace().real() / norm);

    // PSD repair: clip negative eigenvalues, renormalise the trace.
    Eigen::SelfAdjointEigenSolver<Matrix> es(raw);
    if (es.info() != Eigen::Success) throw NumericalError("reconstruct: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    double clipped = 0.0;
    for (int i = 0; i < dim; ++i) {
        if (ev(i) < 0.0) {
            clipped -= ev(i);
            ev(i) = 0.0;
        }
    }
    const double kept = ev.sum();
    if (!(kept > 0.0)) throw ReconstructionError("reconstruct: no positive weight left after clipping", 1.0);
    ev /= kept;
    Matrix repaired = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    repaired = 0.5 * (repaired + repaired.adjoint()).eval();
    const double tr = repaired.trace().real();
    repaired /= tr;

    // Residual: L2 distance between the re-synthesised and the input grid.
    const WignerGrid back = sample(repaired, g.x, g.p);
    double sq = 0.0;
    for (int ip = 0; ip < g.p.count; ++ip) {
        const double wp = trapezoid_weight(g.p, ip);
        for (int ix = 0; ix < g.x.count; ++ix) {
            const double d = back.at(ip, ix) - g.at(ip, ix);
            sq += wp * trapezoid_weight(g.x, ix) * d * d;
        }
    }
    const double residual = std::sqrt(sq);

    if (residual > kMaxResidual) {
        std::ostringstream os;
        os << "unfaithful reconstruction: residual " << residual << " exceeds " << kMaxResidual << " at dim " << dim;
        throw ReconstructionError(os.str(), residual);
    }
    if (clipped > kMaxClippedMass) {
        std::ostringstream os;
        os << "unfaithful reconstruction: clipped negative mass " << clipped << " exceeds " << kMaxClippedMass;
        throw ReconstructionError(os.str(), residual);
    }
    return ReconstructionReport{DensityMatrix::from_matrix(repaired), dim, tail, clipped, residual};
}

ReconstructionReport reconstruct_auto(const WignerGrid& g, int dim) {
    int d = std::clamp(dim, 1, kMaxWignerDim);
    for (;;) {
        ReconstructionReport r = reconstruct(g, d);
        if (r.tail < kMaxWignerTail || d == kMaxWignerDim) return r;
        d = std::min(kMaxWignerDim, 2 * d);
    }
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix sqrt_rho = es.eigenvectors() * root.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    Matrix inner = sqrt_rho * sigma.matrix() * sqrt_rho;
    inner = 0.5 * (inner + inner.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es2(inner);
    const double t = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::min(1.0, t * t);
}

QuadratureOptimum quadrature_qfi(const DensityMatrix& rho) {
    const FockOperators ops = fock_operators(rho.dim(), 0.5, 1.0);
    return qfi_max_quadrature(rho, ops.x, ops.p);
}

GridFisher qfi_from_grid(const WignerGrid& g, int dim) {
    ReconstructionReport r = reconstruct_auto(g, dim);
    const QuadratureOptimum q = quadrature_qfi(r.rho);
    return GridFisher{q.theta, q.fisher.value, std::move(r)};
}

}  // namespace macrosize
