#include "macrosize/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "macrosize/error.hpp"

namespace macrosize {

namespace {

void require_compatible(const DensityMatrix& rho, const Operator& a, const char* what) {
    if (rho.dim() != a.dim()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (state " << rho.dim() << ", observable " << a.dim() << ")";
        throw DimensionError(os.str());
    }
    a.require_hermitian(what);
}

// Pairwise weights w_ij = 2 (l_i - l_j)^2 / (l_i + l_j) in the eigenbasis of rho,
// so that F(A) = sum_ij w_ij |A'_ij|^2 with A' = V^dag A V.
struct SpectralKernel {
    Matrix basis;
    Eigen::MatrixXd weights;
    int discarded_pairs = 0;
    double discarded_mass = 0.0;
    double residual = 0.0;
};

SpectralKernel spectral_kernel(const DensityMatrix& rho) {
    const Spectrum s = eigh(rho);
    const int n = rho.dim();
    SpectralKernel k;
    k.basis = s.eigenvectors;
    k.residual = s.residual;
    k.weights = Eigen::MatrixXd::Zero(n, n);
    const double lmax = std::max(s.eigenvalues.maxCoeff(), 0.0);
    const double cutoff = kPairCutoff * lmax;
    for (int i = 0; i < n; ++i) {
        if (s.eigenvalues(i) <= cutoff) k.discarded_mass += std::max(s.eigenvalues(i), 0.0);
    }
    for (int i = 0; i < n; ++i) {
        const double li = std::max(s.eigenvalues(i), 0.0);
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double lj = std::max(s.eigenvalues(j), 0.0);
            const double sum = li + lj;
            if (sum <= cutoff) {
                if (i < j) ++k.discarded_pairs;
                continue;
            }
            k.weights(i, j) = 2.0 * (li - lj) * (li - lj) / sum;
        }
    }
    return k;
}

double kernel_value(const SpectralKernel& k, const Matrix& a_eig) {
    return (k.weights.array() * a_eig.cwiseAbs2().array()).sum();
}

}  // namespace

const char* to_string(FisherMethod m) {
    switch (m) {
        case FisherMethod::spectral: return "spectral";
        case FisherMethod::pure_variance: return "pure-variance";
        case FisherMethod::closed_form: return "closed-form";
        case FisherMethod::classical: return "classical";
        case FisherMethod::sub_qfi: return "sub-qfi";
    }
    return "unknown";
}

double variance(const DensityMatrix& rho, const Operator& a) {
    require_compatible(rho, a, "variance");
    const double mean = rho.expectation(a);
    const Operator a2 = a * a;
    return std::max(0.0, rho.expectation(a2) - mean * mean);
}

double covariance(const DensityMatrix& rho, const Operator& a, const Operator& b) {
    require_compatible(rho, a, "covariance");
    require_compatible(rho, b, "covariance");
    const Operator anti = a * b + b * a;
    return 0.5 * rho.expectation(anti) - rho.expectation(a) * rho.expectation(b);
}

FisherResult qfi(const DensityMatrix& rho, const Operator& a) {
    require_compatible(rho, a, "qfi");
    FisherResult r;
    if (rho.purity() > 1.0 - kPureThreshold) {
        r.value = 4.0 * variance(rho, a);
        r.method = FisherMethod::pure_variance;
        return r;
    }
    const SpectralKernel k = spectral_kernel(rho);
    const Matrix a_eig = k.basis.adjoint() * a.matrix() * k.basis;
    r.value = std::max(0.0, kernel_value(k, a_eig));
    r.method = FisherMethod::spectral;
    r.diagnostics["discarded_pairs"] = k.discarded_pairs;
    r.diagnostics["discarded_mass"] = k.discarded_mass;
    r.diagnostics["eigen_residual"] = k.residual;
    return r;
}

FisherResult sub_qfi_f2(const DensityMatrix& rho, const Operator& a) {
    require_compatible(rho, a, "sub_qfi_f2");
    // [rho, A] is anti-Hermitian, so -tr([rho,A]^2) = |[rho,A]|_F^2.
    const Matrix c = rho.matrix() * a.matrix() - a.matrix() * rho.matrix();
    FisherResult r;
    r.value = 2.0 * c.cwiseAbs2().sum();
    r.method = FisherMethod::sub_qfi;
    return r;
}

FisherResult classical_fi_grid(std::span<const double> density, double step) {
    if (!(step > 0.0)) throw DomainError("classical_fi_grid: grid step must be positive");
    if (density.size() < 3) throw DomainError("classical_fi_grid: need at least 3 samples");
    double total = 0.0;
    double peak = 0.0;
    for (double v : density) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("classical_fi_grid: density must be finite and non-negative");
        }
        total += v;
        peak = std::max(peak, v);
    }
    total *= step;
    if (std::abs(total - 1.0) > 1e-6) {
        std::ostringstream os;
        os << "classical_fi_grid: density integrates to " << total << ", not 1 +- 1e-6";
        throw DomainError(os.str());
    }
    const double floor = kDensityFloor * peak;
    double sum = 0.0;
    int floored = 0;
    for (std::size_t i = 1; i + 1 < density.size(); ++i) {
        if (density[i] < floor) {
            ++floored;
            continue;
        }
        const double d = (density[i + 1] - density[i - 1]) / (2.0 * step);
        sum += d * d / density[i];
    }
    FisherResult r;
    r.value = sum * step;
    r.method = FisherMethod::classical;
    r.diagnostics["floored_cells"] = floored;
    return r;
}

FisherResult classical_fi_discrete(std::span<const double> prob, std::span<const double> dprob) {
    if (prob.size() != dprob.size()) {
        throw DimensionError("classical_fi_discrete: probability and derivative lengths differ");
    }
    double peak = 0.0;
    for (double v : prob) peak = std::max(peak, v);
    const double floor = kDensityFloor * peak;
    double sum = 0.0;
    int floored = 0;
    for (std::size_t k = 0; k < prob.size(); ++k) {
        if (prob[k] < floor || prob[k] <= 0.0) {
            ++floored;
            continue;
        }
        sum += dprob[k] * dprob[k] / prob[k];
    }
    FisherResult r;
    r.value = sum;
    r.method = FisherMethod::classical;
    r.diagnostics["floored_cells"] = floored;
    return r;
}

double binary_trial_fi(double prob, double dprob) {
    if (!(prob > 0.0 && prob < 1.0)) {
        throw DomainError("binary_trial_fi: probability must lie strictly inside (0, 1)");
    }
    return dprob * dprob / (prob * (1.0 - prob));
}

Operator quadrature(const Operator& x, const Operator& p, double theta) {
    return std::cos(theta) * x + std::sin(theta) * p;
}

QuadratureOptimum qfi_max_quadrature(const DensityMatrix& rho, const Operator& x, const Operator& p,
                                     int angle_count) {
    if (angle_count < 8) throw DomainError("qfi_max_quadrature: angle_count must be >= 8");
    require_compatible(rho, x, "qfi_max_quadrature");
    require_compatible(rho, p, "qfi_max_quadrature");

    // F(theta) is a quadratic form in (cos, sin); evaluate it through the
    // eigenbasis of rho once.
    const bool pure = rho.purity() > 1.0 - kPureThreshold;
    SpectralKernel k;
    Matrix x_eig;
    Matrix p_eig;
    if (!pure) {
        k = spectral_kernel(rho);
        x_eig = k.basis.adjoint() * x.matrix() * k.basis;
        p_eig = k.basis.adjoint() * p.matrix() * k.basis;
    }
    const double vxx = pure ? variance(rho, x) : 0.0;
    const double vpp = pure ? variance(rho, p) : 0.0;
    const double cxp = pure ? covariance(rho, x, p) : 0.0;

    auto fisher_at = [&](double t) {
        const double c = std::cos(t);
        const double s = std::sin(t);
        if (pure) return 4.0 * (c * c * vxx + s * s * vpp + 2.0 * c * s * cxp);
        return std::max(0.0, kernel_value(k, c * x_eig + s * p_eig));
    };

    QuadratureOptimum out;
    out.scan.resize(static_cast<std::size_t>(angle_count));
    const double dt = std::numbers::pi / angle_count;
    int best = 0;
    for (int i = 0; i < angle_count; ++i) {
        out.scan[static_cast<std::size_t>(i)] = fisher_at(i * dt);
        if (out.scan[static_cast<std::size_t>(i)] > out.scan[static_cast<std::size_t>(best)]) best = i;
    }

    // Golden-section on the bracket around the best scanned angle (F is pi-periodic).
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = (best - 1) * dt;
    double hi = (best + 1) * dt;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = fisher_at(c);
    double fd = fisher_at(d);
    while (hi - lo > 1e-4) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = fisher_at(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = fisher_at(d);
        }
    }
    double theta = 0.5 * (lo + hi);
    double value = fisher_at(theta);
    if (value < out.scan[static_cast<std::size_t>(best)]) {
        theta = best * dt;
        value = out.scan[static_cast<std::size_t>(best)];
    }
    theta = std::fmod(theta, std::numbers::pi);
    if (theta < 0.0) theta += std::numbers::pi;

    out.theta = theta;
    out.fisher.value = value;
    out.fisher.method = pure ? FisherMethod::pure_variance : FisherMethod::spectral;
    out.fisher.diagnostics["angle_count"] = angle_count;
    if (!pure) out.fisher.diagnostics["discarded_pairs"] = k.discarded_pairs;
    return out;
}

}  // namespace macrosize
