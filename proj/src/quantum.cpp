#include "macrosize/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "macrosize/error.hpp"

namespace macrosize {

namespace {

void require_dim(Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (rows != cols) {
        std::ostringstream os;
        os << what << ": operator must be square, got " << rows << "x" << cols;
        throw DimensionError(os.str());
    }
    if (rows < 1 || rows > kMaxDim) {
        std::ostringstream os;
        os << what << ": dimension " << rows << " outside [1, " << kMaxDim << "]";
        throw DimensionError(os.str());
    }
}

double scaled_hermitian_tol(const Matrix& m) {
    return kHermitianTol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

Spectrum decompose(const Matrix& h) {
    const int n = static_cast<int>(h.rows());
    // Symmetrise so round-off asymmetry does not leak into the solver.
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "eigh: solver did not converge (dim " << n << ", iteration cap "
           << 30 * n << ")";
        throw NumericalError(os.str());
    }
    Spectrum s;
    s.eigenvalues.resize(n);
    s.eigenvectors.resize(n, n);
    // Eigen returns ascending order.
    for (int k = 0; k < n; ++k) {
        s.eigenvalues(k) = solver.eigenvalues()(n - 1 - k);
        Vector v = solver.eigenvectors().col(n - 1 - k);
        for (int i = 0; i < n; ++i) {
            if (std::abs(v(i)) > 1e-12) {
                v *= std::conj(v(i)) / std::abs(v(i));
                v(i) = cplx(v(i).real(), 0.0);
                break;
            }
        }
        s.eigenvectors.col(k) = v;
    }
    const Matrix rebuilt = s.eigenvectors * s.eigenvalues.cast<cplx>().asDiagonal() *
                           s.eigenvectors.adjoint();
    s.residual = (rebuilt - h).cwiseAbs().maxCoeff();
    return s;
}

}  // namespace

double max_asymmetry(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Operator::Operator(Matrix m) : m_(std::move(m)) {
    require_dim(m_.rows(), m_.cols(), "Operator");
}

Operator Operator::identity(int dim) {
    require_dim(dim, dim, "Operator::identity");
    return Operator(Matrix::Identity(dim, dim));
}

Operator Operator::diagonal(std::span<const double> entries) {
    const auto n = static_cast<Eigen::Index>(entries.size());
    require_dim(n, n, "Operator::diagonal");
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return Operator(std::move(m));
}

bool Operator::is_hermitian() const {
    return max_asymmetry(m_) <= scaled_hermitian_tol(m_);
}

void Operator::require_hermitian(const char* what) const {
    const double asym = max_asymmetry(m_);
    if (asym > scaled_hermitian_tol(m_)) {
        std::ostringstream os;
        os << what << ": operator is not Hermitian (max asymmetry " << asym << ")";
        throw DomainError(os.str());
    }
}

namespace {
void require_same_dim(const Operator& a, const Operator& b, const char* what) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << what << ": dimension mismatch " << a.dim() << " vs " << b.dim();
        throw DimensionError(os.str());
    }
}
}  // namespace

Operator operator+(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator+");
    return Operator(a.m_ + b.m_);
}

Operator operator-(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator-");
    return Operator(a.m_ - b.m_);
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_dim(a, b, "operator*");
    return Operator(a.m_ * b.m_);
}

Operator operator*(cplx s, const Operator& a) { return Operator(s * a.m_); }

DensityMatrix DensityMatrix::from_matrix(Matrix m) {
    require_dim(m.rows(), m.cols(), "DensityMatrix");
    const double asym = max_asymmetry(m);
    if (asym > scaled_hermitian_tol(m)) {
        std::ostringstream os;
        os << "DensityMatrix: not Hermitian (max asymmetry " << asym << ")";
        throw DomainError(os.str());
    }
    const double tr = m.trace().real();
    if (std::abs(tr - 1.0) > 1e-10) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << tr << " differs from 1 by more than 1e-10";
        throw DomainError(os.str());
    }
    const Matrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -1e-10) {
        std::ostringstream os;
        os << "DensityMatrix: minimum eigenvalue " << min_eig << " below -1e-10";
        throw DomainError(os.str());
    }
    return DensityMatrix(sym);
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    require_dim(psi.size(), psi.size(), "DensityMatrix::pure");
    const double norm = psi.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw DomainError("DensityMatrix::pure: state vector has zero or non-finite norm");
    }
    const Vector v = psi / norm;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::from_spectrum(std::span<const double> weights, const Matrix& vectors) {
    if (static_cast<Eigen::Index>(weights.size()) != vectors.cols()) {
        throw DimensionError("DensityMatrix::from_spectrum: weight count differs from vector count");
    }
    require_dim(vectors.rows(), vectors.rows(), "DensityMatrix::from_spectrum");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw DomainError("DensityMatrix::from_spectrum: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw DomainError("DensityMatrix::from_spectrum: weights do not sum to 1");
    }
    Matrix m = Matrix::Zero(vectors.rows(), vectors.rows());
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const Vector v = vectors.col(static_cast<Eigen::Index>(k));
        m += weights[k] * (v * v.adjoint());
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    require_dim(dim, dim, "DensityMatrix::maximally_mixed");
    return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const {
    // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return m_.cwiseAbs2().sum();
}

double DensityMatrix::expectation(const Operator& a) const {
    if (a.dim() != dim()) {
        std::ostringstream os;
        os << "expectation: dimension mismatch " << dim() << " vs " << a.dim();
        throw DimensionError(os.str());
    }
    // tr(rho A) without forming the product.
    return (m_.transpose().cwiseProduct(a.matrix())).sum().real();
}

DensityMatrix DensityMatrix::conjugated(const Operator& unitary) const {
    if (unitary.dim() != dim()) throw DimensionError("conjugated: dimension mismatch");
    const Matrix& u = unitary.matrix();
    const double defect = (u * u.adjoint() - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    if (defect > 1e-10) {
        std::ostringstream os;
        os << "conjugated: operator is not unitary (defect " << defect << ")";
        throw DomainError(os.str());
    }
    Matrix m = u * m_ * u.adjoint();
    return DensityMatrix(0.5 * (m + m.adjoint()));
}

Spectrum eigh(const Operator& h) {
    h.require_hermitian("eigh");
    return decompose(h.matrix());
}

Spectrum eigh(const DensityMatrix& rho) { return decompose(rho.matrix()); }

FockOperators fock_operators(int dim, double nu, double hbar) {
    if (dim < 2) throw DimensionError("fock_operators: dim must be >= 2");
    if (dim > kMaxDim) throw DimensionError("fock_operators: dim exceeds cap");
    if (!(nu > 0.0)) throw DomainError("fock_operators: nu must be positive");
    if (!(hbar > 0.0)) throw DomainError("fock_operators: hbar must be positive");
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Matrix ad = a.adjoint();
    const double sq = std::sqrt(nu);
    Matrix x = sq * (a + ad);
    Matrix p = cplx(0.0, hbar / (2.0 * sq)) * (ad - a);
    return FockOperators{Operator(a), Operator(std::move(x)), Operator(std::move(p)), nu, hbar};
}

namespace {

// Amplitudes c_0..c_{dim-1} of a pure reference state together with the
// norm^2 the untruncated state has (1 for normalised families).
Vector coherent_amplitudes(cplx alpha, int dim) {
    Vector c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return c;
}

Vector cat_amplitudes(cplx alpha, int dim) {
    Vector c = coherent_amplitudes(alpha, dim);
    const double norm2 = 2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha)));
    const double scale = 2.0 / std::sqrt(norm2);
    for (int n = 0; n < dim; ++n) c(n) = (n % 2 == 0) ? c(n) * scale : cplx(0.0);
    return c;
}

Vector squeezed_amplitudes(double r, int dim) {
    Vector c = Vector::Zero(dim);
    const double t = -std::tanh(r);
    c(0) = 1.0 / std::sqrt(std::cosh(r));
    for (int n = 2; n < dim; n += 2) {
        c(n) = c(n - 2) * t * std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return c;
}

double thermal_ratio(double nbar) { return nbar / (nbar + 1.0); }

void check_spec(const StateSpec& spec) {
    if (const auto* s = std::get_if<NumberState>(&spec); s && s->n < 0) {
        throw DomainError("make_state: number state index must be >= 0");
    }
    if (const auto* s = std::get_if<Thermal>(&spec); s && !(s->nbar >= 0.0 && std::isfinite(s->nbar))) {
        throw DomainError("make_state: thermal occupation must be finite and >= 0");
    }
    if (const auto* s = std::get_if<Squeezed>(&spec); s && !std::isfinite(s->r)) {
        throw DomainError("make_state: squeezing parameter must be finite");
    }
}

double pure_tail(const Vector& c) { return std::max(0.0, 1.0 - c.squaredNorm()); }

}  // namespace

double tail_weight(const StateSpec& spec, int dim) {
    check_spec(spec);
    if (dim < 1) throw DimensionError("tail_weight: dim must be >= 1");
    return std::visit(
        [dim](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Vacuum>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NumberState>) {
                return s.n < dim ? 0.0 : 1.0;
            } else if constexpr (std::is_same_v<T, Coherent>) {
                return pure_tail(coherent_amplitudes(s.alpha, dim));
            } else if constexpr (std::is_same_v<T, Cat>) {
                return pure_tail(cat_amplitudes(s.alpha, dim));
            } else if constexpr (std::is_same_v<T, Thermal>) {
                return std::pow(thermal_ratio(s.nbar), dim);
            } else {
                return pure_tail(squeezed_amplitudes(s.r, dim));
            }
        },
        spec);
}

int suggested_dim(const StateSpec& spec) {
    for (int d = 2; d <= kMaxDim; d = d < 64 ? d + 1 : d + d / 8) {
        if (tail_weight(spec, d) < kMaxTailWeight) return d;
    }
    return kMaxDim;
}

DensityMatrix make_state(const StateSpec& spec, int dim) {
    if (dim < 2 || dim > kMaxDim) throw DimensionError("make_state: dim outside [2, 4096]");
    const double tail = tail_weight(spec, dim);
    if (tail >= kMaxTailWeight) {
        const int hint = suggested_dim(spec);
        std::ostringstream os;
        os << "make_state: truncation to dim " << dim << " loses weight " << tail
           << " (limit 1e-8); try dim " << hint;
        throw TruncationError(os.str(), tail, hint);
    }
    return std::visit(
        [dim](const auto& s) -> DensityMatrix {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Thermal>) {
                const double p = thermal_ratio(s.nbar);
                std::vector<double> diag(static_cast<std::size_t>(dim));
                double total = 0.0;
                for (int n = 0; n < dim; ++n) {
                    diag[static_cast<std::size_t>(n)] = (1.0 - p) * std::pow(p, n);
                    total += diag[static_cast<std::size_t>(n)];
                }
                for (double& w : diag) w /= total;
                return DensityMatrix::from_spectrum(diag, Matrix::Identity(dim, dim));
            } else {
                Vector c = Vector::Zero(dim);
                if constexpr (std::is_same_v<T, Vacuum>) {
                    c(0) = 1.0;
                } else if constexpr (std::is_same_v<T, NumberState>) {
                    c(s.n) = 1.0;
                } else if constexpr (std::is_same_v<T, Coherent>) {
                    c = coherent_amplitudes(s.alpha, dim);
                } else if constexpr (std::is_same_v<T, Cat>) {
                    c = cat_amplitudes(s.alpha, dim);
                } else {
                    c = squeezed_amplitudes(s.r, dim);
                }
                return DensityMatrix::pure(c);
            }
        },
        spec);
}

Operator tensor(const Operator& a, const Operator& b) {
    const long long d = static_cast<long long>(a.dim()) * b.dim();
    if (d > kMaxDim) {
        std::ostringstream os;
        os << "tensor: product dimension " << d << " exceeds cap " << kMaxDim;
        throw DimensionError(os.str());
    }
    const int da = a.dim();
    const int db = b.dim();
    Matrix m(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j) m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    return Operator(std::move(m));
}

Operator tensor(std::initializer_list<Operator> ops) {
    if (ops.size() == 0) throw DimensionError("tensor: empty operand list");
    auto it = ops.begin();
    Operator out = *it++;
    for (; it != ops.end(); ++it) out = tensor(out, *it);
    return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
    Operator prod = tensor(Operator(a.matrix()), Operator(b.matrix()));
    return DensityMatrix(prod.matrix());
}

DensityMatrix tensor(std::initializer_list<DensityMatrix> states) {
    if (states.size() == 0) throw DimensionError("tensor: empty operand list");
    auto it = states.begin();
    DensityMatrix out = *it++;
    for (; it != states.end(); ++it) out = tensor(out, *it);
    return out;
}

DensityMatrix mix(double p, const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("mix: weight must lie in [0, 1]");
    if (rho.dim() != sigma.dim()) throw DimensionError("mix: dimension mismatch");
    return DensityMatrix(p * rho.matrix() + (1.0 - p) * sigma.matrix());
}

Operator embed(const Operator& local, int site, std::span<const int> dims) {
    if (site < 0 || site >= static_cast<int>(dims.size())) {
        throw DimensionError("embed: site index out of range");
    }
    if (dims[static_cast<std::size_t>(site)] != local.dim()) {
        throw DimensionError("embed: local operator dimension differs from factor dimension");
    }
    long long total = 1;
    for (int d : dims) {
        if (d < 1) throw DimensionError("embed: factor dimensions must be positive");
        total *= d;
        if (total > kMaxDim) throw DimensionError("embed: product dimension exceeds cap");
    }
    Operator out = site == 0 ? local : Operator::identity(dims[0]);
    for (int k = 1; k < static_cast<int>(dims.size()); ++k) {
        out = tensor(out, k == site ? local : Operator::identity(dims[static_cast<std::size_t>(k)]));
    }
    return out;
}

Operator pauli_z() {
    const double d[] = {1.0, -1.0};
    return Operator::diagonal(d);
}

Operator pauli_x() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = 1.0;
    return Operator(std::move(m));
}

PartitionedObservable PartitionedObservable::from_locals(std::vector<Operator> locals, std::string label) {
    if (locals.empty()) throw DomainError("PartitionedObservable: needs at least one local term");
    Matrix total = Matrix::Zero(locals.front().dim(), locals.front().dim());
    for (const auto& a : locals) {
        if (a.dim() != locals.front().dim()) {
            throw DimensionError("PartitionedObservable: local terms differ in dimension");
        }
        a.require_hermitian("PartitionedObservable");
        total += a.matrix();
    }
    return PartitionedObservable{Operator(std::move(total)), std::move(locals), std::move(label)};
}

PartitionedObservable PartitionedObservable::collective(const Operator& local, int sites, std::string label) {
    if (sites < 1) throw DomainError("PartitionedObservable::collective: needs at least one site");
    std::vector<int> dims(static_cast<std::size_t>(sites), local.dim());
    std::vector<Operator> locals;
    locals.reserve(dims.size());
    for (int s = 0; s < sites; ++s) locals.push_back(embed(local, s, dims));
    return from_locals(std::move(locals), std::move(label));
}

GhzSystem ghz_state(int n, double q, double phi) {
    if (n < 1) throw DomainError("ghz_state: need at least one qubit");
    if (n > kMaxGhzQubits) {
        const double bytes = 16.0 * std::pow(4.0, n) * (n + 1);
        std::ostringstream os;
        os << "ghz_state: " << n << " qubits exceed the dense cap of " << kMaxGhzQubits
           << " (would need about " << bytes / 1e9 << " GB)";
        throw DimensionError(os.str());
    }
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("ghz_state: weight q must lie in [0, 1]");
    const int dim = 1 << n;
    Vector psi = Vector::Zero(dim);
    psi(0) = std::sqrt(1.0 - q);
    psi(dim - 1) += std::sqrt(q) * std::polar(1.0, phi);
    return GhzSystem{DensityMatrix::pure(psi),
                     PartitionedObservable::collective(pauli_z(), n, "qubits")};
}

}  // namespace macrosize
