#pragma once

// Dense finite-dimensional operator algebra, Fock-space builders and the
// reference states used throughout the library.

#include <complex>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace macrosize {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Largest dimension any dense operator may take.
inline constexpr int kMaxDim = 4096;

// Absolute Hermiticity tolerance, scaled by max(1, |H|_max).
inline constexpr double kHermitianTol = 1e-12;

/// Largest |H_ij - conj(H_ji)|.
double max_asymmetry(const Matrix& m);

/// Square complex matrix acting on a dim-dimensional Hilbert space.
class Operator {
public:
    Operator() = default;
    explicit Operator(Matrix m);

    static Operator identity(int dim);
    static Operator diagonal(std::span<const double> entries);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

    bool is_hermitian() const;
    /// Throws DomainError reporting the asymmetry if not Hermitian.
    void require_hermitian(const char* what) const;

    Operator adjoint() const { return Operator(m_.adjoint()); }

    friend Operator operator+(const Operator& a, const Operator& b);
    friend Operator operator-(const Operator& a, const Operator& b);
    friend Operator operator*(const Operator& a, const Operator& b);
    friend Operator operator*(cplx s, const Operator& a);
    friend Operator operator*(double s, const Operator& a) { return cplx(s, 0.0) * a; }

private:
    Matrix m_;
};

/// Hermitian, positive semidefinite, unit-trace operator.
class DensityMatrix {
public:
    /// Validates the invariants: Hermitian, trace 1 +- 1e-10, min eigenvalue >= -1e-10.
    static DensityMatrix from_matrix(Matrix m);
    /// |psi><psi| / <psi|psi>.
    static DensityMatrix pure(const Vector& psi);
    /// sum_k w_k |v_k><v_k| for an orthonormal set; weights must be a distribution.
    static DensityMatrix from_spectrum(std::span<const double> weights, const Matrix& vectors);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }

    double purity() const;
    double expectation(const Operator& a) const;

    /// U rho U^dagger; U must be unitary.
    DensityMatrix conjugated(const Operator& unitary) const;

private:
    explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
    friend DensityMatrix mix(double, const DensityMatrix&, const DensityMatrix&);
    friend DensityMatrix tensor(const DensityMatrix&, const DensityMatrix&);
    Matrix m_;
};

/// Eigenpairs sorted by descending eigenvalue. Each eigenvector's first
/// component above 1e-12 in magnitude is made real and positive.
struct Spectrum {
    RealVector eigenvalues;
    Matrix eigenvectors;  // columns
    double residual = 0.0;  // |sum_k l_k v_k v_k^dag - H|_max
};

Spectrum eigh(const Operator& h);
Spectrum eigh(const DensityMatrix& rho);

/// Ladder and quadrature operators on the truncated Fock space {|0>..|dim-1>}.
/// x = sqrt(nu)(a + a^dag), p = (hbar / 2 sqrt(nu)) i (a^dag - a), so the
/// vacuum has Var(x) = nu and Var(p) = hbar^2 / (4 nu).
struct FockOperators {
    Operator annihilate;
    Operator x;
    Operator p;
    double nu;
    double hbar;
};

FockOperators fock_operators(int dim, double nu, double hbar = 1.0);

// Reference oscillator states.
struct Vacuum {};
struct NumberState { int n; };
struct Coherent { cplx alpha; };
struct Cat { cplx alpha; };      // normalised |alpha> + |-alpha>
struct Thermal { double nbar; };
struct Squeezed { double r; };   // x-quadrature squeezed vacuum

using StateSpec = std::variant<Vacuum, NumberState, Coherent, Cat, Thermal, Squeezed>;

// Population lost by truncating to dim levels.
inline constexpr double kMaxTailWeight = 1e-8;

/// Weight of the state outside {|0>..|dim-1>}.
double tail_weight(const StateSpec& spec, int dim);
/// Smallest dim <= kMaxDim with tail_weight < kMaxTailWeight.
int suggested_dim(const StateSpec& spec);
/// Throws TruncationError (with suggested dim) if the tail is >= 1e-8.
DensityMatrix make_state(const StateSpec& spec, int dim);

Operator tensor(const Operator& a, const Operator& b);
Operator tensor(std::initializer_list<Operator> ops);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
DensityMatrix tensor(std::initializer_list<DensityMatrix> states);

/// p rho + (1 - p) sigma.
DensityMatrix mix(double p, const DensityMatrix& rho, const DensityMatrix& sigma);

/// `local` acting on factor `site` of a product space with the given factor dims.
Operator embed(const Operator& local, int site, std::span<const int> dims);

/// Pauli-z with |0> having eigenvalue +1.
Operator pauli_z();
Operator pauli_x();

/// An extensive observable A = sum_i A_i over a partition of the subsystems.
struct PartitionedObservable {
    Operator total;
    std::vector<Operator> locals;
    std::string partition_label;

    /// Sums the locals into `total`; all locals must share one dimension.
    static PartitionedObservable from_locals(std::vector<Operator> locals, std::string label);
    /// sum_i of `local` embedded at each site of `sites` equal factors.
    static PartitionedObservable collective(const Operator& local, int sites, std::string label);
};

// Dense qubit-register size cap: 2^12 = kMaxDim.
inline constexpr int kMaxGhzQubits = 12;

struct GhzSystem {
    DensityMatrix state;
    PartitionedObservable observable;  // sum_i sigma_z^(i)
};

/// sqrt(1-q)|0..0> + sqrt(q) e^{i phi}|1..1> on n qubits.
GhzSystem ghz_state(int n, double q, double phi = 0.0);

}  // namespace macrosize
