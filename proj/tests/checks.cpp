#include "checks.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/QR>

#include "macrosize/fisher.hpp"
#include "macrosize/measures.hpp"

namespace checks {

using namespace macrosize;

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
double Rng::normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
int Rng::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

Matrix ginibre(int rows, int cols, Rng& rng) {
    Matrix g(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
    }
    return g;
}

DensityMatrix random_state(int dim, int rank, Rng& rng) {
    const Matrix g = ginibre(dim, rank, rng);
    Matrix m = g * g.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    m /= m.trace().real();
    return DensityMatrix::from_matrix(m);
}

Operator random_hermitian(int dim, Rng& rng) {
    const Matrix g = ginibre(dim, dim, rng);
    Matrix h = 0.5 * (g + g.adjoint());
    const double norm = eigh(Operator(h)).eigenvalues.cwiseAbs().maxCoeff();
    return Operator(h / norm);
}

Operator random_unitary(int dim, Rng& rng) {
    const Matrix g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    // Fix column phases so the distribution is Haar.
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const cplx d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return Operator(q);
}

namespace {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void record(Sweep& s, double violation) {
    s.worst = std::max(s.worst, violation);
    ++s.instances;
}

int random_dim(Rng& rng) { return rng.integer(2, 16); }

Operator identity(int d) { return Operator::identity(d); }

struct Register {
    DensityMatrix rho;
    PartitionedObservable a;
};

PartitionedObservable random_locals(int qubits, Rng& rng) {
    std::vector<int> dims(static_cast<std::size_t>(qubits), 2);
    std::vector<Operator> locals;
    for (int i = 0; i < qubits; ++i) locals.push_back(embed(random_hermitian(2, rng), i, dims));
    return PartitionedObservable::from_locals(std::move(locals), "qubits");
}

double size_of(const DensityMatrix& rho, const PartitionedObservable& a) { return entangled_size(rho, a).value; }

}  // namespace

Sweep qfi_convexity(int instances, std::uint64_t seed) {
    Sweep s{"convexity"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int d = random_dim(rng);
        const DensityMatrix rho = random_state(d, rng.integer(1, d), rng);
        const DensityMatrix sigma = random_state(d, rng.integer(1, d), rng);
        const Operator a = random_hermitian(d, rng);
        const double p = rng.uniform();
        const double lhs = qfi(mix(p, rho, sigma), a).value;
        const double rhs = p * qfi(rho, a).value + (1.0 - p) * qfi(sigma, a).value;
        record(s, lhs - rhs);
    }
    s.seconds = t.seconds();
    return s;
}

Sweep qfi_additivity(int instances, std::uint64_t seed) {
    Sweep s{"additivity"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int d1 = rng.integer(2, 4);
        const int d2 = rng.integer(2, 16 / d1);
        const DensityMatrix rho = random_state(d1, rng.integer(1, d1), rng);
        const DensityMatrix sigma = random_state(d2, rng.integer(1, d2), rng);
        const Operator a = random_hermitian(d1, rng);
        const Operator b = random_hermitian(d2, rng);
        const Operator total = tensor(a, identity(d2)) + tensor(identity(d1), b);
        const double joint = qfi(tensor(rho, sigma), total).value;
        const double parts = qfi(rho, a).value + qfi(sigma, b).value;
        record(s, std::abs(joint - parts) / std::max(1.0, parts));
    }
    s.seconds = t.seconds();
    return s;
}

Sweep qfi_unitary_covariance(int instances, std::uint64_t seed) {
    Sweep s{"unitary covariance"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int d = random_dim(rng);
        const DensityMatrix rho = random_state(d, rng.integer(1, d), rng);
        const Operator a = random_hermitian(d, rng);
        const Operator u = random_unitary(d, rng);
        const Operator ua(u.matrix() * a.matrix() * u.matrix().adjoint());
        const Operator ua_h(0.5 * (ua.matrix() + ua.matrix().adjoint()));
        record(s, std::abs(qfi(rho.conjugated(u), ua_h).value - qfi(rho, a).value));
    }
    s.seconds = t.seconds();
    return s;
}

Sweep qfi_sandwich(int instances, std::uint64_t seed) {
    Sweep s{"F2 <= F <= 4 Var"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int d = random_dim(rng);
        const DensityMatrix rho = random_state(d, rng.integer(1, d), rng);
        const Operator a = random_hermitian(d, rng);
        const double f = qfi(rho, a).value;
        const double f2 = sub_qfi_f2(rho, a).value;
        const double var4 = 4.0 * variance(rho, a);
        record(s, std::max(f2 - f, f - var4));
    }
    s.seconds = t.seconds();
    return s;
}

Sweep classical_below_quantum(int instances, std::uint64_t seed) {
    Sweep s{"classical FI <= QFI"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int d = random_dim(rng);
        const DensityMatrix rho = random_state(d, rng.integer(1, d), rng);
        const Operator a = random_hermitian(d, rng);
        const Matrix basis = random_unitary(d, rng).matrix();
        const Matrix drho = cplx(0.0, -1.0) * (a.matrix() * rho.matrix() - rho.matrix() * a.matrix());
        std::vector<double> p(static_cast<std::size_t>(d));
        std::vector<double> dp(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            const auto b = basis.col(k);
            p[static_cast<std::size_t>(k)] = (b.adjoint() * rho.matrix() * b)(0, 0).real();
            dp[static_cast<std::size_t>(k)] = (b.adjoint() * drho * b)(0, 0).real();
        }
        record(s, classical_fi_discrete(p, dp).value - qfi(rho, a).value);
    }
    s.seconds = t.seconds();
    return s;
}

Sweep ent_maximum(int instances, std::uint64_t seed) {
    Sweep s{"maximum size"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int n = rng.integer(2, 4);
        const int d = 1 << n;
        const DensityMatrix rho = random_state(d, rng.integer(1, d), rng);
        record(s, size_of(rho, random_locals(n, rng)) - n);
    }
    s.seconds = t.seconds();
    return s;
}

Sweep ghz_saturation(int max_qubits) {
    Sweep s{"GHZ saturation"};
    Timer t;
    for (int n = 1; n <= max_qubits; ++n) {
        const GhzSystem g = ghz_state(n, 0.5, 0.3 * n);
        record(s, std::abs(size_of(g.state, g.observable) - n));
    }
    s.seconds = t.seconds();
    return s;
}

Sweep ent_independent(int instances, std::uint64_t seed) {
    Sweep s{"independent systems"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int na = rng.integer(1, 2);
        const int nb = rng.integer(1, 2);
        const DensityMatrix ra = random_state(1 << na, rng.integer(1, 1 << na), rng);
        const DensityMatrix rb = random_state(1 << nb, rng.integer(1, 1 << nb), rng);
        std::vector<Operator> la;
        std::vector<Operator> lb;
        std::vector<Operator> joint;
        std::vector<int> da(static_cast<std::size_t>(na), 2);
        std::vector<int> db(static_cast<std::size_t>(nb), 2);
        std::vector<int> dj(static_cast<std::size_t>(na + nb), 2);
        for (int q = 0; q < na + nb; ++q) {
            const Operator h = random_hermitian(2, rng);
            joint.push_back(embed(h, q, dj));
            if (q < na) {
                la.push_back(embed(h, q, da));
            } else {
                lb.push_back(embed(h, q - na, db));
            }
        }
        const double sa = size_of(ra, PartitionedObservable::from_locals(la, "a"));
        const double sb = size_of(rb, PartitionedObservable::from_locals(lb, "b"));
        const double sj = size_of(tensor(ra, rb), PartitionedObservable::from_locals(joint, "ab"));
        record(s, sj - std::max(sa, sb));
    }
    s.seconds = t.seconds();
    return s;
}

Sweep ent_mixture(int instances, std::uint64_t seed) {
    Sweep s{"classical mixtures"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int n = rng.integer(2, 4);
        const int d = 1 << n;
        const PartitionedObservable a = random_locals(n, rng);
        // Mix GHZ-like and random states so both large and small sizes occur.
        const DensityMatrix rho = rng.uniform() < 0.5 ? ghz_state(n, rng.uniform(), rng.uniform(0.0, 6.3)).state
                                                      : random_state(d, rng.integer(1, d), rng);
        const DensityMatrix sigma = random_state(d, rng.integer(1, d), rng);
        const double p = rng.uniform();
        const double mixed = size_of(mix(p, rho, sigma), a);
        record(s, mixed - std::max(size_of(rho, a), size_of(sigma, a)));
    }
    s.seconds = t.seconds();
    return s;
}

Sweep ent_producible(int instances, std::uint64_t seed) {
    Sweep s{"k-producible bound"};
    Rng rng(seed);
    Timer t;
    for (int i = 0; i < instances; ++i) {
        const int n = rng.integer(2, 6);
        const int k = rng.integer(1, std::min(n, 3));
        const PartitionedObservable a = random_locals(n, rng);
        const int terms = rng.integer(1, 3);
        std::vector<double> w;
        std::vector<DensityMatrix> parts;
        for (int m = 0; m < terms; ++m) {
            int left = n;
            DensityMatrix acc = DensityMatrix::maximally_mixed(1);
            bool first = true;
            while (left > 0) {
                const int block = rng.integer(1, std::min(k, left));
                const DensityMatrix b = rng.uniform() < 0.7 ? ghz_state(block, rng.uniform(), rng.uniform(0.0, 6.3)).state
                                                            : random_state(1 << block, 1, rng);
                acc = first ? b : tensor(acc, b);
                first = false;
                left -= block;
            }
            parts.push_back(acc);
            w.push_back(rng.uniform(0.1, 1.0));
        }
        DensityMatrix rho = parts[0];
        double wsum = w[0];
        for (std::size_t m = 1; m < parts.size(); ++m) {
            wsum += w[m];
            rho = mix(w[m] / wsum, parts[m], rho);
        }
        record(s, size_of(rho, a) - k);
    }
    s.seconds = t.seconds();
    return s;
}

double qutrit_mixed_pair_size(int n, double u, double p) {
    // Basis |+>, |0>, |-> with local observable diag(1, 0, -1).
    const int dim = static_cast<int>(std::lround(std::pow(3.0, n)));
    auto uniform_index = [&](int level) {
        int idx = 0;
        for (int i = 0; i < n; ++i) idx = idx * 3 + level;
        return idx;
    };
    macrosize::Vector psi0 = macrosize::Vector::Zero(dim);
    macrosize::Vector psi1 = macrosize::Vector::Zero(dim);
    psi0(uniform_index(0)) = std::sqrt(u / 2.0);
    psi0(uniform_index(2)) = std::sqrt(u / 2.0);
    psi0(uniform_index(1)) = std::sqrt(1.0 - u);
    psi1(uniform_index(0)) = std::sqrt((1.0 - u) / 2.0);
    psi1(uniform_index(2)) = std::sqrt((1.0 - u) / 2.0);
    psi1(uniform_index(1)) = -std::sqrt(u);
    const DensityMatrix rho = mix(p, DensityMatrix::pure(psi0), DensityMatrix::pure(psi1));
    const double diag[] = {1.0, 0.0, -1.0};
    const Operator local = Operator::diagonal(diag);
    return entangled_size(rho, PartitionedObservable::collective(local, n, "qutrits")).value;
}

}  // namespace checks
