#include "macrosize/measures.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "macrosize/error.hpp"
#include "macrosize/fisher.hpp"

namespace macrosize {

const PhysicalConstants& constants() {
    static const PhysicalConstants c{
        1.660539067e-27,  // m_u
        5.291772109e-11,  // a0
        1.054571818e-34,  // hbar
        1.380649000e-23,  // k_B
        9.109383702e-31,  // m_e
        1.602176634e-19,  // e
    };
    return c;
}

double extensive_size(double fisher, double unit) {
    if (!(unit > 0.0)) throw DomainError("extensive_size: unit must be positive");
    if (!(fisher >= 0.0)) throw DomainError("extensive_size: Fisher information must be >= 0");
    return fisher / (4.0 * unit * unit);
}

EntangledSize entangled_size(const DensityMatrix& rho, const PartitionedObservable& a) {
    if (a.locals.empty()) throw DomainError("entangled_size: partition has no local terms");
    double denom = 0.0;
    for (const auto& local : a.locals) denom += variance(rho, local);
    const double f = qfi(rho, a.total).value;
    const double scale = std::max(1.0, f);
    if (!(denom > 1e-14 * scale)) {
        std::ostringstream os;
        os << "entangled_size: incoherent-local state, sum of local variances is " << denom;
        throw DomainError(os.str());
    }
    return EntangledSize{f / (4.0 * denom), f, denom, static_cast<int>(a.locals.size())};
}

double entangled_size(double fisher, std::span<const double> local_variances) {
    if (local_variances.empty()) throw DomainError("entangled_size: partition has no local terms");
    if (!(fisher >= 0.0)) throw DomainError("entangled_size: Fisher information must be >= 0");
    double denom = 0.0;
    for (double v : local_variances) {
        if (!(v >= 0.0)) throw DomainError("entangled_size: local variances must be >= 0");
        denom += v;
    }
    if (!(denom > 0.0)) throw DomainError("entangled_size: incoherent-local state, zero local variance sum");
    return fisher / (4.0 * denom);
}

double entangled_size(double fisher, double local_variance, double parts) {
    if (!(parts >= 1.0)) throw DomainError("entangled_size: need at least one part");
    if (!(fisher >= 0.0)) throw DomainError("entangled_size: Fisher information must be >= 0");
    if (!(local_variance > 0.0)) {
        throw DomainError("entangled_size: incoherent-local state, zero local variance");
    }
    return fisher / (4.0 * local_variance * parts);
}

int witness_depth(double n_ent) {
    if (!(n_ent >= 0.0)) throw DomainError("witness_depth: entangled size must be >= 0");
    // Absorb round-off so that an exact integer like 5 - 1e-15 still reads as 5.
    const double snapped = std::abs(n_ent - std::round(n_ent)) < 1e-9 ? std::round(n_ent) : n_ent;
    return static_cast<int>(std::ceil(snapped));
}

double two_branch_entangled_size(double count, double ratio) {
    if (!(count >= 1.0)) throw DomainError("two_branch_entangled_size: count must be >= 1");
    if (!(ratio >= 0.0)) throw DomainError("two_branch_entangled_size: ratio must be >= 0");
    if (std::isinf(ratio)) return count;
    const double r2 = ratio * ratio;
    return count * r2 / (1.0 + r2);
}

double rotated_unit(double t) {
    if (!(t >= 0.0)) throw DomainError("rotated_unit: t must be >= 0");
    return std::hypot(constants().position_unit(), t * constants().momentum_unit());
}

}  // namespace macrosize
