#include "attrlab/basis.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "attrlab/errors.hpp"

namespace attrlab {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

struct BasisKey {
    std::uint32_t kind;
    int trunc;
    double length;
    auto operator<=>(const BasisKey&) const = default;
};

BasisKey key_of(const BasisId& b) {
    return BasisKey{static_cast<std::uint32_t>(b.kind), b.trunc, b.length};
}
}  // namespace

std::string to_string(const BasisId& b) {
    std::ostringstream os;
    os << (b.kind == BasisKind::nse2d ? "nse2d(K=" : "rds_sine(M=") << b.trunc
       << ", len=" << b.length << ")";
    return os.str();
}

std::size_t basis_group_size(const BasisId& b) {
    return b.kind == BasisKind::nse2d ? 4 : 1;
}

std::size_t basis_num_groups(const BasisId& b) {
    if (b.kind == BasisKind::nse2d) {
        const std::size_t side = 2 * static_cast<std::size_t>(b.trunc) + 1;
        return side * side;
    }
    return static_cast<std::size_t>(b.trunc);
}

std::size_t basis_num_doubles(const BasisId& b) {
    return basis_num_groups(b) * basis_group_size(b);
}

std::array<int, 2> nse_mode_of_group(const BasisId& b, std::size_t g) {
    const int side = 2 * b.trunc + 1;
    const int k2 = static_cast<int>(g) / side - b.trunc;
    const int k1 = static_cast<int>(g) % side - b.trunc;
    return {k1, k2};
}

std::size_t nse_group_of_mode(const BasisId& b, int k1, int k2) {
    const int K = b.trunc;
    if (k1 < -K || k1 > K || k2 < -K || k2 > K)
        throw ValidationError("mode outside truncation");
    const int side = 2 * K + 1;
    return static_cast<std::size_t>((k2 + K) * side + (k1 + K));
}

const BasisTables& basis_tables(const BasisId& b) {
    static std::mutex mu;
    static std::map<BasisKey, std::unique_ptr<BasisTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key_of(b)];
    if (!slot) {
        auto t = std::make_unique<BasisTables>();
        t->basis = b;
        t->n_groups = basis_num_groups(b);
        t->n_doubles = basis_num_doubles(b);
        t->ksq_group.resize(t->n_groups);
        t->weight_exp.resize(t->n_groups);
        if (b.kind == BasisKind::nse2d) {
            const double kunit = 2.0 * kPi / b.length;
            for (std::size_t g = 0; g < t->n_groups; ++g) {
                const auto m = nse_mode_of_group(b, g);
                t->ksq_group[g] =
                    kunit * kunit * (double(m[0]) * m[0] + double(m[1]) * m[1]);
                t->weight_exp[g] = std::abs(m[0]) + std::abs(m[1]);
            }
        } else {
            for (std::size_t g = 0; g < t->n_groups; ++g) {
                const double k = kPi * double(g + 1) / b.length;
                t->ksq_group[g] = k * k;
                t->weight_exp[g] = static_cast<int>(g);  // kappa - 1
            }
        }
        const std::size_t gs = basis_group_size(b);
        t->ksq_double.resize(t->n_doubles);
        for (std::size_t g = 0; g < t->n_groups; ++g)
            for (std::size_t c = 0; c < gs; ++c)
                t->ksq_double[g * gs + c] = t->ksq_group[g];
        slot = std::move(t);
    }
    return *slot;
}

const std::vector<double>& weak_weights(const BasisId& b, double weight_base) {
    if (!(weight_base > 1.0)) throw ValidationError("weight_base must exceed 1");
    static std::mutex mu;
    static std::map<std::pair<BasisKey, double>, std::unique_ptr<std::vector<double>>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{key_of(b), weight_base}];
    if (!slot) {
        const auto& t = basis_tables(b);
        auto w = std::make_unique<std::vector<double>>(t.n_groups);
        for (std::size_t g = 0; g < t.n_groups; ++g)
            (*w)[g] = std::pow(weight_base, -double(t.weight_exp[g]));
        slot = std::move(w);
    }
    return *slot;
}

double weak_tail_bound(const BasisId& b, double weight_base) {
    const double q = 1.0 / weight_base;
    if (b.kind == BasisKind::nse2d) {
        // full lattice mass (sum over Z^2 of q^{|k1|+|k2|}) minus the square
        const double line_full = (1.0 + q) / (1.0 - q);
        double line_kept = 1.0;
        for (int i = 1; i <= b.trunc; ++i) line_kept += 2.0 * std::pow(q, i);
        return line_full * line_full - line_kept * line_kept;
    }
    // sum_{kappa > M} q^{kappa-1}
    return std::pow(q, b.trunc) / (1.0 - q);
}

}  // namespace attrlab
