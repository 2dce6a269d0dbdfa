#include "attrlab/phase.hpp"

#include <cmath>

#include "attrlab/kernels.hpp"
#include "attrlab/parallel.hpp"

namespace attrlab {

void require_same_basis(const BasisId& a, const BasisId& b) {
    if (!(a == b))
        throw BasisMismatchError(to_string(a) + " vs " + to_string(b));
}

double PhaseVector::norm() const {
    return std::sqrt(kernels::sumsq(data.data(), data.size()));
}

std::complex<double> PhaseVector::nse_coeff(int k1, int k2, int comp) const {
    const std::size_t g = nse_group_of_mode(basis, k1, k2);
    const std::size_t i = 4 * g + 2 * static_cast<std::size_t>(comp);
    return {data[i], data[i + 1]};
}

void PhaseVector::nse_set_coeff(int k1, int k2, int comp, std::complex<double> v) {
    const std::size_t g = nse_group_of_mode(basis, k1, k2);
    const std::size_t i = 4 * g + 2 * static_cast<std::size_t>(comp);
    data[i] = v.real();
    data[i + 1] = v.imag();
}

double& PhaseVector::rds_coeff(int kappa) {
    return data[static_cast<std::size_t>(kappa - 1)];
}

double PhaseVector::rds_coeff(int kappa) const {
    return data[static_cast<std::size_t>(kappa - 1)];
}

double strong_dist(const PhaseVector& u, const PhaseVector& v) {
    require_same_basis(u.basis, v.basis);
    return std::sqrt(kernels::sumsq_diff(u.data.data(), v.data.data(), u.data.size()));
}

double strong_dist_span(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(kernels::sumsq_diff(a.data(), b.data(), a.size()));
}

double weak_dist_span(const BasisId& basis, std::span<const double> a,
                      std::span<const double> b, double weight_base) {
    const auto& w = weak_weights(basis, weight_base);
    if (basis.kind == BasisKind::nse2d)
        return kernels::weak_sum_quad(a.data(), b.data(), w.data(), w.size());
    return kernels::weak_sum_real(a.data(), b.data(), w.data(), a.size());
}

double weak_dist(const PhaseVector& u, const PhaseVector& v,
                 const MetricSpec& spec) {
    require_same_basis(u.basis, v.basis);
    if (spec.kind != MetricSpec::Kind::weak)
        throw ValidationError("weak_dist requires a weak MetricSpec");
    return weak_dist_span(u.basis, u.data, v.data, spec.weight_base);
}

double point_dist(const PhaseVector& u, const PhaseVector& v,
                  const MetricSpec& spec) {
    if (spec.kind == MetricSpec::Kind::strong) return strong_dist(u, v);
    return weak_dist(u, v, spec);
}

namespace {

double point_dist_raw(const BasisId& basis, const PhaseVector& u,
                      const PhaseVector& v, const MetricSpec& spec) {
    if (spec.kind == MetricSpec::Kind::strong)
        return strong_dist_span(u.data, v.data);
    return weak_dist_span(basis, u.data, v.data, spec.weight_base);
}

}  // namespace

double hausdorff_one_sided(const SetSample& A, const SetSample& B,
                           const MetricSpec& spec) {
    require_same_basis(A.basis, B.basis);
    if (A.points.empty() || B.points.empty())
        throw ValidationError("hausdorff on empty set sample");
    std::vector<double> row_inf(A.points.size());
    parallel_for(A.points.size(), [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : B.points) {
            const double d = point_dist_raw(A.basis, A.points[i], b, spec);
            if (d < best) best = d;
        }
        row_inf[i] = best;
    });
    double sup = 0.0;
    for (double d : row_inf) sup = std::max(sup, d);
    return sup;
}

double hausdorff(const SetSample& A, const SetSample& B, const MetricSpec& spec) {
    return std::max(hausdorff_one_sided(A, B, spec),
                    hausdorff_one_sided(B, A, spec));
}

}  // namespace attrlab
