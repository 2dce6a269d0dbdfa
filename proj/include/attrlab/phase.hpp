#pragma once
// Phase-space points, the strong and weak metrics, trajectory-space metrics
// and set distances. Everything downstream measures with this header.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "attrlab/basis.hpp"
#include "attrlab/errors.hpp"

namespace attrlab {

struct PhaseVector {
    BasisId basis;
    std::vector<double> data;  // layout per basis.hpp

    PhaseVector() = default;
    explicit PhaseVector(const BasisId& b)
        : basis(b), data(basis_num_doubles(b), 0.0) {}

    // L^2 norm (Parseval over the orthonormal coefficients)
    double norm() const;

    std::complex<double> nse_coeff(int k1, int k2, int comp) const;
    void nse_set_coeff(int k1, int k2, int comp, std::complex<double> v);

    double& rds_coeff(int kappa);        // kappa = 1..M
    double rds_coeff(int kappa) const;
};

void require_same_basis(const BasisId& a, const BasisId& b);

struct MetricSpec {
    enum class Kind { strong, weak };
    Kind kind = Kind::strong;
    double weight_base = 2.0;  // the 2 of 2^{-|kappa|}
    int series_truncation = 20;  // L_max of the half-line trajectory metric

    static MetricSpec strong() { return MetricSpec{}; }
    static MetricSpec weak(double base = 2.0) {
        return MetricSpec{Kind::weak, base, 20};
    }
};

// finite stand-in for phase-space sets (attractor samples, omega samples)
struct SetSample {
    BasisId basis;
    std::vector<PhaseVector> points;
};

// --- point metrics ----------------------------------------------------------

// |u - v| via Parseval over coefficients
double strong_dist(const PhaseVector& u, const PhaseVector& v);

// sum_kappa base^{-|kappa|} d_kappa/(1+d_kappa), d_kappa = |u_k - v_k|
double weak_dist(const PhaseVector& u, const PhaseVector& v,
                 const MetricSpec& spec);

// chosen by spec.kind
double point_dist(const PhaseVector& u, const PhaseVector& v,
                  const MetricSpec& spec);

// raw-array forms used by the trajectory layer (no per-sample allocation)
double strong_dist_span(std::span<const double> a, std::span<const double> b);
double weak_dist_span(const BasisId& basis, std::span<const double> a,
                      std::span<const double> b, double weight_base);

// --- set distance -----------------------------------------------------------

// symmetric Hausdorff distance max(sup_a inf_b, sup_b inf_a)
double hausdorff(const SetSample& A, const SetSample& B, const MetricSpec& spec);

// one-sided component sup_{a in A} inf_{b in B}
double hausdorff_one_sided(const SetSample& A, const SetSample& B,
                           const MetricSpec& spec);

}  // namespace attrlab
