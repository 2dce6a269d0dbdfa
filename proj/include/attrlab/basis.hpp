#pragma once
// The two concrete Galerkin bases.
//
// nse2d: divergence-free Fourier modes on the periodic box [0,L]^2. A mode
//   kappa=(k1,k2), |k_i| <= K, carries a complex 2-vector coefficient stored
//   as 4 doubles [Re u1, Im u1, Re u2, Im u2]. Coefficients are w.r.t. the
//   L^2-orthonormal functions e^{i(2pi/L) kappa.x} / L, so the l2 norm of the
//   raw array is the L^2 norm of the field. The kappa=0 slot is kept in the
//   layout for simple indexing but is identically zero (zero space average).
//
// rds_sine: Dirichlet sine modes on [0,ell]. Mode kappa = 1..M carries one
//   real coefficient w.r.t. sqrt(2/ell) sin(kappa pi x / ell) (orthonormal).

#include <array>
#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace attrlab {

enum class BasisKind : std::uint32_t { nse2d = 0, rds_sine = 1 };

struct BasisId {
    BasisKind kind = BasisKind::rds_sine;
    int trunc = 0;        // K (nse2d, |k_i| <= K) or M (rds_sine, 1..M)
    double length = 0.0;  // L or ell

    bool operator==(const BasisId&) const = default;
};

std::string to_string(const BasisId& b);

// doubles per mode group: 4 for nse2d, 1 for rds_sine
std::size_t basis_group_size(const BasisId& b);

// number of mode groups (nse2d counts the zero slot)
std::size_t basis_num_groups(const BasisId& b);

// total storage doubles
std::size_t basis_num_doubles(const BasisId& b);

// nse2d mode of a group index, components in [-K, K]
std::array<int, 2> nse_mode_of_group(const BasisId& b, std::size_t g);

// group index of an nse2d mode
std::size_t nse_group_of_mode(const BasisId& b, int k1, int k2);

// Immutable per-basis tables, cached process-wide.
struct BasisTables {
    BasisId basis;
    std::size_t n_groups = 0;
    std::size_t n_doubles = 0;
    // |k|^2 of the physical wavevector per group: (2pi/L)^2 (k1^2+k2^2) for
    // nse2d, (pi kappa / ell)^2 for rds_sine. Zero for the nse2d zero slot.
    std::vector<double> ksq_group;
    // ksq expanded to one entry per stored double
    std::vector<double> ksq_double;
    // series index |kappa| used by the weak-metric weights: |k1|+|k2| for
    // nse2d, kappa-1 for rds_sine (lowest mode gets weight 1)
    std::vector<int> weight_exp;
};

const BasisTables& basis_tables(const BasisId& b);

// weight_base^{-|kappa|} per group, cached per (basis, base)
const std::vector<double>& weak_weights(const BasisId& b, double weight_base);

// Sum of the weights dropped by the truncation: an upper bound on the weak
// metric mass the Galerkin cutoff cannot see. Reported alongside weak
// distances on request; the untruncated value is never claimed.
double weak_tail_bound(const BasisId& b, double weight_base);

}  // namespace attrlab
