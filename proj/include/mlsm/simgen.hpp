#ifndef MLSM_SIMGEN_HPP
#define MLSM_SIMGEN_HPP

#include <Eigen/Core>
#include <string>

#include "mlsm/netdata.hpp"
#include "mlsm/rng.hpp"

namespace mlsm {

enum class GramCase { A, B, C };

std::string to_string(GramCase c);
GramCase gram_case_from_string(const std::string& name);

// Design of the target scaled Gram matrix G([Z,W]) = Omega kron I_k / (2 sqrt k),
// with k_t = k for every layer.
//   A: Omega = I_{1+T} (all factor groups orthogonal)
//   B: first row/col off-diagonals phi, W-block compound symmetry rho
//   C: block-diag(I_{1+T_o}, all-ones) -- layers beyond T_o share one W
struct GramDesign {
    GramCase kase = GramCase::A;
    int T = 0;
    int k = 0;
    double phi = 0.1;   // Case B
    double rho = 0.3;   // Case B
    int T_o = 4;        // Case C
};

// (1+T) x (1+T), symmetric, unit diagonal. Throws on Case C with
// T_o >= T and on a target that is not PSD.
Eigen::MatrixXd build_omega(const GramDesign& d);

// n x k(1+T); each k-block row i.i.d. standard normal restricted to
// ||x||_2^2 <= k (rejection sampling). Requires n > k(1+T).
Eigen::MatrixXd sample_raw_factors(int n, int k, int T, RandomStream& rng);

// Rescale raw factors so the scaled Gram matrix equals the design target
// exactly, then split into Z (first k columns) and the W_t blocks.
LatentFactors impose_gram(const Eigen::MatrixXd& raw, const GramDesign& d);

// Sample the upper triangle (i <= j) of every layer independently from
// F_nu(.; Theta_t,ij) and mirror it.
MultiplexNetwork generate_networks(const LatentFactors& f, Family fam,
                                   RandomStream& rng);

// Constraint radius for downstream fitting: max observed row norm * 1.05.
double suggest_m1(const LatentFactors& f);

}  // namespace mlsm

#endif
