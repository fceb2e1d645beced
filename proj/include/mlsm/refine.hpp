#ifndef MLSM_REFINE_HPP
#define MLSM_REFINE_HPP

#include <Eigen/Core>
#include <vector>

#include "mlsm/netdata.hpp"

namespace mlsm {

struct RefineConfig {
    double eta = 1.0;     // base step constant; seeds are eta/(nT) and eta/n
    int R = 1000;         // gradient iterations
    double M1 = 1.0;      // row-norm constraint radius
    bool use_pseudo = true;     // one-step on the pseudo-likelihood (block
                                // diagonal Fisher); false solves the global
                                // full-likelihood system instead
    bool bb_steps = true;       // Barzilai-Borwein step lengths, clipped to
                                // [0.01x, 100x] of the seeds
    double pinv_rel_tol = -1.0; // singular-value cutoff relative to the
                                // largest; < 0 picks 1e-10 * system dim
    bool project = true;        // row-norm projection each iteration
    bool backtrack = true;      // step halving on likelihood decrease
    int early_exit_window = 20;
    double early_exit_tol = 1e-10;
};

// Vectorization [z_1..z_n, w_{1,1}..w_{1,n}, ..., w_{T,1}..w_{T,n}],
// bijective with a LatentFactors of matching dimensions.
struct ParamVector {
    int n = 0;
    int k = 0;
    std::vector<int> kt;
    Eigen::VectorXd v;

    static ParamVector pack(const LatentFactors& f);
    LatentFactors unpack() const;

    Eigen::Index z_offset(int i) const { return static_cast<Eigen::Index>(i) * k; }
    Eigen::Index w_offset(int t, int i) const;
    int block_dim() const;  // k + k_sum, the per-node dimension
};

struct JointGrad {
    Eigen::MatrixXd Z;
    std::vector<Eigen::MatrixXd> W;
};

// sum over t of the single-layer log-likelihoods (i <= j terms once)
double joint_loglik(const LatentFactors& f, const MultiplexNetwork& A,
                    Family fam);

// dL/dZ = sum_t (R_t + diag(R_t)) Z, dL/dW_t = (R_t + diag(R_t)) W_t
// with R_t = A_t - nu'(Theta_t)
JointGrad grad_joint(const LatentFactors& f, const MultiplexNetwork& A,
                     Family fam);

// Projected gradient ascent with the two step scales eta/(nT) and eta/n.
LatentFactors pgd_refine(const LatentFactors& init, const MultiplexNetwork& A,
                         Family fam, const RefineConfig& cfg,
                         std::vector<double>* loglik_trace = nullptr);

// Pseudo-likelihood: sum over t and over all ordered (i,j) of
// A_{t,ij} theta~ - nu(theta~) with theta~ = <z_i, anchor z_j> +
// <w_{t,i}, anchor w_{t,j}>; the right-hand factor of every inner
// product is frozen at the anchors, so the objective separates over i.
double pseudo_loglik(const LatentFactors& f, const LatentFactors& anchors,
                     const MultiplexNetwork& A, Family fam);

ParamVector pseudo_score(const LatentFactors& f, const LatentFactors& anchors,
                         const MultiplexNetwork& A, Family fam);

// Node-i block of the pseudo-likelihood Fisher information:
// sum_t sum_j nu''(theta~_{t,ij}) u_{t,j} u_{t,j}^T, where u_{t,j} stacks
// anchor z_j in the z slot and anchor w_{t,j} in the w_t slot.
Eigen::MatrixXd fisher_block(int i, const LatentFactors& f,
                             const LatentFactors& anchors, Family fam);

// Full-likelihood score/Fisher in the ParamVector layout (small-scale
// comparison path).
ParamVector full_score(const LatentFactors& f, const MultiplexNetwork& A,
                       Family fam);
Eigen::MatrixXd full_fisher(const LatentFactors& f, Family fam);

// One Newton-type correction v^ = v~ + I(v~)^+ score(v~). With
// use_pseudo the system is block diagonal over nodes; nodes whose Fisher
// block vanishes are left unchanged and reported.
LatentFactors one_step_update(const LatentFactors& check,
                              const LatentFactors& anchors,
                              const MultiplexNetwork& A, Family fam,
                              const RefineConfig& cfg,
                              std::vector<int>* zero_fisher_nodes = nullptr);

}  // namespace mlsm

#endif
