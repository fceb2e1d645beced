#ifndef MLSM_NETDATA_HPP
#define MLSM_NETDATA_HPP

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mlsm/expfam.hpp"

namespace mlsm {

// T symmetric n x n weight matrices on a common node set. Immutable by
// convention after construction/validation; safe to share across readers.
struct MultiplexNetwork {
    int n = 0;
    int T = 0;
    Family family = Family::Gaussian;
    std::vector<Eigen::MatrixXd> layers;

    // Throws on asymmetry or family-incompatible entries.
    void validate() const;
};

// Shared factors Z (n x k) and per-layer factors W_t (n x k_t).
struct LatentFactors {
    Eigen::MatrixXd Z;
    std::vector<Eigen::MatrixXd> W;

    int n() const { return static_cast<int>(Z.rows()); }
    int k() const { return static_cast<int>(Z.cols()); }
    int T() const { return static_cast<int>(W.size()); }
    int k_t(int t) const { return static_cast<int>(W[t].cols()); }
    int k_sum() const;

    // [Z, W_t], the concatenated per-layer factor matrix
    Eigen::MatrixXd Y(int t) const;
};

// Theta_t = Z Z^T + W_t W_t^T for every layer.
std::vector<Eigen::MatrixXd> theta_from_factors(const LatentFactors& f);

// Diagnostics for the identifiability margins of a factor set:
// row-norm bounds, sigma_min of per-layer and pairwise scaled Gram
// matrices, and whether some pair keeps [Z, W_t, W_s] full rank.
struct ConditionReport {
    double max_row_norm_Z = 0.0;
    std::vector<double> max_row_norm_W;
    bool row_bound_ok = false;               // all row norms <= M1
    std::vector<double> sigma_min_Gt;        // per layer t
    struct PairSigma {
        int t, s;
        double sigma_min;
    };
    std::vector<PairSigma> sigma_min_Gts;    // all pairs t < s
    bool any_identifiable_pair = false;      // some sigma_min_Gts > tol
    double pair_tol = 0.0;
};

ConditionReport validate_conditions(const LatentFactors& f, double M1,
                                    double pair_tol = 1e-8);

// Edge-list file: header "n T family", then lines "t i j w" with
// 0-indexed t, i <= j, real w; '#' starts a comment; unlisted pairs are 0.
MultiplexNetwork load_multiplex(const std::string& path);
MultiplexNetwork load_multiplex(const std::string& path, Family expected);
void save_multiplex(const MultiplexNetwork& net, const std::string& path);

// Factor file: header "n k" then n rows of k reals; one layer per file.
Eigen::MatrixXd load_factor_matrix(const std::string& path);
void save_factor_matrix(const Eigen::MatrixXd& X, const std::string& path);

}  // namespace mlsm

#endif
