#ifndef MLSM_HUNT_HPP
#define MLSM_HUNT_HPP

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlsm/netdata.hpp"

namespace mlsm {

// Pairwise screening by the ratio of the largest singular value of
// [Y_t, Y_s] to its (k + k_t + k_s)-th one. A pair is kept when the
// ratio stays below tau1; a numerically zero denominator means the
// stacked matrix is rank-deficient and the ratio is +inf.
struct ScreeningSet {
    struct PairRatio {
        int t, s;
        double ratio;
        bool included;
    };
    std::vector<PairRatio> all;              // every pair t < s, in order
    std::vector<std::pair<int, int>> pairs;  // the included ones
    double tau1 = 0.0;

    std::string table() const;  // printable pair/ratio summary
};

// Thrown when no layer pair survives screening.
class NoIdentifiablePair : public std::runtime_error {
public:
    explicit NoIdentifiablePair(ScreeningSet s)
        : std::runtime_error("no identifiable pair: every screening ratio "
                             "exceeded the threshold"),
          screening(std::move(s)) {}

    ScreeningSet screening;
};

// tau1 default from the threshold window 1 << tau1 <~ sqrt(log n)
double default_tau1(int n);

ScreeningSet screen_pairs(const std::vector<Eigen::MatrixXd>& Ys, int k,
                          const std::vector<int>& dims, double tau1);

// Orthonormal right singular vectors for the k smallest singular values.
Eigen::MatrixXd null_basis(const Eigen::MatrixXd& Yts, int k);

// F = (1 / 2|S|) sum over screened pairs of Y_{t,-s} V V^T Y_{t,-s}^T
// with Y_{t,-s} = [Y_t, -Y_s]; recovers Z Z^T exactly on noiseless input.
Eigen::MatrixXd aggregate_F(const std::vector<Eigen::MatrixXd>& Ys,
                            const ScreeningSet& S, int k);

// Square root of the top-k eigendecomposition, negative eigenvalues
// clamped to zero. Column signs fixed so the first nonzero component of
// each eigenvector is positive.
Eigen::MatrixXd sqrt_top_k(const Eigen::MatrixXd& F, int k);

struct HuntResult {
    LatentFactors factors;
    ScreeningSet screening;
    Eigen::MatrixXd F;
};

// Full shared-space recovery: screen, aggregate, then split into
// Z = S_k(F) and W_t = S_{k_t}(Y_t Y_t^T - F).
HuntResult hunt_shared(const std::vector<Eigen::MatrixXd>& Ys, int k,
                       const std::vector<int>& dims, double tau1);

}  // namespace mlsm

#endif
