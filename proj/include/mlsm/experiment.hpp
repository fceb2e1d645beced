#ifndef MLSM_EXPERIMENT_HPP
#define MLSM_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mlsm/fit_single.hpp"
#include "mlsm/hunt.hpp"
#include "mlsm/metrics.hpp"
#include "mlsm/netdata.hpp"
#include "mlsm/refine.hpp"
#include "mlsm/simgen.hpp"

namespace mlsm {

// Worker count: MLSM_THREADS if set, otherwise available parallelism.
int default_threads();

// Knobs for the three-stage fit. Negative tau1/M1 mean "derive from the
// data": tau1 = sqrt(2 log n), M1 = 1.5 x the largest spectral-init row
// norm (or the caller passes the generator's suggestion).
struct FitOptions {
    double tau1 = -1.0;
    double M1 = -1.0;
    SingleFitConfig single;   // d and M1 are set per layer/fit
    RefineConfig refine;      // M1 is overridden by the resolved value
    bool anchors_from_pgd = false;  // one-step anchors: hunt (default) or pgd
    Stage last_stage = Stage::onestep;
    int threads = 1;
};

struct FitReport {
    std::vector<Eigen::MatrixXd> individual;  // per-layer [Z,W_t] estimates
    HuntResult hunt;
    LatentFactors pgd;
    LatentFactors onestep;
    std::vector<double> single_final_loglik;
    std::vector<double> joint_trace;
    std::vector<int> zero_fisher_nodes;
    double seconds_individual = 0.0;
    double seconds_hunt = 0.0;
    double seconds_pgd = 0.0;
    double seconds_onestep = 0.0;
    double M1_used = 0.0;
    double tau1_used = 0.0;
};

// individual fits -> shared-space hunt -> joint PGD -> one-step update,
// stopping after opt.last_stage.
FitReport fit_pipeline(const MultiplexNetwork& A, int k,
                       const std::vector<int>& kt, const FitOptions& opt);

struct ExperimentPlan {
    GramCase kase = GramCase::A;
    Family family = Family::Gaussian;
    int n = 200;
    int k = 2;
    double phi = 0.1;
    double rho = 0.3;
    int T_o = 4;
    std::vector<int> T_list;
    int replicates = 1;
    std::uint64_t seed = 1;
    std::vector<Stage> stages = {Stage::hunt, Stage::pgd, Stage::onestep};
    std::string output_dir = ".";
    FitOptions fit;
    bool record_timing = true;  // off writes 0 in the seconds column so
                                // reruns are byte-identical
    void validate() const;
    GramDesign design(int T) const;
};

// Deterministic per-(T, replicate) generation from the plan seed.
struct Replicate {
    LatentFactors truth;
    MultiplexNetwork net;
    double M1;
};
Replicate generate_replicate(const ExperimentPlan& plan, int T, int rep);

// Writes factor and network files per (T, replicate) plus manifest.json.
void cmd_simulate(const ExperimentPlan& plan);

// Full pipeline on one network file; writes per-stage estimates, the
// screening table, the likelihood trace, and report.json.
FitReport cmd_fit(const std::string& network_file, int k,
                  const std::vector<int>& kt, const FitOptions& opt,
                  const std::string& output_dir);

// Sweep over T_list x replicates; writes results.csv and summary.csv.
void cmd_experiment(const ExperimentPlan& plan);

// Recompute the hashes listed in a manifest. Returns true when all match;
// mismatch details go to `why`.
bool verify_manifest(const std::string& manifest_path, std::string* why = nullptr);

// 64-bit FNV-1a over a file's bytes, hex encoded.
std::string file_hash(const std::string& path);

// Empirical quantile with linear interpolation.
double quantile(std::vector<double> values, double p);

}  // namespace mlsm

#endif
