#include "mlsm/refine.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mlsm/errors.hpp"
#include "mlsm/fit_single.hpp"

namespace mlsm {

namespace {

void check_dims(const LatentFactors& f, const MultiplexNetwork& A) {
    if (f.n() != A.n || f.T() != A.T)
        throw std::invalid_argument("factor/network dimension mismatch");
}

void check_anchor_dims(const LatentFactors& f, const LatentFactors& anchors) {
    if (f.n() != anchors.n() || f.k() != anchors.k() || f.T() != anchors.T())
        throw std::invalid_argument("anchor dimension mismatch");
    for (int t = 0; t < f.T(); ++t)
        if (f.k_t(t) != anchors.k_t(t))
            throw std::invalid_argument("anchor dimension mismatch");
}

// residual with doubled diagonal, the gradient kernel of the i<=j sum
Eigen::MatrixXd residual_for_grad(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& theta, Family fam) {
    Eigen::MatrixXd R = A - apply_mean(theta, fam);
    R.diagonal() *= 2.0;
    return R;
}

double dot_all(const JointGrad& a, const JointGrad& b, bool w_only,
               bool z_only) {
    double s = 0.0;
    if (!w_only) s += a.Z.cwiseProduct(b.Z).sum();
    if (!z_only)
        for (std::size_t t = 0; t < a.W.size(); ++t)
            s += a.W[t].cwiseProduct(b.W[t]).sum();
    return s;
}

// truncated pseudo-inverse applied to a vector, via the eigensystem of a
// symmetric PSD matrix
Eigen::VectorXd pinv_apply(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& es,
                           const Eigen::VectorXd& rhs, double rel_tol) {
    const Eigen::VectorXd& lam = es.eigenvalues();
    const double lmax = lam.maxCoeff();
    Eigen::VectorXd coef = es.eigenvectors().transpose() * rhs;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam(i) > rel_tol * lmax)
            coef(i) /= lam(i);
        else
            coef(i) = 0.0;
    }
    return es.eigenvectors() * coef;
}

}  // namespace

Eigen::Index ParamVector::w_offset(int t, int i) const {
    Eigen::Index off = static_cast<Eigen::Index>(n) * k;
    for (int u = 0; u < t; ++u) off += static_cast<Eigen::Index>(n) * kt[u];
    return off + static_cast<Eigen::Index>(i) * kt[t];
}

int ParamVector::block_dim() const {
    return k + std::accumulate(kt.begin(), kt.end(), 0);
}

ParamVector ParamVector::pack(const LatentFactors& f) {
    ParamVector p;
    p.n = f.n();
    p.k = f.k();
    for (int t = 0; t < f.T(); ++t) p.kt.push_back(f.k_t(t));
    Eigen::Index total = static_cast<Eigen::Index>(p.n) * p.block_dim();
    p.v.resize(total);
    for (int i = 0; i < p.n; ++i)
        p.v.segment(p.z_offset(i), p.k) = f.Z.row(i).transpose();
    for (int t = 0; t < f.T(); ++t)
        for (int i = 0; i < p.n; ++i)
            p.v.segment(p.w_offset(t, i), p.kt[t]) = f.W[t].row(i).transpose();
    return p;
}

LatentFactors ParamVector::unpack() const {
    LatentFactors f;
    f.Z.resize(n, k);
    for (int i = 0; i < n; ++i)
        f.Z.row(i) = v.segment(z_offset(i), k).transpose();
    for (std::size_t t = 0; t < kt.size(); ++t) {
        Eigen::MatrixXd Wt(n, kt[t]);
        for (int i = 0; i < n; ++i)
            Wt.row(i) = v.segment(w_offset(static_cast<int>(t), i), kt[t])
                            .transpose();
        f.W.push_back(std::move(Wt));
    }
    return f;
}

double joint_loglik(const LatentFactors& f, const MultiplexNetwork& A,
                    Family fam) {
    check_dims(f, A);
    const Eigen::MatrixXd ZZt = f.Z * f.Z.transpose();
    double total = 0.0;
    for (int t = 0; t < A.T; ++t) {
        const Eigen::MatrixXd theta = ZZt + f.W[t] * f.W[t].transpose();
        const Eigen::MatrixXd terms =
            A.layers[t].cwiseProduct(theta) - apply_log_partition(theta, fam);
        total += 0.5 * (terms.sum() + terms.trace());
    }
    return total;
}

JointGrad grad_joint(const LatentFactors& f, const MultiplexNetwork& A,
                     Family fam) {
    check_dims(f, A);
    const Eigen::MatrixXd ZZt = f.Z * f.Z.transpose();
    JointGrad g;
    g.Z = Eigen::MatrixXd::Zero(f.n(), f.k());
    for (int t = 0; t < A.T; ++t) {
        const Eigen::MatrixXd theta = ZZt + f.W[t] * f.W[t].transpose();
        const Eigen::MatrixXd R = residual_for_grad(A.layers[t], theta, fam);
        g.Z.noalias() += R * f.Z;
        g.W.push_back(R * f.W[t]);
    }
    return g;
}

LatentFactors pgd_refine(const LatentFactors& init, const MultiplexNetwork& A,
                         Family fam, const RefineConfig& cfg,
                         std::vector<double>* loglik_trace) {
    if (cfg.eta <= 0.0) throw std::invalid_argument("pgd_refine: eta <= 0");
    if (cfg.R < 1) throw std::invalid_argument("pgd_refine: R < 1");
    check_dims(init, A);
    const int n = A.n, T = A.T;
    const double seed_z = cfg.eta / (static_cast<double>(n) * T);
    const double seed_w = cfg.eta / static_cast<double>(n);

    LatentFactors cur = init;
    double L = joint_loglik(cur, A, fam);
    if (!std::isfinite(L))
        throw NumericalError("non-finite likelihood at initialization", 0);
    if (loglik_trace) loglik_trace->push_back(L);

    LatentFactors prev = cur;
    JointGrad gprev;
    int flat_streak = 0;

    for (int r = 0; r < cfg.R; ++r) {
        JointGrad g = grad_joint(cur, A, fam);

        double step_z = seed_z, step_w = seed_w;
        if (cfg.bb_steps && r > 0) {
            // BB1 per factor group; differences of iterates and gradients
            JointGrad s, y;
            s.Z = cur.Z - prev.Z;
            y.Z = gprev.Z - g.Z;
            for (int t = 0; t < T; ++t) {
                s.W.push_back(cur.W[t] - prev.W[t]);
                y.W.push_back(gprev.W[t] - g.W[t]);
            }
            const double sz = dot_all(s, s, false, true);
            const double dz = dot_all(s, y, false, true);
            if (dz != 0.0 && std::isfinite(dz)) {
                step_z = std::fabs(sz / dz);
                step_z = std::clamp(step_z, 0.01 * seed_z, 100.0 * seed_z);
            }
            const double sw = dot_all(s, s, true, false);
            const double dw = dot_all(s, y, true, false);
            if (dw != 0.0 && std::isfinite(dw)) {
                step_w = std::fabs(sw / dw);
                step_w = std::clamp(step_w, 0.01 * seed_w, 100.0 * seed_w);
            }
        }

        prev = cur;
        gprev = g;

        auto make_candidate = [&](double az, double aw) {
            LatentFactors c;
            c.Z = cur.Z + az * g.Z;
            if (cfg.project) project_rows(c.Z, cfg.M1);
            for (int t = 0; t < T; ++t) {
                Eigen::MatrixXd Wt = cur.W[t] + aw * g.W[t];
                if (cfg.project) project_rows(Wt, cfg.M1);
                c.W.push_back(std::move(Wt));
            }
            return c;
        };

        LatentFactors cand = make_candidate(step_z, step_w);
        double Lc = joint_loglik(cand, A, fam);
        bool moved = true;
        if (cfg.backtrack) {
            int halvings = 0;
            while ((!std::isfinite(Lc) || Lc < L) && halvings < 30) {
                step_z *= 0.5;
                step_w *= 0.5;
                cand = make_candidate(step_z, step_w);
                Lc = joint_loglik(cand, A, fam);
                ++halvings;
            }
            if (!std::isfinite(Lc) || Lc < L) {
                moved = false;  // keep the current iterate
                Lc = L;
            }
        } else if (!std::isfinite(Lc)) {
            throw NumericalError("non-finite likelihood", r + 1);
        }

        if (moved) cur = std::move(cand);
        if (loglik_trace) loglik_trace->push_back(Lc);

        const double rel = std::fabs(Lc - L) / (1.0 + std::fabs(L));
        L = Lc;
        flat_streak = rel < cfg.early_exit_tol ? flat_streak + 1 : 0;
        if (flat_streak >= cfg.early_exit_window) break;
    }
    return cur;
}

double pseudo_loglik(const LatentFactors& f, const LatentFactors& anchors,
                     const MultiplexNetwork& A, Family fam) {
    check_dims(f, A);
    check_anchor_dims(f, anchors);
    double total = 0.0;
    for (int t = 0; t < A.T; ++t) {
        const Eigen::MatrixXd theta = f.Z * anchors.Z.transpose() +
                                      f.W[t] * anchors.W[t].transpose();
        total += (A.layers[t].cwiseProduct(theta) -
                  apply_log_partition(theta, fam))
                     .sum();
    }
    return total;
}

ParamVector pseudo_score(const LatentFactors& f, const LatentFactors& anchors,
                         const MultiplexNetwork& A, Family fam) {
    check_dims(f, A);
    check_anchor_dims(f, anchors);
    LatentFactors g;
    g.Z = Eigen::MatrixXd::Zero(f.n(), f.k());
    for (int t = 0; t < A.T; ++t) {
        const Eigen::MatrixXd theta = f.Z * anchors.Z.transpose() +
                                      f.W[t] * anchors.W[t].transpose();
        const Eigen::MatrixXd R = A.layers[t] - apply_mean(theta, fam);
        g.Z.noalias() += R * anchors.Z;
        g.W.push_back(R * anchors.W[t]);
    }
    return ParamVector::pack(g);
}

Eigen::MatrixXd fisher_block(int i, const LatentFactors& f,
                             const LatentFactors& anchors, Family fam) {
    check_anchor_dims(f, anchors);
    const int k = f.k();
    const int D = k + f.k_sum();
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(D, D);
    Eigen::VectorXd zsum = Eigen::VectorXd::Zero(f.n());
    int col = k;
    for (int t = 0; t < f.T(); ++t) {
        const Eigen::VectorXd row_theta =
            anchors.Z * f.Z.row(i).transpose() +
            anchors.W[t] * f.W[t].row(i).transpose();
        Eigen::VectorXd val(row_theta.size());
        for (Eigen::Index j = 0; j < val.size(); ++j)
            val(j) = variance(row_theta(j), fam);
        zsum += val;
        const int kt = f.k_t(t);
        const Eigen::MatrixXd Wv = val.asDiagonal() * anchors.W[t];
        I.block(0, col, k, kt).noalias() = anchors.Z.transpose() * Wv;
        I.block(col, 0, kt, k) = I.block(0, col, k, kt).transpose();
        I.block(col, col, kt, kt).noalias() =
            anchors.W[t].transpose() * Wv;
        col += kt;
    }
    I.topLeftCorner(k, k).noalias() =
        anchors.Z.transpose() * (zsum.asDiagonal() * anchors.Z);
    return I;
}

ParamVector full_score(const LatentFactors& f, const MultiplexNetwork& A,
                       Family fam) {
    const JointGrad g = grad_joint(f, A, fam);
    LatentFactors gf;
    gf.Z = g.Z;
    gf.W = g.W;
    return ParamVector::pack(gf);
}

Eigen::MatrixXd full_fisher(const LatentFactors& f, Family fam) {
    const ParamVector layout = ParamVector::pack(f);
    const Eigen::Index N = layout.v.size();
    Eigen::MatrixXd I = Eigen::MatrixXd::Zero(N, N);
    const auto theta = theta_from_factors(f);
    Eigen::VectorXd g(N);
    for (int t = 0; t < f.T(); ++t) {
        const int kt = f.k_t(t);
        for (int i = 0; i < f.n(); ++i)
            for (int j = i; j < f.n(); ++j) {
                g.setZero();
                if (i == j) {
                    g.segment(layout.z_offset(i), f.k()) =
                        2.0 * f.Z.row(i).transpose();
                    g.segment(layout.w_offset(t, i), kt) =
                        2.0 * f.W[t].row(i).transpose();
                } else {
                    g.segment(layout.z_offset(i), f.k()) =
                        f.Z.row(j).transpose();
                    g.segment(layout.z_offset(j), f.k()) =
                        f.Z.row(i).transpose();
                    g.segment(layout.w_offset(t, i), kt) =
                        f.W[t].row(j).transpose();
                    g.segment(layout.w_offset(t, j), kt) =
                        f.W[t].row(i).transpose();
                }
                I.noalias() += variance(theta[t](i, j), fam) * g * g.transpose();
            }
    }
    return I;
}

LatentFactors one_step_update(const LatentFactors& check,
                              const LatentFactors& anchors,
                              const MultiplexNetwork& A, Family fam,
                              const RefineConfig& cfg,
                              std::vector<int>* zero_fisher_nodes) {
    check_dims(check, A);
    if (zero_fisher_nodes) zero_fisher_nodes->clear();

    if (!cfg.use_pseudo) {
        // global system: v^ = v~ + I^+ score
        const ParamVector v = ParamVector::pack(check);
        const ParamVector score = full_score(check, A, fam);
        const Eigen::MatrixXd I = full_fisher(check, fam);
        const double tol = cfg.pinv_rel_tol > 0.0
                               ? cfg.pinv_rel_tol
                               : 1e-10 * static_cast<double>(I.rows());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(I);
        if (!(es.eigenvalues().maxCoeff() > 0.0)) {
            if (zero_fisher_nodes)
                for (int i = 0; i < check.n(); ++i)
                    zero_fisher_nodes->push_back(i);
            return check;
        }
        ParamVector out = v;
        out.v += pinv_apply(es, score.v, tol);
        return out.unpack();
    }

    check_anchor_dims(check, anchors);
    const int n = A.n, T = A.T, k = check.k();
    const int D = k + check.k_sum();
    const double tol = cfg.pinv_rel_tol > 0.0 ? cfg.pinv_rel_tol : 1e-10 * D;

    // residual and variance matrices per layer, reused across nodes
    std::vector<Eigen::MatrixXd> R(T), V(T);
    for (int t = 0; t < T; ++t) {
        const Eigen::MatrixXd theta = check.Z * anchors.Z.transpose() +
                                      check.W[t] * anchors.W[t].transpose();
        R[t] = A.layers[t] - apply_mean(theta, fam);
        V[t] = apply_variance(theta, fam);
    }

    LatentFactors out = check;
    Eigen::MatrixXd I(D, D);
    Eigen::VectorXd score(D), zsum(n);
    for (int i = 0; i < n; ++i) {
        I.setZero();
        zsum.setZero();
        score.segment(0, k).setZero();
        int col = k;
        for (int t = 0; t < T; ++t) {
            const Eigen::VectorXd val = V[t].row(i).transpose();
            zsum += val;
            const int kt = check.k_t(t);
            const Eigen::MatrixXd Wv = val.asDiagonal() * anchors.W[t];
            I.block(0, col, k, kt).noalias() = anchors.Z.transpose() * Wv;
            I.block(col, 0, kt, k) = I.block(0, col, k, kt).transpose();
            I.block(col, col, kt, kt).noalias() =
                anchors.W[t].transpose() * Wv;
            score.segment(0, k).noalias() +=
                anchors.Z.transpose() * R[t].row(i).transpose();
            score.segment(col, kt).noalias() =
                anchors.W[t].transpose() * R[t].row(i).transpose();
            col += kt;
        }
        I.topLeftCorner(k, k).noalias() =
            anchors.Z.transpose() * (zsum.asDiagonal() * anchors.Z);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(I);
        if (!(es.eigenvalues().maxCoeff() > 0.0)) {
            if (zero_fisher_nodes) zero_fisher_nodes->push_back(i);
            continue;
        }
        const Eigen::VectorXd delta = pinv_apply(es, score, tol);
        out.Z.row(i) += delta.segment(0, k).transpose();
        col = k;
        for (int t = 0; t < T; ++t) {
            out.W[t].row(i) += delta.segment(col, check.k_t(t)).transpose();
            col += check.k_t(t);
        }
    }
    return out;
}

}  // namespace mlsm
