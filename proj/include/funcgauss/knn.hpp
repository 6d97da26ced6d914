#pragma once

#include <optional>
#include <vector>

#include "funcgauss/sample.hpp"

namespace funcgauss {

// Univariate-response NIPALS partial least squares on centered curves.
// Directions are nested: the first d columns of a d_max fit are exactly the
// d-direction fit.
struct PlsModel {
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd weights;   // (N+1) x d
    Eigen::MatrixXd loadings;  // (N+1) x d
    int directions = 0;

    // Score vectors (one row per input curve), iteratively deflating.
    Eigen::MatrixXd scores(const CurveMatrix& curves) const;
};

// Throws FitError when even the first direction is degenerate (constant
// labels); stops early (directions < requested) on degenerate deflation.
PlsModel fit_pls(const CurveMatrix& curves, const std::vector<int>& labels, int max_directions);

class Semimetric {
public:
    enum class Kind { SupNorm, Pls };

    static Semimetric sup_norm() { return Semimetric(Kind::SupNorm, std::nullopt, 0); }
    static Semimetric pls(PlsModel model, int directions) {
        return Semimetric(Kind::Pls, std::move(model), directions);
    }

    Kind kind() const { return kind_; }
    int directions() const { return directions_; }
    const PlsModel& pls_model() const;

    double operator()(const Curve& a, const Curve& b) const;

    // All pairwise distances from query rows to reference rows.
    Eigen::MatrixXd distance_matrix(const CurveMatrix& queries, const CurveMatrix& refs) const;

private:
    Semimetric(Kind k, std::optional<PlsModel> m, int d)
        : kind_(k), pls_(std::move(m)), directions_(d) {}
    Kind kind_;
    std::optional<PlsModel> pls_;
    int directions_;
};

Semimetric fit_pls_semimetric(const LabeledSample& train, int directions);

struct KnnConfig {
    int k = 1;
    Semimetric semimetric = Semimetric::sup_norm();
};

// Majority vote among the k nearest training curves; eta = 1/2 ties go to
// class 0; distance ties break toward the lower training index.
int knn_classify(const LabeledSample& train, const KnnConfig& cfg, const Curve& x);

// Leave-one-out selection.  For SupNorm only k is searched; for Pls the
// (k, d) grid is searched jointly with the semimetric refitted without the
// held-out curve.  Ties prefer smaller k, then smaller d.
KnnConfig select_knn_cv(const LabeledSample& train, Semimetric::Kind kind, int k_max = 10,
                        int d_max = 5);

namespace detail {
// Vote of the k nearest among precomputed distances (lower index wins ties).
int knn_vote(const std::vector<double>& dists, const std::vector<int>& labels, int k);
// LOO error counts for every k = 1..k_max given the full distance matrix.
std::vector<int> knn_loo_errors(const Eigen::MatrixXd& dist, const std::vector<int>& labels,
                                int k_max);
}  // namespace detail

}  // namespace funcgauss
