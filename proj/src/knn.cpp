#include "funcgauss/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace funcgauss {

namespace {
constexpr double kDeflationTol = 1e-12;
}

Eigen::MatrixXd PlsModel::scores(const CurveMatrix& curves) const {
    Eigen::MatrixXd z = curves.rowwise() - mean;
    Eigen::MatrixXd s(curves.rows(), directions);
    for (int j = 0; j < directions; ++j) {
        s.col(j) = z * weights.col(j);
        z.noalias() -= s.col(j) * loadings.col(j).transpose();
    }
    return s;
}

PlsModel fit_pls(const CurveMatrix& curves, const std::vector<int>& labels, int max_directions) {
    const Eigen::Index n = curves.rows();
    const Eigen::Index p = curves.cols();
    if (n < 2 || static_cast<Eigen::Index>(labels.size()) != n) {
        throw StructuralError("fit_pls: bad sample");
    }
    if (max_directions < 1 || max_directions > static_cast<int>(std::min(n - 1, p))) {
        throw StructuralError("fit_pls: direction count out of range");
    }

    PlsModel model;
    model.mean = curves.colwise().mean();
    Eigen::MatrixXd x = curves.rowwise() - model.mean;
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)];
    y.array() -= y.mean();

    model.weights.resize(p, max_directions);
    model.loadings.resize(p, max_directions);
    int d = 0;
    for (; d < max_directions; ++d) {
        Eigen::VectorXd w = x.transpose() * y;
        const double nw = w.norm();
        if (nw < kDeflationTol) break;
        w /= nw;
        const Eigen::VectorXd t = x * w;
        const double tt = t.squaredNorm();
        if (tt < kDeflationTol) break;
        const Eigen::VectorXd load = x.transpose() * t / tt;
        const double q = y.dot(t) / tt;
        x.noalias() -= t * load.transpose();
        y.noalias() -= q * t;
        model.weights.col(d) = w;
        model.loadings.col(d) = load;
    }
    if (d == 0) {
        throw FitError("fit_pls: first direction degenerate (constant labels?)");
    }
    model.directions = d;
    model.weights.conservativeResize(Eigen::NoChange, d);
    model.loadings.conservativeResize(Eigen::NoChange, d);
    return model;
}

const PlsModel& Semimetric::pls_model() const {
    if (!pls_) {
        throw StructuralError("semimetric has no PLS model");
    }
    return *pls_;
}

double Semimetric::operator()(const Curve& a, const Curve& b) const {
    if (kind_ == Kind::SupNorm) {
        return sup_distance(a, b);
    }
    CurveMatrix m(2, a.size());
    for (int j = 0; j < a.size(); ++j) {
        m(0, j) = a[j];
        m(1, j) = b[j];
    }
    const Eigen::MatrixXd s = pls_->scores(m);
    const int d = std::min(directions_, pls_->directions);
    return (s.row(0).head(d) - s.row(1).head(d)).norm();
}

Eigen::MatrixXd Semimetric::distance_matrix(const CurveMatrix& queries, const CurveMatrix& refs) const {
    Eigen::MatrixXd out(queries.rows(), refs.rows());
    if (kind_ == Kind::SupNorm) {
        for (Eigen::Index i = 0; i < queries.rows(); ++i) {
            for (Eigen::Index j = 0; j < refs.rows(); ++j) {
                out(i, j) = (queries.row(i) - refs.row(j)).cwiseAbs().maxCoeff();
            }
        }
        return out;
    }
    const int d = std::min(directions_, pls_->directions);
    const Eigen::MatrixXd sq = pls_->scores(queries).leftCols(d);
    const Eigen::MatrixXd sr = pls_->scores(refs).leftCols(d);
    for (Eigen::Index i = 0; i < sq.rows(); ++i) {
        out.row(i) = (sr.rowwise() - sq.row(i)).rowwise().norm();
    }
    return out;
}

Semimetric fit_pls_semimetric(const LabeledSample& train, int directions) {
    PlsModel model = fit_pls(train.values(), train.labels(), directions);
    const int fitted = model.directions;
    return Semimetric::pls(std::move(model), fitted);
}

namespace detail {

int knn_vote(const std::vector<double>& dists, const std::vector<int>& labels, int k) {
    const int n = static_cast<int>(dists.size());
    if (k < 1 || k > n) {
        throw StructuralError("knn_vote: k out of range");
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        const double da = dists[static_cast<std::size_t>(a)];
        const double db = dists[static_cast<std::size_t>(b)];
        return da < db || (da == db && a < b);
    });
    int votes = 0;
    for (int i = 0; i < k; ++i) votes += labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    return 2 * votes > k ? 1 : 0;
}

std::vector<int> knn_loo_errors(const Eigen::MatrixXd& dist, const std::vector<int>& labels,
                                int k_max) {
    const int n = static_cast<int>(labels.size());
    if (k_max < 1 || k_max > n - 1) {
        throw StructuralError("knn_loo_errors: k_max out of range");
    }
    std::vector<int> errors(static_cast<std::size_t>(k_max), 0);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n) - 1);
    for (int i = 0; i < n; ++i) {
        order.clear();
        for (int j = 0; j < n; ++j) {
            if (j != i) order.push_back(j);
        }
        std::partial_sort(order.begin(), order.begin() + k_max, order.end(), [&](int a, int b) {
            const double da = dist(i, a);
            const double db = dist(i, b);
            return da < db || (da == db && a < b);
        });
        int votes = 0;
        for (int k = 1; k <= k_max; ++k) {
            votes += labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k) - 1])];
            const int lab = 2 * votes > k ? 1 : 0;
            errors[static_cast<std::size_t>(k) - 1] += (lab != labels[static_cast<std::size_t>(i)]);
        }
    }
    return errors;
}

}  // namespace detail

int knn_classify(const LabeledSample& train, const KnnConfig& cfg, const Curve& x) {
    if (!x.grid().same_as(train.grid())) {
        throw StructuralError("knn_classify: query grid mismatch");
    }
    if (cfg.k < 1 || cfg.k > train.size()) {
        throw StructuralError("knn_classify: k out of range");
    }
    std::vector<double> dists(static_cast<std::size_t>(train.size()));
    if (cfg.semimetric.kind() == Semimetric::Kind::SupNorm) {
        for (int i = 0; i < train.size(); ++i) {
            dists[static_cast<std::size_t>(i)] = sup_distance(x.values(), train.row(i));
        }
    } else {
        CurveMatrix q(1, x.size());
        for (int j = 0; j < x.size(); ++j) q(0, j) = x[j];
        const Eigen::MatrixXd d = cfg.semimetric.distance_matrix(q, train.values());
        for (int i = 0; i < train.size(); ++i) dists[static_cast<std::size_t>(i)] = d(0, i);
    }
    return detail::knn_vote(dists, train.labels(), cfg.k);
}

KnnConfig select_knn_cv(const LabeledSample& train, Semimetric::Kind kind, int k_max, int d_max) {
    const int n = train.size();
    if (n < 3) {
        throw StructuralError("select_knn_cv: sample too small");
    }
    k_max = std::min(k_max, n - 2);

    if (kind == Semimetric::Kind::SupNorm) {
        const Semimetric sm = Semimetric::sup_norm();
        const Eigen::MatrixXd dist = sm.distance_matrix(train.values(), train.values());
        const auto errors = detail::knn_loo_errors(dist, train.labels(), k_max);
        const int best =
            static_cast<int>(std::min_element(errors.begin(), errors.end()) - errors.begin()) + 1;
        return KnnConfig{best, sm};
    }

    d_max = std::min<int>(d_max, static_cast<int>(std::min<Eigen::Index>(n - 2, train.values().cols())));
    // errors[k-1][d-1], LOO with the PLS model refitted without the held-out curve
    std::vector<std::vector<int>> errors(static_cast<std::size_t>(k_max),
                                         std::vector<int>(static_cast<std::size_t>(d_max), 0));
    const CurveMatrix& all = train.values();
    CurveMatrix rest(n - 1, all.cols());
    std::vector<int> rest_labels(static_cast<std::size_t>(n) - 1);
    std::vector<int> order;
    for (int i = 0; i < n; ++i) {
        Eigen::Index r = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            rest.row(r) = all.row(j);
            rest_labels[static_cast<std::size_t>(r)] = train.label(j);
            ++r;
        }
        const PlsModel model = fit_pls(rest, rest_labels, d_max);
        CurveMatrix q(1, all.cols());
        q.row(0) = all.row(i);
        const Eigen::MatrixXd sq = model.scores(q);
        const Eigen::MatrixXd sr = model.scores(rest);
        // cumulative squared distances over nested direction prefixes
        Eigen::MatrixXd diff2 = (sr.rowwise() - sq.row(0)).array().square();
        for (int d = 1; d <= d_max; ++d) {
            const int dd = std::min(d, model.directions);
            std::vector<double> dists(static_cast<std::size_t>(n) - 1);
            for (Eigen::Index a = 0; a < rest.rows(); ++a) {
                dists[static_cast<std::size_t>(a)] = std::sqrt(diff2.row(a).head(dd).sum());
            }
            order.assign(dists.size(), 0);
            std::iota(order.begin(), order.end(), 0);
            std::partial_sort(order.begin(), order.begin() + k_max, order.end(), [&](int a, int b) {
                return dists[static_cast<std::size_t>(a)] < dists[static_cast<std::size_t>(b)] ||
                       (dists[static_cast<std::size_t>(a)] == dists[static_cast<std::size_t>(b)] &&
                        a < b);
            });
            int votes = 0;
            for (int k = 1; k <= k_max; ++k) {
                votes += rest_labels[static_cast<std::size_t>(order[static_cast<std::size_t>(k) - 1])];
                const int lab = 2 * votes > k ? 1 : 0;
                errors[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(d) - 1] +=
                    (lab != train.label(i));
            }
        }
    }
    int best_k = 1, best_d = 1, best_err = errors[0][0] + 1;
    for (int k = 1; k <= k_max; ++k) {
        for (int d = 1; d <= d_max; ++d) {
            const int e = errors[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(d) - 1];
            if (e < best_err) {
                best_err = e;
                best_k = k;
                best_d = d;
            }
        }
    }
    const PlsModel final_model = fit_pls(all, train.labels(), best_d);
    return KnnConfig{best_k, Semimetric::pls(final_model, best_d)};
}

}  // namespace funcgauss
