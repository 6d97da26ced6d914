#include "funcgauss/nonparam.hpp"

#include <algorithm>
#include <cmath>

namespace funcgauss {

namespace {

constexpr double kRegimeThreshold = 1e-3;  // sigma2(0) < thr * max sigma2 => u(0)=0 regime

void check_h(const Grid& grid, int h_mult) {
    if (h_mult < 1) {
        throw StructuralError("fd bandwidth must be a positive multiple of the grid spacing");
    }
    if (h_mult * grid.delta() >= 0.5) {
        throw StructuralError("fd bandwidth must be below 1/2");
    }
}

double interp_at(std::span<const double> f, const Grid& grid, double t) {
    const int n = grid.segments();
    const double p = t / grid.delta();
    int j = static_cast<int>(std::floor(p));
    j = std::clamp(j, 0, n - 1);
    const double w = p - j;
    return f[static_cast<std::size_t>(j)] * (1.0 - w) + f[static_cast<std::size_t>(j) + 1] * w;
}

}  // namespace

std::vector<double> fd_first(std::span<const double> f, const Grid& grid, int h_mult) {
    if (static_cast<int>(f.size()) != grid.size()) {
        throw StructuralError("fd_first: length mismatch with grid");
    }
    check_h(grid, h_mult);
    const int n = grid.segments();
    const int k = h_mult;
    const double h = k * grid.delta();
    std::vector<double> out(f.size());
    for (int j = k; j <= n - k; ++j) {
        out[static_cast<std::size_t>(j)] =
            (f[static_cast<std::size_t>(j + k)] - f[static_cast<std::size_t>(j - k)]) / (2.0 * h);
    }
    for (int j = 0; j < k; ++j) {
        out[static_cast<std::size_t>(j)] =
            (f[static_cast<std::size_t>(j + k)] - f[0]) / (h + grid.time(j));
    }
    for (int j = n - k + 1; j <= n; ++j) {
        out[static_cast<std::size_t>(j)] =
            (f[static_cast<std::size_t>(n)] - f[static_cast<std::size_t>(j - k)]) /
            (h + 1.0 - grid.time(j));
    }
    return out;
}

std::vector<double> fd_second(std::span<const double> f, const Grid& grid, int h_mult) {
    if (static_cast<int>(f.size()) != grid.size()) {
        throw StructuralError("fd_second: length mismatch with grid");
    }
    check_h(grid, h_mult);
    const int n = grid.segments();
    const int k = h_mult;
    const double h = k * grid.delta();
    std::vector<double> out(f.size());
    for (int j = k; j <= n - k; ++j) {
        out[static_cast<std::size_t>(j)] =
            (f[static_cast<std::size_t>(j + k)] + f[static_cast<std::size_t>(j - k)] -
             2.0 * f[static_cast<std::size_t>(j)]) /
            (h * h);
    }
    for (int j = 0; j < k; ++j) {
        const double gamma = (grid.time(j) + h) / 2.0;
        out[static_cast<std::size_t>(j)] =
            (f[static_cast<std::size_t>(j + k)] + f[0] - 2.0 * interp_at(f, grid, gamma)) /
            (gamma * gamma);
    }
    for (int j = n - k + 1; j <= n; ++j) {
        // mirror image of the left formula around t = 1
        const double gamma = (grid.time(j) - h + 1.0) / 2.0;
        const double half = (1.0 - grid.time(j) + h) / 2.0;
        out[static_cast<std::size_t>(j)] =
            (f[static_cast<std::size_t>(j - k)] + f[static_cast<std::size_t>(n)] -
             2.0 * interp_at(f, grid, gamma)) /
            (half * half);
    }
    return out;
}

std::vector<double> mean_hat(const CurveMatrix& curves) {
    if (curves.rows() < 1) {
        throw StructuralError("mean_hat: empty sample");
    }
    Eigen::RowVectorXd m = curves.colwise().mean();
    return std::vector<double>(m.data(), m.data() + m.size());
}

Eigen::MatrixXd cov_hat(const CurveMatrix& curves) {
    const Eigen::Index n = curves.rows();
    if (n < 2) {
        throw FitError("cov_hat: need at least two curves");
    }
    const Eigen::RowVectorXd m = curves.colwise().mean();
    const Eigen::MatrixXd centered = curves.rowwise() - m;
    // rank update keeps the table exactly symmetric
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(curves.cols(), curves.cols());
    c.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(), 1.0 / static_cast<double>(n));
    return c.selfadjointView<Eigen::Lower>();
}

CovSections cov_sections(const CurveMatrix& curves) {
    return SectionSums(curves).full();
}

SectionSums::SectionSums(const CurveMatrix& curves) {
    n_ = static_cast<int>(curves.rows());
    if (n_ < 2) {
        throw FitError("cov sections: need at least two curves");
    }
    s1_ = curves.colwise().sum();
    const Eigen::Index last = curves.cols() - 1;
    p_last_ = (curves.array().colwise() * curves.col(last).array()).colwise().sum();
    p_first_ = (curves.array().colwise() * curves.col(0).array()).colwise().sum();
    p_diag_ = curves.array().square().colwise().sum();
}

namespace {
CovSections sections_from_sums(const Eigen::VectorXd& s1, const Eigen::VectorXd& p_last,
                               const Eigen::VectorXd& p_first, const Eigen::VectorXd& p_diag,
                               int n) {
    const Eigen::Index sz = s1.size();
    const Eigen::VectorXd m = s1 / n;
    CovSections out;
    out.n = n;
    out.mean.assign(m.data(), m.data() + sz);
    out.gamma_t1.resize(static_cast<std::size_t>(sz));
    out.gamma_0t.resize(static_cast<std::size_t>(sz));
    out.sigma2.resize(static_cast<std::size_t>(sz));
    const double m_last = m(sz - 1);
    const double m_first = m(0);
    for (Eigen::Index j = 0; j < sz; ++j) {
        out.gamma_t1[static_cast<std::size_t>(j)] = p_last(j) / n - m(j) * m_last;
        out.gamma_0t[static_cast<std::size_t>(j)] = p_first(j) / n - m(j) * m_first;
        out.sigma2[static_cast<std::size_t>(j)] = p_diag(j) / n - m(j) * m(j);
    }
    return out;
}
}  // namespace

CovSections SectionSums::full() const {
    return sections_from_sums(s1_, p_last_, p_first_, p_diag_, n_);
}

CovSections SectionSums::leave_out(std::span<const double> row) const {
    if (n_ < 3) {
        throw FitError("cov sections: leave-one-out needs at least three curves");
    }
    const Eigen::Index sz = s1_.size();
    if (static_cast<Eigen::Index>(row.size()) != sz) {
        throw StructuralError("leave_out: row length mismatch");
    }
    Eigen::Map<const Eigen::VectorXd> r(row.data(), sz);
    const double r_last = r(sz - 1);
    const double r_first = r(0);
    return sections_from_sums(s1_ - r, p_last_ - r * r_last, p_first_ - r * r_first,
                              p_diag_ - r.cwiseProduct(r), n_ - 1);
}

VEstimate estimate_v_positive(const CovSections& sections, const Grid& grid, int h_mult) {
    const double u0 = sections.gamma_t1.front();
    if (u0 <= kSingularTol) {
        throw RegimeError("estimate_v_positive: u_hat(0) is not positive; use the delta_n path");
    }
    VEstimate out;
    out.v.resize(sections.gamma_0t.size());
    for (std::size_t j = 0; j < out.v.size(); ++j) {
        out.v[j] = sections.gamma_0t[j] / u0;
    }
    out.dv = fd_first(out.v, grid, h_mult);
    out.d2v = fd_second(out.v, grid, h_mult);
    return out;
}

VEstimate estimate_v_zero(const CovSections& sections, const Grid& grid, int h_mult, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw StructuralError("estimate_v_zero: delta must lie in (0,1)");
    }
    const int n = grid.segments();
    const int jd = std::min(static_cast<int>(std::ceil(delta / grid.delta() - 1e-9)), n - 1);

    const auto& u = sections.gamma_t1;
    const auto& s2 = sections.sigma2;
    const auto du = fd_first(u, grid, h_mult);
    const auto d2u = fd_second(u, grid, h_mult);
    const auto ds2 = fd_first(s2, grid, h_mult);
    const auto d2s2 = fd_second(s2, grid, h_mult);

    VEstimate out;
    const auto sz = static_cast<std::size_t>(grid.size());
    out.v.resize(sz);
    out.dv.resize(sz);
    out.d2v.resize(sz);
    for (int j = jd; j <= n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        if (u[k] <= kSingularTol) {
            throw SingularityError("estimate_v_zero: u_hat too small on [delta,1]");
        }
        const double num1 = ds2[k] * u[k] - du[k] * s2[k];
        out.v[k] = s2[k] / u[k];
        out.dv[k] = num1 / (u[k] * u[k]);
        out.d2v[k] = (u[k] * (d2s2[k] * u[k] - d2u[k] * s2[k]) - 2.0 * du[k] * num1) /
                     (u[k] * u[k] * u[k]);
    }
    // quadratic Taylor extension anchored at t_{jd}
    const auto kd = static_cast<std::size_t>(jd);
    const double td = grid.time(jd);
    for (int j = 0; j < jd; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double d = grid.time(j) - td;
        out.v[k] = out.v[kd] + d * out.dv[kd] + 0.5 * d * d * out.d2v[kd];
        out.dv[k] = out.dv[kd] + d * out.d2v[kd];
        out.d2v[k] = out.d2v[kd];
    }
    return out;
}

TriangularCovEstimate estimate_triangular(const CovSections& sections, const Grid& grid,
                                          SmoothingParams smoothing) {
    check_h(grid, smoothing.h_mult);
    if (smoothing.delta <= 0.0) {
        smoothing.delta = 2.0 * smoothing.h_mult * grid.delta();
    }
    const double s2max = *std::max_element(sections.sigma2.begin(), sections.sigma2.end());
    const CovRegime regime = sections.sigma2.front() < kRegimeThreshold * s2max
                                 ? CovRegime::U0Zero
                                 : CovRegime::U0Positive;

    VEstimate v = regime == CovRegime::U0Positive
                      ? estimate_v_positive(sections, grid, smoothing.h_mult)
                      : estimate_v_zero(sections, grid, smoothing.h_mult, smoothing.delta);

    std::vector<double> u = sections.gamma_t1;
    auto du = fd_first(u, grid, smoothing.h_mult);
    auto d2u = fd_second(u, grid, smoothing.h_mult);
    const auto& m = sections.mean;
    auto dm = fd_first(m, grid, smoothing.h_mult);
    auto d2m = fd_second(m, grid, smoothing.h_mult);

    // joint rescale so v(1) = 1 exactly (a no-op up to roundoff by
    // construction of both regimes)
    const double s = v.v.back();
    if (!(s > 0.0)) {
        throw SingularityError("estimate_triangular: v_hat(1) not positive");
    }
    for (std::size_t j = 0; j < u.size(); ++j) {
        u[j] *= s;
        du[j] *= s;
        d2u[j] *= s;
        v.v[j] /= s;
        v.dv[j] /= s;
        v.d2v[j] /= s;
    }

    TriangularSpec spec(grid, m, std::move(dm), std::move(d2m), std::move(u), std::move(du),
                        std::move(d2u), std::move(v.v), std::move(v.dv), std::move(v.d2v));
    return TriangularCovEstimate{std::move(spec), regime, smoothing};
}

namespace {

NonparamClassifier build_classifier(const TriangularCovEstimate& e0, const TriangularCovEstimate& e1,
                                    double p, int left_cut_mult) {
    LogRnEvaluator eval = compose_chain(e0.spec, e1.spec, left_cut_mult);
    return NonparamClassifier(std::move(eval), p, e0.regime, e1.regime);
}

}  // namespace

NonparamClassifier nonparam_plugin_classifier(const LabeledSample& train, int h_mult,
                                              std::optional<double> delta_n,
                                              std::optional<int> left_cut_mult) {
    if (train.count(0) < 2 || train.count(1) < 2) {
        throw FitError("nonparam plug-in: need at least two curves per class");
    }
    if (delta_n && (*delta_n >= 1.0 || *delta_n < 2.0 * h_mult * train.grid().delta())) {
        throw StructuralError("nonparam plug-in: delta_n must lie in [2h, 1)");
    }
    SmoothingParams sp{h_mult, delta_n.value_or(0.0)};
    const auto e0 = estimate_triangular(cov_sections(train.class_matrix(0)), train.grid(), sp);
    const auto e1 = estimate_triangular(cov_sections(train.class_matrix(1)), train.grid(), sp);
    return build_classifier(e0, e1, train.prior_p(), left_cut_mult.value_or(h_mult));
}

int select_h_cv(const LabeledSample& train, std::span<const int> h_mult_candidates,
                std::optional<double> delta_n) {
    if (h_mult_candidates.empty()) {
        throw StructuralError("select_h_cv: no candidates");
    }
    const CurveMatrix x0 = train.class_matrix(0);
    const CurveMatrix x1 = train.class_matrix(1);
    const SectionSums sums0(x0);
    const SectionSums sums1(x1);
    const double p = train.prior_p();
    const Grid& grid = train.grid();

    int best_h = -1;
    int best_errors = -1;
    for (int h : h_mult_candidates) {
        SmoothingParams sp{h, delta_n.value_or(0.0)};
        std::optional<TriangularCovEstimate> full0, full1;
        try {
            full0 = estimate_triangular(sums0.full(), grid, sp);
            full1 = estimate_triangular(sums1.full(), grid, sp);
        } catch (const Error&) {
            continue;  // candidate unusable on the full sample
        }
        int errors = 0;
        for (int cls = 0; cls < 2; ++cls) {
            const CurveMatrix& xc = cls == 0 ? x0 : x1;
            const SectionSums& sums = cls == 0 ? sums0 : sums1;
            const TriangularCovEstimate& other = cls == 0 ? *full1 : *full0;
            for (Eigen::Index i = 0; i < xc.rows(); ++i) {
                std::span<const double> row{xc.data() + i * xc.cols(),
                                            static_cast<std::size_t>(xc.cols())};
                try {
                    const auto est = estimate_triangular(sums.leave_out(row), grid, sp);
                    const auto clf = cls == 0 ? build_classifier(est, other, p, h)
                                              : build_classifier(other, est, p, h);
                    errors += (clf.label(row) != cls);
                } catch (const Error&) {
                    ++errors;
                }
            }
        }
        if (best_errors < 0 || errors < best_errors || (errors == best_errors && h < best_h)) {
            best_errors = errors;
            best_h = h;
        }
    }
    if (best_h < 0) {
        throw SelectionError("select_h_cv: every candidate errored out");
    }
    return best_h;
}

std::vector<int> default_h_candidates() {
    return {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
}

}  // namespace funcgauss
