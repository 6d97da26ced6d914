#include "funcgauss/parametric.hpp"

#include <cmath>

namespace funcgauss {

namespace {
constexpr double kOUAdmissTol = 1e-8;
}

BrownianFit fit_brownian(const LabeledSample& train) {
    const int n0 = train.count(0);
    const int n1 = train.count(1);
    if (n0 < 2 || n1 < 2) {
        throw FitError("fit_brownian: need at least two curves per class");
    }
    const CurveMatrix x0 = train.class_matrix(0);
    const CurveMatrix x1 = train.class_matrix(1);
    const Eigen::RowVectorXd m0 = x0.colwise().mean();
    const Eigen::RowVectorXd m1 = x1.colwise().mean();
    const Grid& g = train.grid();
    const int last = g.size() - 1;

    double num = 0.0, den = 0.0;
    for (int j = 1; j < g.size(); ++j) {
        const double t = g.time(j);
        num += m0(j) * t;
        den += t * t;
    }

    BrownianFit fit;
    fit.c_hat = num / den;
    fit.theta2_hat_0 = (x0.col(0).array() - m0(0)).square().sum() / (n0 - 1);
    fit.theta2_hat_1 = (x1.col(0).array() - m1(0)).square().sum() / (n1 - 1);
    const double rss0 = (x0.col(last).array() - m0(last) - x0.col(0).array() + m0(0)).square().sum();
    const double rss1 = (x1.col(last).array() - m1(last) - x1.col(0).array() + m1(0)).square().sum();
    fit.sigma2_hat = (rss0 + rss1) / (n0 + n1 - 1);
    return fit;
}

OUFit fit_ou(const CurveMatrix& class_curves, const Grid& grid, StartKind start) {
    const Eigen::Index n = class_curves.rows();
    const Eigen::Index cols = class_curves.cols();
    if (cols != grid.size()) {
        throw StructuralError("fit_ou: curve length does not match grid");
    }
    const Eigen::Index pairs = n * (cols - 1);
    if (pairs < 3) {
        throw FitError("fit_ou: need at least three transitions");
    }
    const auto x = class_curves.leftCols(cols - 1);
    const auto y = class_curves.rightCols(cols - 1);
    const double sx = x.sum();
    const double sy = y.sum();
    const double sxx = x.array().square().sum();
    const double sxy = (x.array() * y.array()).sum();
    const double m = static_cast<double>(pairs);
    const double den = sxx - sx * sx / m;
    if (den <= 0.0) {
        throw FitError("fit_ou: degenerate regressor");
    }
    const double a = (sxy - sx * sy / m) / den;
    if (!(a > 0.0 && a < 1.0)) {
        throw FitError("fit_ou: a_hat outside (0,1)");
    }
    const double b = (sy - a * sx) / m;

    OUFit fit;
    fit.start = start;
    fit.a_hat = a;
    fit.beta_hat = -std::log(a) / grid.delta();
    fit.eta_hat = start == StartKind::Deterministic ? b / (1.0 - a) : class_curves.mean();
    const double rss = (y.array() - a * x.array() - b).square().sum();
    fit.sigma2_hat = rss / ((1.0 - a * a) * (m - 2.0));
    return fit;
}

double brownian_random_log_rn(const Curve& x, double c, double sigma2, double theta2_0,
                              double theta2_1) {
    if (!(sigma2 > 0.0) || !(theta2_0 > 0.0) || !(theta2_1 > 0.0)) {
        throw StructuralError("brownian_random_log_rn: variances must be positive");
    }
    const double x0 = x.at_start();
    const double x1 = x.at_end();
    return 0.5 * c / sigma2 * (2.0 * (x1 - x0) - c) +
           0.5 * (1.0 / theta2_1 - 1.0 / theta2_0) * x0 * x0 +
           0.5 * std::log(theta2_1 / theta2_0);
}

double ou_det_statistic(const Curve& x, const OUParams& p0, const OUParams& p1) {
    const double i1 = trapezoid(x.values(), x.grid());
    std::vector<double> sq(x.values().size());
    for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = x.values()[j] * x.values()[j];
    const double i2 = trapezoid(sq, x.grid());
    const double x1 = x.at_end();
    const double b0 = p0.beta, e0 = p0.eta, b1 = p1.beta, e1 = p1.eta;
    return b0 * b0 * (2.0 * p0.sigma2 - e0 * e0) - b1 * b1 * (2.0 * p1.sigma2 - e1 * e1) +
           2.0 * x1 * (e0 * b0 - e1 * b1) + 2.0 * (e0 * b0 * b0 - e1 * b1 * b1) * i1 +
           (b1 - b0) * x1 * x1 + (b1 * b1 - b0 * b0) * i2;
}

double ou_random_statistic(const Curve& x, const OUParams& p0, const OUParams& p1) {
    const double i1 = trapezoid(x.values(), x.grid());
    std::vector<double> sq(x.values().size());
    for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = x.values()[j] * x.values()[j];
    const double i2 = trapezoid(sq, x.grid());
    const double x0 = x.at_start();
    const double x1 = x.at_end();
    const double b0 = p0.beta, e0 = p0.eta, b1 = p1.beta, e1 = p1.eta;
    const double rhs = 2.0 * (b0 * b0 * p0.sigma2 - b1 * b1 * p1.sigma2) +
                       b1 * e1 * e1 * (2.0 + b1) - b0 * e0 * e0 * (2.0 + b0) +
                       2.0 * (x0 + x1) * (e0 * b0 - e1 * b1) +
                       2.0 * (e0 * b0 * b0 - e1 * b1 * b1) * i1 +
                       (b1 - b0) * (x0 * x0 + x1 * x1) + (b1 * b1 - b0 * b0) * i2;
    const double lhs = 2.0 * b1 * p1.sigma2 * (std::log(b1) - std::log(b0));
    return rhs - lhs;
}

int bayes_brownian_det(const Curve& x, double c, double sigma) {
    if (!(c > 0.0) || !(sigma > 0.0)) {
        throw StructuralError("bayes_brownian_det: c and sigma must be positive");
    }
    return x.at_end() < c / 2.0 ? 1 : 0;
}

int bayes_brownian_random(const Curve& x, double c, double sigma, double theta0, double theta1) {
    if (!(theta0 > 0.0) || !(theta1 > 0.0)) {
        throw StructuralError("bayes_brownian_random: thetas must be positive");
    }
    const double lr =
        brownian_random_log_rn(x, c, sigma * sigma, theta0 * theta0, theta1 * theta1);
    return lr < 0.0 ? 1 : 0;
}

int bayes_ou_det(const Curve& x, const OUParams& p0, const OUParams& p1) {
    if (std::abs(p0.beta * p0.sigma2 - p1.beta * p1.sigma2) > kOUAdmissTol) {
        throw SingularityError("bayes_ou_det: beta0 sigma0^2 != beta1 sigma1^2");
    }
    return ou_det_statistic(x, p0, p1) < 0.0 ? 1 : 0;
}

int bayes_ou_random(const Curve& x, const OUParams& p0, const OUParams& p1) {
    return ou_random_statistic(x, p0, p1) < 0.0 ? 1 : 0;
}

CurveClassifier parametric_plugin_classifier(const LabeledSample& train, Family family,
                                             StartKind start) {
    if (family == Family::Brownian) {
        const BrownianFit fit = fit_brownian(train);
        if (start == StartKind::Deterministic) {
            return [fit](const Curve& x) { return x.at_end() < fit.c_hat / 2.0 ? 1 : 0; };
        }
        if (!(fit.theta2_hat_0 > 0.0) || !(fit.theta2_hat_1 > 0.0)) {
            throw FitError("parametric plug-in: estimated start variance is zero");
        }
        return [fit](const Curve& x) {
            return brownian_random_log_rn(x, fit.c_hat, fit.sigma2_hat, fit.theta2_hat_0,
                                          fit.theta2_hat_1) < 0.0
                       ? 1
                       : 0;
        };
    }
    const OUFit f0 = fit_ou(train.class_matrix(0), train.grid(), start);
    const OUFit f1 = fit_ou(train.class_matrix(1), train.grid(), start);
    const OUParams p0{f0.beta_hat, f0.eta_hat, f0.sigma2_hat};
    const OUParams p1{f1.beta_hat, f1.eta_hat, f1.sigma2_hat};
    if (start == StartKind::Deterministic) {
        return [p0, p1](const Curve& x) { return ou_det_statistic(x, p0, p1) < 0.0 ? 1 : 0; };
    }
    return [p0, p1](const Curve& x) { return ou_random_statistic(x, p0, p1) < 0.0 ? 1 : 0; };
}

}  // namespace funcgauss
