#pragma once

#include <functional>

#include "funcgauss/models.hpp"
#include "funcgauss/sample.hpp"

namespace funcgauss {

// Appendix-style parameter estimates for the Brownian pair.  theta estimates
// are variances (they multiply 1/theta_i^2 slots in the start-density ratio).
struct BrownianFit {
    double c_hat = 0.0;
    double sigma2_hat = 0.0;
    double theta2_hat_0 = 0.0;
    double theta2_hat_1 = 0.0;
};

// Per-class OU estimates from the pooled AR(1) regression on consecutive
// nodes.
struct OUFit {
    double a_hat = 0.0;
    double beta_hat = 0.0;
    double eta_hat = 0.0;
    double sigma2_hat = 0.0;
    StartKind start = StartKind::Deterministic;
};

struct OUParams {
    double beta = 1.0;
    double eta = 0.0;
    double sigma2 = 1.0;
};

BrownianFit fit_brownian(const LabeledSample& train);
OUFit fit_ou(const CurveMatrix& class_curves, const Grid& grid, StartKind start);

// log dmu0/dmu1 for the Brownian random-start pair (theta2_i are variances).
double brownian_random_log_rn(const Curve& x, double c, double sigma2, double theta2_0,
                              double theta2_1);

// Decision statistics proportional to log dmu0/dmu1 for the two OU pairs;
// classify to class 1 when negative.  Derived under the equivalence
// condition beta0 sigma0^2 = beta1 sigma1^2 but evaluable for any inputs
// (plug-in estimates are substituted as-is).
double ou_det_statistic(const Curve& x, const OUParams& p0, const OUParams& p1);
double ou_random_statistic(const Curve& x, const OUParams& p0, const OUParams& p1);

// Closed-form Bayes rules at prior 1/2.
int bayes_brownian_det(const Curve& x, double c, double sigma);
int bayes_brownian_random(const Curve& x, double c, double sigma, double theta0, double theta1);
int bayes_ou_det(const Curve& x, const OUParams& p0, const OUParams& p1);     // checks admissibility
int bayes_ou_random(const Curve& x, const OUParams& p0, const OUParams& p1);

using CurveClassifier = std::function<int(const Curve&)>;

enum class Family { Brownian, OU };

// Fits the declared family on the training sample and binds the matching
// closed-form rule.
CurveClassifier parametric_plugin_classifier(const LabeledSample& train, Family family,
                                             StartKind start);

}  // namespace funcgauss
