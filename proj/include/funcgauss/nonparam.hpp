#pragma once

#include <optional>
#include <span>
#include <vector>

#include "funcgauss/sample.hpp"
#include "funcgauss/triangular.hpp"

namespace funcgauss {

// Finite-difference derivative estimates with bandwidth h = h_mult * delta.
// Interior nodes use central differences; the boundary zones use the
// one-sided variants anchored at t=0 resp. t=1, with the off-grid midpoint
// of the second-difference stencil filled in by linear interpolation.
std::vector<double> fd_first(std::span<const double> f, const Grid& grid, int h_mult);
std::vector<double> fd_second(std::span<const double> f, const Grid& grid, int h_mult);

// Pointwise sample mean of the rows.
std::vector<double> mean_hat(const CurveMatrix& curves);

// Empirical covariance table Gamma(s,t) with divisor n (not n-1).
Eigen::MatrixXd cov_hat(const CurveMatrix& curves);

// The three sections of the empirical covariance the triangular estimate
// needs, plus the mean.
struct CovSections {
    std::vector<double> mean;      // m_hat
    std::vector<double> gamma_t1;  // Gamma(t,1) = u_hat
    std::vector<double> gamma_0t;  // Gamma(0,t)
    std::vector<double> sigma2;    // Gamma(t,t)
    int n = 0;
};

CovSections cov_sections(const CurveMatrix& curves);

// Running sums for O(N) leave-one-out downdates of the sections.
class SectionSums {
public:
    explicit SectionSums(const CurveMatrix& curves);
    CovSections full() const;
    CovSections leave_out(std::span<const double> row) const;

private:
    Eigen::VectorXd s1_, p_last_, p_first_, p_diag_;
    int n_ = 0;
};

struct VEstimate {
    std::vector<double> v, dv, d2v;
};

// u(0) > 0 regime: v_hat = Gamma(0,.)/u_hat(0), derivatives by fd on it.
VEstimate estimate_v_positive(const CovSections& sections, const Grid& grid, int h_mult);

// u(0) = 0 regime: quotient sigma2/u on [delta,1] with the displayed
// quotient-rule derivatives, quadratic Taylor extension below delta.
VEstimate estimate_v_zero(const CovSections& sections, const Grid& grid, int h_mult, double delta);

enum class CovRegime { U0Positive, U0Zero };

struct SmoothingParams {
    int h_mult = 2;       // h = h_mult * grid delta
    double delta = 0.0;   // boundary cutoff for the u(0)=0 regime
};

struct TriangularCovEstimate {
    TriangularSpec spec;
    CovRegime regime;
    SmoothingParams smoothing;
};

// Full per-class estimate; regime auto-detected from sigma2_hat(0).
TriangularCovEstimate estimate_triangular(const CovSections& sections, const Grid& grid,
                                          SmoothingParams smoothing);

// The assembled plug-in rule: per-class triangular estimates, the
// chain, evaluation restricted to [left_cut, 1].
class NonparamClassifier {
public:
    NonparamClassifier(LogRnEvaluator eval, double p, CovRegime regime0, CovRegime regime1)
        : eval_(std::move(eval)), p_(p), regime0_(regime0), regime1_(regime1) {}

    int label(const Curve& x) const { return classify(eval_.log_rn(x), p_); }
    int label(std::span<const double> values) const { return classify(eval_.log_rn(values), p_); }
    double log_rn(const Curve& x) const { return eval_.log_rn(x); }
    CovRegime regime0() const { return regime0_; }
    CovRegime regime1() const { return regime1_; }

private:
    LogRnEvaluator eval_;
    double p_;
    CovRegime regime0_;
    CovRegime regime1_;
};

// delta_n defaults to 2h; left cut defaults to h itself.
NonparamClassifier nonparam_plugin_classifier(const LabeledSample& train, int h_mult,
                                              std::optional<double> delta_n = std::nullopt,
                                              std::optional<int> left_cut_mult = std::nullopt);

// Leave-one-out selection of h over multiples of the grid spacing.  A fold
// whose estimate cannot be built or evaluated counts as a misclassification;
// ties prefer the smallest h.
int select_h_cv(const LabeledSample& train, std::span<const int> h_mult_candidates,
                std::optional<double> delta_n = std::nullopt);

std::vector<int> default_h_candidates();

}  // namespace funcgauss
