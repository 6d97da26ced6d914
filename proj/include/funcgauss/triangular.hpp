#pragma once

#include <span>
#include <vector>

#include "funcgauss/grid.hpp"

namespace funcgauss {

// Mean and triangular-covariance description of one Gaussian class:
// Gamma(s,t) = u(min(s,t)) v(max(s,t)), everything tabulated on the grid
// together with first and second derivatives.  Values may come from closed
// forms or from nonparametric estimates.
struct TriangularSpec {
    Grid grid;
    std::vector<double> m, dm, d2m;
    std::vector<double> u, du, d2u;
    std::vector<double> v, dv, d2v;

    TriangularSpec(Grid g, std::vector<double> m_, std::vector<double> dm_, std::vector<double> d2m_,
                   std::vector<double> u_, std::vector<double> du_, std::vector<double> d2u_,
                   std::vector<double> v_, std::vector<double> dv_, std::vector<double> d2v_);
};

// Absolute tolerance below which a denominator counts as zero and the two
// measures are treated as (possibly) mutually singular.
inline constexpr double kSingularTol = 1e-10;
// Threshold below which u(0) counts as exactly zero (degenerate start).
inline constexpr double kUZeroTol = 1e-12;

// log dP_{0,Gamma0}/dP_{0,Gamma1}(x), both means zero, evaluated on the
// window [t_lo, 1].
double log_rn_zero_mean(const TriangularSpec& spec0, const TriangularSpec& spec1, const Curve& x,
                        int left_cut = 0);

// log dP_{m,Gamma}/dP_{0,Gamma}(x) on the window [t_lo, 1].
double log_rn_mean_shift(const TriangularSpec& spec, const Curve& x, int left_cut = 0);

// Full chain log dP_{m0,Gamma0}/dP_{m1,Gamma1} assembled from the three
// elementary factors.  The evaluator collapses the chain to a quadratic
// functional of the curve at construction, so evaluation is two dot
// products.
class LogRnEvaluator {
public:
    double log_rn(const Curve& x) const;
    double log_rn(std::span<const double> values) const;

    int left_cut() const { return left_; }
    const Grid& grid() const { return grid_; }

    friend LogRnEvaluator compose_chain(const TriangularSpec& spec0, const TriangularSpec& spec1,
                                        int left_cut);

private:
    LogRnEvaluator(Grid g, int left) : grid_(std::move(g)), left_(left) {}
    Grid grid_;
    int left_;
    double constant_ = 0.0;
    std::vector<double> lin_;   // weight on x(t_j), j >= left (boundary + quadrature terms)
    std::vector<double> quad_;  // weight on x(t_j)^2
};

LogRnEvaluator compose_chain(const TriangularSpec& spec0, const TriangularSpec& spec1,
                             int left_cut = 0);

// Regression function eta(x) = (1-p) / (p f + 1-p) from log f, computed
// without overflowing for huge |log f|.
double eta(double log_rn, double p);

// Bayes decision: 1 iff eta > 1/2, ties to 0.
int classify(double log_rn, double p);

}  // namespace funcgauss
