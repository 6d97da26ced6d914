#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "funcgauss/grid.hpp"

namespace funcgauss {

// Row-per-curve storage so a single observation is contiguous.
using CurveMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// P(Y=0), either known a priori (simulations) or estimated from class counts.
class Prior {
public:
    static Prior known(double p);
    static Prior from_counts() { return Prior(); }

    bool is_known() const { return known_; }
    double known_value() const { return p_; }

private:
    Prior() = default;
    bool known_ = false;
    double p_ = 0.5;
};

// Binary-labeled curves on a shared grid.
class LabeledSample {
public:
    LabeledSample(Grid grid, CurveMatrix values, std::vector<int> labels, Prior prior);

    const Grid& grid() const { return grid_; }
    int size() const { return static_cast<int>(labels_.size()); }
    const CurveMatrix& values() const { return values_; }
    const std::vector<int>& labels() const { return labels_; }
    int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

    std::span<const double> row(int i) const {
        return {values_.data() + static_cast<std::ptrdiff_t>(i) * values_.cols(),
                static_cast<std::size_t>(values_.cols())};
    }
    Curve curve(int i) const;

    int count(int label) const;
    // Curves of one class stacked into their own matrix.
    CurveMatrix class_matrix(int label) const;

    const Prior& prior() const { return prior_; }
    // Known prior or the class-count estimate n0/n.
    double prior_p() const;

private:
    Grid grid_;
    CurveMatrix values_;
    std::vector<int> labels_;
    Prior prior_;
};

}  // namespace funcgauss
