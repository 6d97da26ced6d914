#pragma once

#include <memory>
#include <span>
#include <vector>

#include "funcgauss/errors.hpp"

namespace funcgauss {

// Uniform time grid t_0 = 0 < t_1 < ... < t_N = 1 with spacing 1/N.
// Cheap to copy; curves sampled on the same grid share the point storage.
class Grid {
public:
    explicit Grid(int segments);
    static Grid from_points(std::vector<double> points);

    int segments() const { return static_cast<int>(pts_->size()) - 1; }
    int size() const { return static_cast<int>(pts_->size()); }
    double delta() const { return 1.0 / segments(); }
    double time(int j) const { return (*pts_)[static_cast<std::size_t>(j)]; }
    const std::vector<double>& points() const { return *pts_; }

    bool same_as(const Grid& other) const;

private:
    explicit Grid(std::shared_ptr<const std::vector<double>> pts) : pts_(std::move(pts)) {}
    std::shared_ptr<const std::vector<double>> pts_;
};

// A function observed at every grid node.
class Curve {
public:
    Curve(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
    double at_start() const { return values_.front(); }
    double at_end() const { return values_.back(); }
    int size() const { return static_cast<int>(values_.size()); }

private:
    Grid grid_;
    std::vector<double> values_;
};

// Trapezoidal rule for int_0^1 f(t) dt on the full grid.
double trapezoid(std::span<const double> values, const Grid& grid);

// Same rule restricted to [t_lo, 1].
double trapezoid_window(std::span<const double> values, const Grid& grid, int lo);

// Supremum distance max_j |a(t_j) - b(t_j)| between curves on one grid.
double sup_distance(const Curve& a, const Curve& b);
double sup_distance(std::span<const double> a, std::span<const double> b);

}  // namespace funcgauss
