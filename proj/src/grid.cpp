#include "funcgauss/grid.hpp"

#include <algorithm>
#include <cmath>

namespace funcgauss {

namespace {
constexpr double kGridTol = 1e-9;
}

Grid::Grid(int segments) {
    if (segments < 2) {
        throw StructuralError("grid needs at least 2 segments");
    }
    auto pts = std::make_shared<std::vector<double>>();
    pts->reserve(static_cast<std::size_t>(segments) + 1);
    for (int j = 0; j <= segments; ++j) {
        pts->push_back(static_cast<double>(j) / segments);
    }
    pts_ = std::move(pts);
}

Grid Grid::from_points(std::vector<double> points) {
    const int n = static_cast<int>(points.size()) - 1;
    if (n < 2) {
        throw StructuralError("grid needs at least 3 points");
    }
    if (std::abs(points.front()) > kGridTol || std::abs(points.back() - 1.0) > kGridTol) {
        throw StructuralError("grid must start at 0 and end at 1");
    }
    const double delta = 1.0 / n;
    for (int j = 0; j <= n; ++j) {
        if (!std::isfinite(points[static_cast<std::size_t>(j)]) ||
            std::abs(points[static_cast<std::size_t>(j)] - j * delta) > kGridTol) {
            throw StructuralError("grid points must be uniform on [0,1]");
        }
    }
    return Grid(std::make_shared<const std::vector<double>>(std::move(points)));
}

bool Grid::same_as(const Grid& other) const {
    if (pts_ == other.pts_) return true;
    return segments() == other.segments();
}

Curve::Curve(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != grid_.size()) {
        throw StructuralError("curve length does not match grid");
    }
    for (double x : values_) {
        if (!std::isfinite(x)) {
            throw StructuralError("curve values must be finite");
        }
    }
}

double trapezoid(std::span<const double> values, const Grid& grid) {
    return trapezoid_window(values, grid, 0);
}

double trapezoid_window(std::span<const double> values, const Grid& grid, int lo) {
    if (static_cast<int>(values.size()) != grid.size()) {
        throw StructuralError("trapezoid: length mismatch with grid");
    }
    const int n = grid.segments();
    if (lo < 0 || lo >= n) {
        throw StructuralError("trapezoid: window start out of range");
    }
    double acc = 0.5 * (values[static_cast<std::size_t>(lo)] + values[static_cast<std::size_t>(n)]);
    for (int j = lo + 1; j < n; ++j) {
        acc += values[static_cast<std::size_t>(j)];
    }
    return acc * grid.delta();
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw StructuralError("sup_distance: length mismatch");
    }
    double best = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        best = std::max(best, std::abs(a[j] - b[j]));
    }
    return best;
}

double sup_distance(const Curve& a, const Curve& b) {
    if (!a.grid().same_as(b.grid())) {
        throw StructuralError("sup_distance: curves on different grids");
    }
    return sup_distance(std::span<const double>(a.values()), std::span<const double>(b.values()));
}

}  // namespace funcgauss
