#include "funcgauss/sample.hpp"

#include <cmath>

namespace funcgauss {

Prior Prior::known(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw StructuralError("prior p must lie in (0,1)");
    }
    Prior out;
    out.known_ = true;
    out.p_ = p;
    return out;
}

LabeledSample::LabeledSample(Grid grid, CurveMatrix values, std::vector<int> labels, Prior prior)
    : grid_(std::move(grid)), values_(std::move(values)), labels_(std::move(labels)), prior_(prior) {
    if (labels_.empty()) {
        throw StructuralError("labeled sample needs at least one curve");
    }
    if (values_.rows() != static_cast<Eigen::Index>(labels_.size()) ||
        values_.cols() != grid_.size()) {
        throw StructuralError("labeled sample shape mismatch");
    }
    for (int y : labels_) {
        if (y != 0 && y != 1) {
            throw StructuralError("labels must be 0 or 1");
        }
    }
    if (!values_.allFinite()) {
        throw StructuralError("curve values must be finite");
    }
}

Curve LabeledSample::curve(int i) const {
    auto r = row(i);
    return Curve(grid_, std::vector<double>(r.begin(), r.end()));
}

int LabeledSample::count(int label) const {
    int c = 0;
    for (int y : labels_) c += (y == label);
    return c;
}

CurveMatrix LabeledSample::class_matrix(int label) const {
    CurveMatrix out(count(label), values_.cols());
    Eigen::Index r = 0;
    for (int i = 0; i < size(); ++i) {
        if (labels_[static_cast<std::size_t>(i)] == label) {
            out.row(r++) = values_.row(i);
        }
    }
    return out;
}

double LabeledSample::prior_p() const {
    if (prior_.is_known()) return prior_.known_value();
    return static_cast<double>(count(0)) / size();
}

}  // namespace funcgauss
