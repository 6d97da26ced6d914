#pragma once

#include <optional>
#include <string>
#include <vector>

#include "funcgauss/experiment.hpp"
#include "funcgauss/sample.hpp"

namespace funcgauss {

// x -> log(x - offset); requires offset < min over all data.
struct LogOffsetTransform {
    double offset = 0.0;
};

struct RealDataConfig {
    std::string input_path;
    std::optional<LogOffsetTransform> transform;  // empty = identity
    int trim_count = 0;                           // leading samples dropped per curve
    std::vector<ClassifierId> roster = {ClassifierId::KnnSup, ClassifierId::KnnPls,
                                        ClassifierId::NonparamPlugin};
    CvGrids cv;
};

// Drops the first trim_count samples and renormalizes the remaining nodes to
// a uniform grid on [0,1].
LabeledSample trim_initial(const LabeledSample& sample, int trim_count);

// Applies the log-offset transform to every value; offset >= min value is an
// ingestion error raised before any computation.
LabeledSample apply_log_offset(const LabeledSample& sample, double offset);

// "3min" -> minutes at the 10-second sampling rate (6 samples per minute);
// plain integers are sample counts.
int parse_trim(const std::string& text);

// Leave-one-out evaluation of each roster classifier over the full sample,
// hyperparameters re-selected for every held-out curve.
ExperimentReport run_real_data(const RealDataConfig& cfg);
ExperimentReport run_real_data(const RealDataConfig& cfg, const LabeledSample& raw);

}  // namespace funcgauss
