#include "funcgauss/realdata.hpp"

#include <cmath>
#include <fstream>

#include "funcgauss/curve_csv.hpp"
#include "funcgauss/knn.hpp"
#include "funcgauss/nonparam.hpp"

namespace funcgauss {

LabeledSample trim_initial(const LabeledSample& sample, int trim_count) {
    if (trim_count == 0) return sample;
    if (trim_count < 0) {
        throw IngestError("trim count must be >= 0");
    }
    const int remaining = sample.grid().size() - trim_count;
    if (remaining < 3) {
        throw IngestError("trim leaves fewer than 3 samples per curve");
    }
    Grid grid(remaining - 1);
    CurveMatrix values = sample.values().rightCols(remaining);
    return LabeledSample(grid, std::move(values), sample.labels(), sample.prior());
}

LabeledSample apply_log_offset(const LabeledSample& sample, double offset) {
    const double min_value = sample.values().minCoeff();
    if (offset >= min_value) {
        throw IngestError("log-offset " + format_double(offset) +
                          " is not below the data minimum " + format_double(min_value));
    }
    CurveMatrix values = (sample.values().array() - offset).log();
    return LabeledSample(sample.grid(), std::move(values), sample.labels(), sample.prior());
}

int parse_trim(const std::string& text) {
    if (text.size() > 3 && text.substr(text.size() - 3) == "min") {
        const double minutes = parse_double(text.substr(0, text.size() - 3), "trim minutes");
        if (minutes < 0) throw IngestError("trim minutes must be >= 0");
        return static_cast<int>(std::lround(minutes * 6.0));  // 10-second sampling
    }
    const double count = parse_double(text, "trim count");
    if (count < 0 || count != std::floor(count)) {
        throw IngestError("trim count must be a nonnegative integer");
    }
    return static_cast<int>(count);
}

namespace {

LabeledSample without(const LabeledSample& sample, int skip) {
    CurveMatrix values(sample.size() - 1, sample.grid().size());
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(sample.size()) - 1);
    Eigen::Index r = 0;
    for (int i = 0; i < sample.size(); ++i) {
        if (i == skip) continue;
        values.row(r++) = sample.values().row(i);
        labels.push_back(sample.label(i));
    }
    return LabeledSample(sample.grid(), std::move(values), std::move(labels), sample.prior());
}

// Nested leave-one-out proportion correct for one classifier.
double loo_accuracy(const LabeledSample& sample, ClassifierId id, const CvGrids& cv) {
    int correct = 0;
    for (int i = 0; i < sample.size(); ++i) {
        const LabeledSample rest = without(sample, i);
        const Curve query = sample.curve(i);
        int lab = -1;
        try {
            switch (id) {
                case ClassifierId::NonparamPlugin: {
                    const int h = select_h_cv(rest, cv.h_multiples);
                    lab = nonparam_plugin_classifier(rest, h).label(query);
                    break;
                }
                case ClassifierId::KnnSup: {
                    const KnnConfig kc = select_knn_cv(rest, Semimetric::Kind::SupNorm, cv.k_max);
                    lab = knn_classify(rest, kc, query);
                    break;
                }
                case ClassifierId::KnnPls: {
                    const KnnConfig kc =
                        select_knn_cv(rest, Semimetric::Kind::Pls, cv.k_max, cv.d_max);
                    lab = knn_classify(rest, kc, query);
                    break;
                }
                default:
                    throw StructuralError("classifier not applicable to real data");
            }
        } catch (const Error&) {
            lab = -1;  // errored fold counts as a miss
        }
        correct += (lab == sample.label(i));
    }
    return static_cast<double>(correct) / sample.size();
}

}  // namespace

ExperimentReport run_real_data(const RealDataConfig& cfg, const LabeledSample& raw) {
    for (ClassifierId id : cfg.roster) {
        if (id == ClassifierId::Bayes || id == ClassifierId::ParamPlugin) {
            throw StructuralError("real-data roster supports knn-sup, knn-pls, nonparam-plugin");
        }
    }
    if (raw.count(0) < 2 || raw.count(1) < 2) {
        throw IngestError("real data needs both label values at least twice");
    }
    LabeledSample sample = trim_initial(raw, cfg.trim_count);
    if (cfg.transform) {
        sample = apply_log_offset(sample, cfg.transform->offset);
    }

    ExperimentReport report;
    report.scenario = "realdata:" + cfg.input_path;
    report.version = kVersion;
    report.roster = cfg.roster;
    report.runs.resize(1);
    for (ClassifierId id : cfg.roster) {
        const double acc = loo_accuracy(sample, id, cfg.cv);
        report.runs[0].accuracy[id] = acc;
        ClassifierStats st;
        st.mean = acc;
        st.sd = 0.0;
        st.runs_ok = 1;
        report.stats[id] = st;
    }
    return report;
}

ExperimentReport run_real_data(const RealDataConfig& cfg) {
    std::ifstream in(cfg.input_path);
    if (!in) {
        throw IngestError("cannot open input file '" + cfg.input_path + "'");
    }
    const LabeledSample raw = read_curves_csv(in);
    return run_real_data(cfg, raw);
}

}  // namespace funcgauss
