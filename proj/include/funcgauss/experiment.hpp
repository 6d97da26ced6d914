#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "funcgauss/models.hpp"
#include "funcgauss/sample.hpp"

namespace funcgauss {

inline constexpr const char* kVersion = "0.1.0";

enum class ClassifierId { Bayes, ParamPlugin, NonparamPlugin, KnnSup, KnnPls };

std::string classifier_name(ClassifierId id);
ClassifierId classifier_from_name(const std::string& name);

struct CvGrids {
    int k_max = 10;
    int d_max = 5;
    std::vector<int> h_multiples = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
};

// One Monte Carlo scenario: a model pair plus the sampling protocol.
struct ExperimentConfig {
    std::string scenario;
    ClassLaw model0;
    ClassLaw model1;
    int n_train = 100;  // per class
    int n_test = 50;    // per class
    int grid_n = 50;
    int runs = 200;
    std::uint64_t seed = 42;
    double prior_p = 0.5;
    std::vector<ClassifierId> roster;
    CvGrids cv;

    void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& cfg);

struct SelectedParams {
    std::optional<int> h_mult;
    std::optional<int> k;
    std::optional<int> pls_directions;
};

struct RunRecord {
    std::map<ClassifierId, double> accuracy;        // only classifiers that succeeded
    std::map<ClassifierId, std::string> error;      // failure messages
    std::map<ClassifierId, SelectedParams> params;  // selected hyperparameters
};

struct ClassifierStats {
    double mean = 0.0;
    double sd = 0.0;
    int runs_ok = 0;
    int runs_error = 0;
};

struct ExperimentReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    std::string version;
    std::vector<ClassifierId> roster;
    std::map<ClassifierId, ClassifierStats> stats;
    std::vector<RunRecord> runs;
};

// Full Monte Carlo protocol: per run a fresh train/test draw, CV on the
// training set only, test accuracy per roster classifier.  Deterministic
// given the seed; runs execute in parallel and are aggregated in index
// order.
ExperimentReport run_experiment(const ExperimentConfig& cfg, int threads = 0);

enum class ReportFormat { Table, Csv };

std::string emit_report(const ExperimentReport& report, ReportFormat format);

// Summary rows parsed back from the CSV emission (ingestion side of the
// round-trip contract).
struct ReportSummaryRow {
    std::string classifier;
    double mean = 0.0;
    double sd = 0.0;
    int runs_ok = 0;
};
std::vector<ReportSummaryRow> parse_report_csv(const std::string& text);
std::string emit_summary_csv(const std::vector<ReportSummaryRow>& rows);

std::uint64_t hash_config(const ExperimentConfig& cfg);

// Evaluates one run with externally supplied train/test samples (exposed so
// tests can check that hyperparameter selection never touches test data).
RunRecord evaluate_run(const ExperimentConfig& cfg, const LabeledSample& train,
                       const LabeledSample& test);

}  // namespace funcgauss
