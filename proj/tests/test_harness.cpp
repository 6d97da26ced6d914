#include <doctest.h>

#include <cmath>
#include <sstream>

#include "funcgauss/curve_csv.hpp"
#include "funcgauss/experiment.hpp"
#include "funcgauss/realdata.hpp"

using namespace funcgauss;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.scenario = "test";
    cfg.model0 = BrownianLaw{{1.5, 1.0, 0.0}, true};
    cfg.model1 = BrownianLaw{{0.0, 1.0, 0.0}, false};
    cfg.n_train = 20;
    cfg.n_test = 10;
    cfg.grid_n = 50;
    cfg.runs = 3;
    cfg.seed = 7;
    cfg.roster = {ClassifierId::Bayes, ClassifierId::ParamPlugin, ClassifierId::KnnSup};
    return cfg;
}

}  // namespace

TEST_CASE("config json round trip and validation") {
    const std::string text = R"({
      "scenario": "row1",
      "model0": {"family": "brownian", "c": 1.5, "sigma": 1.0, "theta": 0.0, "drift": true},
      "model1": {"family": "brownian", "sigma": 1.0},
      "n_train": 100, "n_test": 50, "grid_n": 50, "runs": 5, "seed": 42,
      "roster": ["bayes", "knn-sup"]
    })";
    const ExperimentConfig cfg = config_from_json(text);
    CHECK(cfg.scenario == "row1");
    CHECK(cfg.runs == 5);
    const ExperimentConfig again = config_from_json(config_to_json(cfg));
    CHECK(hash_config(cfg) == hash_config(again));

    // heteroscedastic brownian pair is mutually singular -> rejected
    const std::string bad = R"({
      "model0": {"family": "brownian", "sigma": 1.0},
      "model1": {"family": "brownian", "sigma": 2.0}
    })";
    CHECK_THROWS_AS(config_from_json(bad), SingularityError);

    // ou pair violating beta sigma^2 equality -> rejected
    const std::string bad_ou = R"({
      "model0": {"family": "ou", "beta": 1.0, "eta": 0.0, "sigma": 1.0, "start": "random"},
      "model1": {"family": "ou", "beta": 2.0, "eta": 0.0, "sigma": 1.0, "start": "random"}
    })";
    CHECK_THROWS_AS(config_from_json(bad_ou), SingularityError);

    // closed-form rules are prior-1/2 rules
    const std::string bad_prior = R"({
      "model0": {"family": "brownian", "c": 1.5, "sigma": 1.0, "drift": true},
      "model1": {"family": "brownian", "sigma": 1.0},
      "prior": 0.7, "roster": ["bayes"]
    })";
    CHECK_THROWS_AS(config_from_json(bad_prior), StructuralError);
}

TEST_CASE("identical models leave nothing to discriminate") {
    ExperimentConfig cfg;
    cfg.scenario = "null";
    cfg.model0 = BrownianLaw{{0.0, 1.0, 1.0}, false};
    cfg.model1 = BrownianLaw{{0.0, 1.0, 1.0}, false};
    cfg.n_train = 30;
    cfg.n_test = 50;
    cfg.runs = 20;
    cfg.seed = 11;
    cfg.roster = {ClassifierId::Bayes};
    const auto report = run_experiment(cfg, 2);
    CHECK(std::abs(report.stats.at(ClassifierId::Bayes).mean - 0.5) < 0.08);
}

TEST_CASE("same config and seed give byte-identical reports") {
    const ExperimentConfig cfg = small_config();
    const auto a = run_experiment(cfg, 4);
    const auto b = run_experiment(cfg, 1);  // thread count must not matter
    CHECK(emit_report(a, ReportFormat::Csv) == emit_report(b, ReportFormat::Csv));
    CHECK(emit_report(a, ReportFormat::Table) == emit_report(b, ReportFormat::Table));

    ExperimentConfig other = cfg;
    other.seed = 8;
    const auto c = run_experiment(other, 4);
    CHECK(emit_report(a, ReportFormat::Csv) != emit_report(c, ReportFormat::Csv));
}

TEST_CASE("report csv round-trips byte-identically and table uses 2 decimals") {
    const auto report = run_experiment(small_config(), 4);
    const std::string csv = emit_report(report, ReportFormat::Csv);
    const auto rows = parse_report_csv(csv);
    CHECK(rows.size() == 3);
    CHECK(rows[0].classifier == "bayes");
    CHECK(emit_summary_csv(rows) == csv);

    const std::string table = emit_report(report, ReportFormat::Table);
    CHECK(table.find("classifier") != std::string::npos);
}

TEST_CASE("hyperparameter selection never touches test data") {
    ExperimentConfig cfg = small_config();
    cfg.roster = {ClassifierId::KnnSup, ClassifierId::KnnPls, ClassifierId::NonparamPlugin};
    cfg.model0 = BrownianLaw{{1.5, 1.0, 1.0}, true};
    cfg.model1 = BrownianLaw{{0.0, 1.0, 1.0}, false};
    const Grid grid(cfg.grid_n);
    Rng rng(RngSeed{99});
    const auto train = sample_labeled(cfg.model0, cfg.model1, 20, 20, Prior::known(0.5), grid, rng);
    const auto test = sample_labeled(cfg.model0, cfg.model1, 10, 10, Prior::known(0.5), grid, rng);

    // corrupt every test label
    std::vector<int> flipped;
    for (int i = 0; i < test.size(); ++i) flipped.push_back(1 - test.label(i));
    const LabeledSample corrupted(grid, test.values(), flipped, Prior::known(0.5));

    const RunRecord a = evaluate_run(cfg, train, test);
    const RunRecord b = evaluate_run(cfg, train, corrupted);
    for (ClassifierId id : cfg.roster) {
        CHECK(a.params.at(id).h_mult == b.params.at(id).h_mult);
        CHECK(a.params.at(id).k == b.params.at(id).k);
        CHECK(a.params.at(id).pls_directions == b.params.at(id).pls_directions);
        CHECK(a.accuracy.at(id) == doctest::Approx(1.0 - b.accuracy.at(id)));
    }
}

TEST_CASE("curve csv round trip is byte identical") {
    Grid g(50);
    Rng rng(RngSeed{101});
    const auto sample = sample_labeled(BrownianLaw{{1.5, 1.0, 1.0}, true},
                                       BrownianLaw{{0.0, 1.0, 1.0}, false}, 5, 5,
                                       Prior::from_counts(), g, rng);
    const std::string csv = curves_to_csv(sample);
    const LabeledSample parsed = curves_from_csv(csv);
    CHECK(curves_to_csv(parsed) == csv);
    CHECK(parsed.size() == sample.size());
    CHECK(parsed.values() == sample.values());
}

TEST_CASE("curve csv diagnostics") {
    CHECK_THROWS_AS(curves_from_csv(""), IngestError);
    CHECK_THROWS_AS(curves_from_csv("label,0,0.5,1\n0,1.0,2.0\n"), IngestError);  // short row
    CHECK_THROWS_AS(curves_from_csv("label,0,0.5,1\n2,1.0,2.0,3.0\n"), IngestError);  // bad label
    CHECK_THROWS_AS(curves_from_csv("label,0,0.5,1\n0,1.0,x,3.0\n"), IngestError);
    CHECK_THROWS_AS(curves_from_csv("t0,0,0.5,1\n0,1,2,3\n"), IngestError);  // bad header
}

TEST_CASE("trim and transform") {
    Grid g(56);
    Rng rng(RngSeed{102});
    const auto sample = sample_labeled(ClassLaw{OUModel{0.4, 0.0, 1.0, StartKind::RandomStationary, 0.0}},
                                       ClassLaw{OUModel{0.8, 0.7, std::sqrt(0.5), StartKind::RandomStationary, 0.0}},
                                       4, 4, Prior::from_counts(), g, rng);

    const auto trimmed = trim_initial(sample, 6);
    CHECK(trimmed.grid().size() == 51);
    CHECK(trimmed.grid().time(0) == 0.0);
    CHECK(trimmed.grid().time(50) == 1.0);
    CHECK(trimmed.values()(0, 0) == sample.values()(0, 6));

    // identity on already-positive data: values pass through unchanged
    const auto same = trim_initial(sample, 0);
    CHECK(same.values() == sample.values());

    // log-offset rejects an offset at or above the minimum before computing
    const double min_value = sample.values().minCoeff();
    CHECK_THROWS_AS(apply_log_offset(sample, min_value), IngestError);
    CHECK_THROWS_AS(apply_log_offset(sample, min_value + 1.0), IngestError);

    const auto shifted_up = apply_log_offset(sample, min_value - 10.0);
    CHECK(shifted_up.values()(1, 3) ==
          doctest::Approx(std::log(sample.values()(1, 3) - (min_value - 10.0))));

    CHECK(parse_trim("18") == 18);
    CHECK(parse_trim("3min") == 18);
    CHECK_THROWS_AS(parse_trim("-1"), IngestError);
    CHECK_THROWS_AS(parse_trim("1.5"), IngestError);
}

TEST_CASE("bayes optimality in small monte carlo") {
    ExperimentConfig cfg = small_config();
    cfg.runs = 10;
    cfg.n_train = 50;
    cfg.roster = {ClassifierId::Bayes, ClassifierId::ParamPlugin, ClassifierId::KnnSup};
    const auto report = run_experiment(cfg, 4);
    const auto& bayes = report.stats.at(ClassifierId::Bayes);
    for (ClassifierId id : cfg.roster) {
        const auto& st = report.stats.at(id);
        const double se = st.sd / std::sqrt(static_cast<double>(st.runs_ok));
        CHECK(bayes.mean >= st.mean - 2.0 * se);
    }
}
