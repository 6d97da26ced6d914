#include "funcgauss/experiment.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "funcgauss/curve_csv.hpp"
#include "funcgauss/knn.hpp"
#include "funcgauss/nonparam.hpp"
#include "funcgauss/parametric.hpp"

namespace funcgauss {

using nlohmann::json;

std::string classifier_name(ClassifierId id) {
    switch (id) {
        case ClassifierId::Bayes: return "bayes";
        case ClassifierId::ParamPlugin: return "param-plugin";
        case ClassifierId::NonparamPlugin: return "nonparam-plugin";
        case ClassifierId::KnnSup: return "knn-sup";
        case ClassifierId::KnnPls: return "knn-pls";
    }
    throw StructuralError("unknown classifier id");
}

ClassifierId classifier_from_name(const std::string& name) {
    if (name == "bayes") return ClassifierId::Bayes;
    if (name == "param-plugin") return ClassifierId::ParamPlugin;
    if (name == "nonparam-plugin") return ClassifierId::NonparamPlugin;
    if (name == "knn-sup") return ClassifierId::KnnSup;
    if (name == "knn-pls") return ClassifierId::KnnPls;
    throw IngestError("unknown classifier '" + name + "'");
}

namespace {

struct FamilyInfo {
    Family family;
    StartKind start;
};

FamilyInfo family_info(const ClassLaw& law) {
    if (std::holds_alternative<BrownianLaw>(law)) {
        const auto& b = std::get<BrownianLaw>(law);
        return {Family::Brownian,
                b.model.theta == 0.0 ? StartKind::Deterministic : StartKind::RandomStationary};
    }
    return {Family::OU, std::get<OUModel>(law).start};
}

json law_to_json(const ClassLaw& law) {
    json j;
    if (std::holds_alternative<BrownianLaw>(law)) {
        const auto& b = std::get<BrownianLaw>(law);
        j["family"] = "brownian";
        j["c"] = b.model.c;
        j["sigma"] = b.model.sigma;
        j["theta"] = b.model.theta;
        j["drift"] = b.with_drift;
    } else {
        const auto& m = std::get<OUModel>(law);
        j["family"] = "ou";
        j["beta"] = m.beta;
        j["eta"] = m.eta;
        j["sigma"] = m.sigma;
        j["start"] = m.start == StartKind::Deterministic ? "deterministic" : "random";
    }
    return j;
}

ClassLaw law_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "brownian") {
        BrownianLaw law;
        law.model.c = j.value("c", 0.0);
        law.model.sigma = j.at("sigma").get<double>();
        law.model.theta = j.value("theta", 0.0);
        law.with_drift = j.value("drift", false);
        return law;
    }
    if (family == "ou") {
        OUModel m;
        m.beta = j.at("beta").get<double>();
        m.eta = j.at("eta").get<double>();
        m.sigma = j.at("sigma").get<double>();
        const std::string start = j.value("start", "deterministic");
        if (start == "deterministic") {
            m.start = StartKind::Deterministic;
        } else if (start == "random") {
            m.start = StartKind::RandomStationary;
        } else {
            throw IngestError("ou start must be 'deterministic' or 'random'");
        }
        return m;
    }
    throw IngestError("model family must be 'brownian' or 'ou'");
}

}  // namespace

void ExperimentConfig::validate() const {
    if (runs < 1) throw StructuralError("config: runs must be >= 1");
    if (roster.empty()) throw StructuralError("config: roster must not be empty");
    if (n_train < 2 || n_test < 1) throw StructuralError("config: sample sizes too small");
    if (grid_n < 2) throw StructuralError("config: grid_n must be >= 2");
    if (!(prior_p > 0.0 && prior_p < 1.0)) throw StructuralError("config: prior out of (0,1)");

    const bool same_family = model0.index() == model1.index();
    // equivalence admissibility of the model pair
    if (same_family && std::holds_alternative<BrownianLaw>(model0)) {
        const auto& b0 = std::get<BrownianLaw>(model0).model;
        const auto& b1 = std::get<BrownianLaw>(model1).model;
        if (b0.sigma != b1.sigma) {
            throw SingularityError(
                "config: brownian pair with sigma0 != sigma1 gives mutually singular classes");
        }
        if ((b0.theta == 0.0) != (b1.theta == 0.0)) {
            throw SingularityError("config: brownian pair must have theta=0 for both or neither");
        }
    }
    if (same_family && std::holds_alternative<OUModel>(model0)) {
        const auto& m0 = std::get<OUModel>(model0);
        const auto& m1 = std::get<OUModel>(model1);
        if (m0.start != m1.start) {
            throw SingularityError("config: ou pair must share the start kind");
        }
        if (std::abs(m0.beta * m0.sigma * m0.sigma - m1.beta * m1.sigma * m1.sigma) > 1e-8) {
            throw SingularityError(
                "config: ou pair needs beta0 sigma0^2 = beta1 sigma1^2 (equivalence)");
        }
    }
    for (ClassifierId id : roster) {
        if ((id == ClassifierId::Bayes || id == ClassifierId::ParamPlugin) && !same_family) {
            throw StructuralError("config: bayes/param-plugin require a same-family model pair");
        }
        // the closed-form rules are prior-1/2 decision rules
        if ((id == ClassifierId::Bayes || id == ClassifierId::ParamPlugin) && prior_p != 0.5) {
            throw StructuralError("config: bayes/param-plugin require prior 0.5");
        }
    }
    if (cv.k_max < 1 || cv.d_max < 1 || cv.h_multiples.empty()) {
        throw StructuralError("config: cv grids must be nonempty");
    }
}

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw IngestError(std::string("config: invalid json: ") + e.what());
    }
    try {
        ExperimentConfig cfg;
        cfg.scenario = j.value("scenario", std::string("unnamed"));
        cfg.model0 = law_from_json(j.at("model0"));
        cfg.model1 = law_from_json(j.at("model1"));
        cfg.n_train = j.value("n_train", 100);
        cfg.n_test = j.value("n_test", 50);
        cfg.grid_n = j.value("grid_n", 50);
        cfg.runs = j.value("runs", 200);
        cfg.seed = j.value("seed", static_cast<std::uint64_t>(42));
        cfg.prior_p = j.value("prior", 0.5);
        if (j.contains("roster")) {
            for (const auto& name : j.at("roster")) {
                cfg.roster.push_back(classifier_from_name(name.get<std::string>()));
            }
        } else {
            cfg.roster = {ClassifierId::Bayes, ClassifierId::ParamPlugin,
                          ClassifierId::NonparamPlugin, ClassifierId::KnnSup, ClassifierId::KnnPls};
        }
        if (j.contains("cv")) {
            const auto& c = j.at("cv");
            cfg.cv.k_max = c.value("k_max", 10);
            cfg.cv.d_max = c.value("d_max", 5);
            if (c.contains("h_multiples")) {
                cfg.cv.h_multiples = c.at("h_multiples").get<std::vector<int>>();
            }
        }
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw IngestError(std::string("config: ") + e.what());
    }
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["scenario"] = cfg.scenario;
    j["model0"] = law_to_json(cfg.model0);
    j["model1"] = law_to_json(cfg.model1);
    j["n_train"] = cfg.n_train;
    j["n_test"] = cfg.n_test;
    j["grid_n"] = cfg.grid_n;
    j["runs"] = cfg.runs;
    j["seed"] = cfg.seed;
    j["prior"] = cfg.prior_p;
    json roster = json::array();
    for (ClassifierId id : cfg.roster) roster.push_back(classifier_name(id));
    j["roster"] = roster;
    j["cv"] = {{"k_max", cfg.cv.k_max}, {"d_max", cfg.cv.d_max}, {"h_multiples", cfg.cv.h_multiples}};
    return j.dump(2);
}

std::uint64_t hash_config(const ExperimentConfig& cfg) {
    const std::string canon = config_to_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

CurveClassifier bayes_rule(const ExperimentConfig& cfg) {
    const FamilyInfo info = family_info(cfg.model0);
    if (info.family == Family::Brownian) {
        const auto& b0 = std::get<BrownianLaw>(cfg.model0).model;
        const auto& b1 = std::get<BrownianLaw>(cfg.model1).model;
        if (info.start == StartKind::Deterministic) {
            return [b0](const Curve& x) { return bayes_brownian_det(x, b0.c, b0.sigma); };
        }
        return [b0, b1](const Curve& x) {
            return bayes_brownian_random(x, b0.c, b0.sigma, b0.theta, b1.theta);
        };
    }
    const auto& m0 = std::get<OUModel>(cfg.model0);
    const auto& m1 = std::get<OUModel>(cfg.model1);
    const OUParams p0{m0.beta, m0.eta, m0.sigma * m0.sigma};
    const OUParams p1{m1.beta, m1.eta, m1.sigma * m1.sigma};
    if (info.start == StartKind::Deterministic) {
        return [p0, p1](const Curve& x) { return bayes_ou_det(x, p0, p1); };
    }
    return [p0, p1](const Curve& x) { return bayes_ou_random(x, p0, p1); };
}

double test_accuracy(const LabeledSample& test, const CurveClassifier& rule) {
    int correct = 0;
    for (int i = 0; i < test.size(); ++i) {
        correct += (rule(test.curve(i)) == test.label(i));
    }
    return static_cast<double>(correct) / test.size();
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) threads = 1;
    }
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

RunRecord evaluate_run(const ExperimentConfig& cfg, const LabeledSample& train,
                       const LabeledSample& test) {
    RunRecord rec;
    const FamilyInfo info = family_info(cfg.model0);
    for (ClassifierId id : cfg.roster) {
        try {
            switch (id) {
                case ClassifierId::Bayes: {
                    rec.accuracy[id] = test_accuracy(test, bayes_rule(cfg));
                    break;
                }
                case ClassifierId::ParamPlugin: {
                    const auto rule = parametric_plugin_classifier(train, info.family, info.start);
                    rec.accuracy[id] = test_accuracy(test, rule);
                    break;
                }
                case ClassifierId::NonparamPlugin: {
                    const int h = select_h_cv(train, cfg.cv.h_multiples);
                    const auto clf = nonparam_plugin_classifier(train, h);
                    int correct = 0;
                    for (int i = 0; i < test.size(); ++i) {
                        correct += (clf.label(test.row(i)) == test.label(i));
                    }
                    rec.accuracy[id] = static_cast<double>(correct) / test.size();
                    rec.params[id].h_mult = h;
                    break;
                }
                case ClassifierId::KnnSup:
                case ClassifierId::KnnPls: {
                    const auto kind = id == ClassifierId::KnnSup ? Semimetric::Kind::SupNorm
                                                                 : Semimetric::Kind::Pls;
                    const KnnConfig kc = select_knn_cv(train, kind, cfg.cv.k_max, cfg.cv.d_max);
                    const Eigen::MatrixXd dist =
                        kc.semimetric.distance_matrix(test.values(), train.values());
                    int correct = 0;
                    std::vector<double> row(static_cast<std::size_t>(train.size()));
                    for (int i = 0; i < test.size(); ++i) {
                        for (int j = 0; j < train.size(); ++j) {
                            row[static_cast<std::size_t>(j)] = dist(i, j);
                        }
                        const int lab = detail::knn_vote(row, train.labels(), kc.k);
                        correct += (lab == test.label(i));
                    }
                    rec.accuracy[id] = static_cast<double>(correct) / test.size();
                    rec.params[id].k = kc.k;
                    if (kind == Semimetric::Kind::Pls) {
                        rec.params[id].pls_directions = kc.semimetric.directions();
                    }
                    break;
                }
            }
        } catch (const Error& e) {
            rec.error[id] = e.what();
        }
    }
    return rec;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    const Grid grid(cfg.grid_n);
    const RngSeed base{cfg.seed};

    std::vector<RunRecord> records(static_cast<std::size_t>(cfg.runs));
    parallel_for(cfg.runs, threads, [&](int rep) {
        Rng rng(derive_seed(base, static_cast<std::uint64_t>(rep)));
        const LabeledSample train = sample_labeled(cfg.model0, cfg.model1, cfg.n_train, cfg.n_train,
                                                   Prior::known(cfg.prior_p), grid, rng);
        const LabeledSample test = sample_labeled(cfg.model0, cfg.model1, cfg.n_test, cfg.n_test,
                                                  Prior::known(cfg.prior_p), grid, rng);
        records[static_cast<std::size_t>(rep)] = evaluate_run(cfg, train, test);
    });

    ExperimentReport report;
    report.scenario = cfg.scenario;
    report.seed = cfg.seed;
    report.config_hash = hash_config(cfg);
    report.version = kVersion;
    report.roster = cfg.roster;
    report.runs = std::move(records);
    for (ClassifierId id : cfg.roster) {
        ClassifierStats st;
        double sum = 0.0;
        for (const auto& rec : report.runs) {
            const auto it = rec.accuracy.find(id);
            if (it != rec.accuracy.end()) {
                sum += it->second;
                ++st.runs_ok;
            } else {
                ++st.runs_error;
            }
        }
        if (st.runs_ok > 0) st.mean = sum / st.runs_ok;
        if (st.runs_ok > 1) {
            double ss = 0.0;
            for (const auto& rec : report.runs) {
                const auto it = rec.accuracy.find(id);
                if (it != rec.accuracy.end()) {
                    ss += (it->second - st.mean) * (it->second - st.mean);
                }
            }
            st.sd = std::sqrt(ss / (st.runs_ok - 1));
        }
        report.stats[id] = st;
    }
    return report;
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    std::ostringstream os;
    if (format == ReportFormat::Csv) {
        std::vector<ReportSummaryRow> rows;
        for (ClassifierId id : report.roster) {
            const auto& st = report.stats.at(id);
            rows.push_back({classifier_name(id), st.mean, st.sd, st.runs_ok});
        }
        return emit_summary_csv(rows);
    }
    os << "scenario: " << report.scenario << "  seed: " << report.seed << "  config: "
       << std::hex << report.config_hash << std::dec << "  version: " << report.version << '\n';
    os << "classifier        mean    sd      runs_ok\n";
    for (ClassifierId id : report.roster) {
        const auto& st = report.stats.at(id);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%-16s  %.2f    %.2f    %d\n", classifier_name(id).c_str(),
                      st.mean, st.sd, st.runs_ok);
        os << buf;
    }
    return os.str();
}

std::string emit_summary_csv(const std::vector<ReportSummaryRow>& rows) {
    std::ostringstream os;
    os << "classifier,mean,sd,runs_ok\n";
    for (const auto& r : rows) {
        os << r.classifier << ',' << format_double(r.mean) << ',' << format_double(r.sd) << ','
           << r.runs_ok << '\n';
    }
    return os.str();
}

std::vector<ReportSummaryRow> parse_report_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "classifier,mean,sd,runs_ok") {
        throw IngestError("report csv: bad header");
    }
    std::vector<ReportSummaryRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ReportSummaryRow row;
        std::string tok;
        if (!std::getline(ls, row.classifier, ',')) throw IngestError("report csv: bad row");
        if (!std::getline(ls, tok, ',')) throw IngestError("report csv: bad row");
        row.mean = parse_double(tok, "report csv mean");
        if (!std::getline(ls, tok, ',')) throw IngestError("report csv: bad row");
        row.sd = parse_double(tok, "report csv sd");
        if (!std::getline(ls, tok)) throw IngestError("report csv: bad row");
        row.runs_ok = static_cast<int>(parse_double(tok, "report csv runs_ok"));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace funcgauss
