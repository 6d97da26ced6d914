// Command-line front end: Monte Carlo experiments, the real-data pipeline,
// and raw curve simulation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "funcgauss/curve_csv.hpp"
#include "funcgauss/experiment.hpp"
#include "funcgauss/realdata.hpp"

namespace fg = funcgauss;

namespace {

fg::ClassLaw parse_model_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::istringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) {
                throw fg::IngestError("model spec entries must look like key=value: '" + item + "'");
            }
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto num = [&](const std::string& key, double fallback, bool required = false) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            if (required) throw fg::IngestError("model spec missing '" + key + "'");
            return fallback;
        }
        return fg::parse_double(it->second, "model spec");
    };
    if (family == "brownian") {
        fg::BrownianLaw law;
        law.model.c = num("c", 0.0);
        law.model.sigma = num("sigma", 1.0);
        law.model.theta = num("theta", 0.0);
        law.with_drift = num("drift", law.model.c != 0.0 ? 1.0 : 0.0) != 0.0;
        return law;
    }
    if (family == "ou") {
        fg::OUModel m;
        m.beta = num("beta", 1.0);
        m.eta = num("eta", 0.0);
        m.sigma = num("sigma", 1.0);
        const auto it = kv.find("start");
        if (it != kv.end() && it->second == "random") {
            m.start = fg::StartKind::RandomStationary;
        } else if (it == kv.end() || it->second == "deterministic") {
            m.start = fg::StartKind::Deterministic;
        } else {
            throw fg::IngestError("model spec start must be deterministic or random");
        }
        return m;
    }
    throw fg::IngestError("model spec family must be 'brownian' or 'ou'");
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw fg::IngestError("cannot open output file '" + path + "'");
    }
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional-data classifiers for Gaussian processes with triangular covariances"};
    app.require_subcommand(1);

    // --- run ---
    auto* run = app.add_subcommand("run", "Run a Monte Carlo experiment from a config file");
    std::string run_config;
    std::string run_out;
    std::string run_format = "table";
    int run_runs = -1;
    std::int64_t run_seed = -1;
    int run_threads = 0;
    run->add_option("--config", run_config, "Experiment config (json)")->required();
    run->add_option("--runs", run_runs, "Override the number of Monte Carlo runs");
    run->add_option("--seed", run_seed, "Override the base seed");
    run->add_option("--out", run_out, "Output path (default stdout)");
    run->add_option("--format", run_format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
    run->add_option("--threads", run_threads, "Worker threads (default: hardware)");

    // --- realdata ---
    auto* rd = app.add_subcommand("realdata", "Leave-one-out evaluation of a labeled curve CSV");
    std::string rd_input, rd_out, rd_transform, rd_trim = "0";
    std::string rd_format = "table";
    std::vector<std::string> rd_roster;
    rd->add_option("--input", rd_input, "Curve CSV")->required();
    rd->add_option("--transform", rd_transform, "identity or log-offset:<offset>");
    rd->add_option("--trim", rd_trim, "Leading samples to drop: <count> or <minutes>min");
    rd->add_option("--roster", rd_roster, "Classifiers (knn-sup knn-pls nonparam-plugin)");
    rd->add_option("--out", rd_out, "Output path (default stdout)");
    rd->add_option("--format", rd_format, "table or csv")->check(CLI::IsMember({"table", "csv"}));

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "Dump simulated curves as CSV");
    std::string sim_model, sim_out;
    int sim_n = 1, sim_grid = 50, sim_label = 0;
    std::uint64_t sim_seed = 0;
    sim->add_option("--model", sim_model,
                    "Model spec, e.g. brownian:c=1.5,sigma=1,theta=0,drift=1 or "
                    "ou:beta=1,eta=0,sigma=1,start=random")
        ->required();
    sim->add_option("--n", sim_n, "Number of curves")->required();
    sim->add_option("--seed", sim_seed, "Seed")->required();
    sim->add_option("--grid-n", sim_grid, "Grid segments N (nodes N+1)");
    sim->add_option("--label", sim_label, "Label column value")->check(CLI::IsMember({0, 1}));
    sim->add_option("--out", sim_out, "Output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            std::ifstream in(run_config);
            if (!in) {
                throw fg::IngestError("cannot open config file '" + run_config + "'");
            }
            std::stringstream buf;
            buf << in.rdbuf();
            fg::ExperimentConfig cfg = fg::config_from_json(buf.str());
            if (run_runs > 0) cfg.runs = run_runs;
            if (run_seed >= 0) cfg.seed = static_cast<std::uint64_t>(run_seed);
            const auto report = fg::run_experiment(cfg, run_threads);
            write_output(run_out, fg::emit_report(report, run_format == "csv"
                                                              ? fg::ReportFormat::Csv
                                                              : fg::ReportFormat::Table));
        } else if (*rd) {
            fg::RealDataConfig cfg;
            cfg.input_path = rd_input;
            cfg.trim_count = fg::parse_trim(rd_trim);
            if (!rd_transform.empty() && rd_transform != "identity") {
                const std::string prefix = "log-offset:";
                if (rd_transform.rfind(prefix, 0) != 0) {
                    throw fg::IngestError("transform must be 'identity' or 'log-offset:<offset>'");
                }
                cfg.transform = fg::LogOffsetTransform{
                    fg::parse_double(rd_transform.substr(prefix.size()), "transform offset")};
            }
            if (!rd_roster.empty()) {
                cfg.roster.clear();
                for (const auto& name : rd_roster) {
                    cfg.roster.push_back(fg::classifier_from_name(name));
                }
            }
            const auto report = fg::run_real_data(cfg);
            write_output(rd_out, fg::emit_report(report, rd_format == "csv"
                                                             ? fg::ReportFormat::Csv
                                                             : fg::ReportFormat::Table));
        } else if (*sim) {
            const fg::ClassLaw law = parse_model_spec(sim_model);
            const fg::Grid grid(sim_grid);
            fg::Rng rng(fg::RngSeed{sim_seed});
            fg::CurveMatrix values = fg::simulate_matrix(law, sim_n, grid, rng);
            std::vector<int> labels(static_cast<std::size_t>(sim_n), sim_label);
            const fg::LabeledSample sample(grid, std::move(values), std::move(labels),
                                           fg::Prior::from_counts());
            write_output(sim_out, fg::curves_to_csv(sample));
        }
    } catch (const fg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
