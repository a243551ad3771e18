// Command-line driver: experiment runner, plot-data exporters, and the
// sorting microbenchmark.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavpp/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw uavpp::ValidationError(std::string(what) + ": cannot parse \"" + token +
                                         "\" as an integer");
        }
    }
    if (out.empty()) throw uavpp::ValidationError(std::string(what) + ": empty list");
    return out;
}

std::vector<uavpp::Algorithm> parse_algorithms(const std::string& csv) {
    std::vector<uavpp::Algorithm> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token == "all") return uavpp::all_algorithms();
        const auto algorithm = uavpp::algorithm_from_name(token);
        if (!algorithm) {
            throw uavpp::ValidationError(
                "unknown algorithm \"" + token +
                "\" (expected nsga2, optmpnds, optmpnds2, bpnnia, bpheia, bpaima, or all)");
        }
        out.push_back(*algorithm);
    }
    if (out.empty()) throw uavpp::ValidationError("algorithms: empty list");
    return out;
}

int run_command(const uavpp::ExperimentSpec& spec) {
    const uavpp::ExperimentResult result = uavpp::run_experiment(spec);
    std::cout << "wrote " << result.run_files.size() << " run record(s)\n";
    for (const auto& [case_id, file] : result.summary_files) {
        std::cout << "case " << case_id << " summary: " << file.string() << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biparty UAV path planning benchmark harness"};
    app.require_subcommand(1);

    // run ------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "Run an experiment and write records + summaries");
    std::string cases_csv = "1";
    std::string algos_csv = "all";
    std::string scenario = "default";
    uavpp::ExperimentSpec spec;
    bool desk = false;
    run->add_option("--cases", cases_csv, "Comma-separated case ids (1..6)");
    run->add_option("--algos", algos_csv, "Comma-separated algorithms or 'all'");
    run->add_option("--replicates", spec.replicates, "Independent runs per algorithm");
    run->add_option("--fe", spec.fe_budget, "Evaluation budget per run");
    run->add_option("--pop", spec.population, "Population size");
    run->add_option("--activation", spec.activation, "Activated antibodies per generation");
    run->add_option("--seed", spec.base_seed, "Base seed; replicate r uses seed+r");
    run->add_option("--scenario", scenario, "'default' or a scenario JSON file");
    run->add_option("--scenario-seed", spec.scenario_seed,
                    "Seed for the generated default scenario");
    run->add_option("--max-offset", spec.max_offset_m,
                    "Lateral offset bound of the decision encoding (m)");
    run->add_option("--out", spec.out_dir, "Output directory")->required();
    run->add_option("--threads", spec.threads, "Worker threads (0 = hardware)");
    run->add_flag("--desk", desk, "Desk-scale preset: fe 20000, 10 replicates");

    // export-front -----------------------------------------------------------
    auto* front = app.add_subcommand("export-front", "CSV of one party's objective pairs");
    std::string front_run, party = "eff", front_out;
    bool full = false;
    front->add_option("--run", front_run, "Run record JSON")->required();
    front->add_option("--party", party, "eff or safe");
    front->add_option("--out", front_out, "Output CSV (default: stdout)");
    front->add_flag("--full", full, "Include the full final population");

    // export-path ------------------------------------------------------------
    auto* pathcmd = app.add_subcommand("export-path", "Waypoint CSV for one MPS solution");
    std::string path_run, path_out = "path.csv";
    int index = 0;
    pathcmd->add_option("--run", path_run, "Run record JSON")->required();
    pathcmd->add_option("--index", index, "MPS solution index");
    pathcmd->add_option("--out", path_out, "Output CSV path");

    // bench-sort ---------------------------------------------------------------
    auto* bench = app.add_subcommand("bench-sort", "Multiparty vs plain sorting timings");
    std::string bench_n = "50,105,200", bench_m = "4", bench_k = "1,2,4";
    int repeats = 9;
    std::string bench_out;
    bench->add_option("--n", bench_n, "Population sizes");
    bench->add_option("--m", bench_m, "Total objective counts");
    bench->add_option("--k", bench_k, "Party counts (must divide m)");
    bench->add_option("--repeats", repeats, "Repeats per configuration (median)");
    bench->add_option("--out", bench_out, "Also write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (run->parsed()) {
            spec.cases = parse_int_list(cases_csv, "cases");
            spec.algorithms = parse_algorithms(algos_csv);
            if (scenario != "default") spec.scenario_path = scenario;
            if (desk) {
                spec.fe_budget = 20000;
                spec.replicates = 10;
            }
            return run_command(spec);
        }
        if (front->parsed()) {
            if (front_out.empty()) {
                uavpp::export_front(front_run, party, full, std::cout);
            } else {
                std::ofstream out(front_out);
                if (!out) throw uavpp::IoError("cannot write file: " + front_out);
                uavpp::export_front(front_run, party, full, out);
            }
            return kExitOk;
        }
        if (pathcmd->parsed()) {
            const auto sidecar = uavpp::export_path(path_run, index, path_out);
            std::cout << "wrote " << path_out << " and " << sidecar.string() << '\n';
            return kExitOk;
        }
        if (bench->parsed()) {
            const auto rows = uavpp::bench_sorting(parse_int_list(bench_n, "n"),
                                                   parse_int_list(bench_m, "m"),
                                                   parse_int_list(bench_k, "k"), repeats);
            uavpp::write_bench_report(rows, std::cout);
            if (!bench_out.empty()) {
                std::ofstream out(bench_out);
                if (!out) throw uavpp::IoError("cannot write file: " + bench_out);
                uavpp::write_bench_report(rows, out);
            }
            return kExitOk;
        }
    } catch (const uavpp::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const uavpp::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const uavpp::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}
