#include "uavpp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "uavpp/errors.hpp"

namespace uavpp {

using nlohmann::json;

void validate_spec(const ExperimentSpec& spec) {
    auto fail = [](const std::string& msg) { throw ValidationError(msg); };
    if (spec.cases.empty()) fail("spec: cases must not be empty");
    for (int c : spec.cases) validate_case_id(c);
    if (spec.algorithms.empty()) fail("spec: algorithms must not be empty");
    if (spec.replicates < 1) fail("spec: replicates must be at least 1");
    if (spec.population < 1) fail("spec: population must be positive");
    if (spec.activation < 1 || spec.activation > spec.population)
        fail("spec: activation must lie in [1, population]");
    if (spec.fe_budget < spec.population) fail("spec: fe_budget must cover one population");
    if (spec.max_offset_m <= 0.0) fail("spec: max_offset_m must be positive");
    if (spec.out_dir.empty()) fail("spec: output directory must be set");
    if (spec.threads < 0) fail("spec: threads must be non-negative");
}

namespace {

int worker_count(int requested, std::size_t jobs) {
    int n = requested > 0 ? requested
                          : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* cap = std::getenv("UAVPP_THREADS")) {
        const int limit = std::atoi(cap);
        if (limit > 0) n = std::min(n, limit);
    }
    return std::max(1, std::min<int>(n, static_cast<int>(jobs)));
}

json bounds_json(const NormalizationBounds& bounds) {
    json parties = json::array();
    for (const auto& party : bounds.parties) {
        json objectives = json::array();
        for (const ObjectiveBounds& ob : party) {
            objectives.push_back({{"ideal", ob.ideal}, {"nadir", ob.nadir}});
        }
        parties.push_back(std::move(objectives));
    }
    return {{"parties", std::move(parties)}};
}

json raw_json(const RawObjectives& raw) {
    return {{"length", raw.length}, {"height", raw.height}, {"fuel", raw.fuel},
            {"distance", raw.distance}, {"fatal", raw.fatal}, {"eco", raw.eco},
            {"noise", raw.noise}};
}

json individual_json(const Individual& ind) {
    return {{"genome", ind.genome.genes},
            {"eff", ind.eval.eff},
            {"safe", ind.eval.safe},
            {"violation", ind.eval.violation},
            {"raw", raw_json(ind.eval.raw)}};
}

json config_json(const AlgorithmConfig& c) {
    return {{"variant", algorithm_name(c.variant)},
            {"population", c.population},
            {"activation", c.activation},
            {"fe_budget", c.fe_budget},
            {"seed", c.seed},
            {"dis_c", c.dis_c},
            {"dis_m", c.dis_m},
            {"p_c", c.p_c},
            {"p_m", c.p_m},
            {"de1", {{"cr", c.de1.cr}, {"f", c.de1.f}}},
            {"de2", {{"cr", c.de2.cr}, {"f", c.de2.f}}},
            {"de3", {{"cr", c.de3.cr}, {"f", c.de3.f}}},
            {"heia_sbx_probability", c.heia_sbx_probability},
            {"de_window_generations", c.de_window_generations},
            {"max_offset_m", c.max_offset_m}};
}

PartyFronts mps_fronts(const RunResult& result) {
    PartyFronts fronts;
    for (std::size_t i : result.mps) {
        const BipartyEvaluation& ev = result.final_population[i].eval;
        fronts.eff.push_back({ev.eff[0], ev.eff[1]});
        fronts.safe.push_back({ev.safe[0], ev.safe[1]});
    }
    return fronts;
}

}  // namespace

json run_record_json(const RunResult& result, const std::string& algorithm, int replicate,
                     const json& scenario_doc, const json& scenario_source) {
    json j;
    j["format"] = "uavpp-run/1";
    j["case"] = result.case_id;
    j["algorithm"] = algorithm;
    j["replicate"] = replicate;
    j["seed"] = result.config.seed;
    j["config"] = config_json(result.config);
    j["scenario"] = scenario_doc;
    j["scenario_source"] = scenario_source;
    j["evaluations_used"] = result.evaluations_used;

    json history = json::array();
    for (const GenerationRecord& rec : result.history) {
        history.push_back({{"generation", rec.generation},
                           {"evaluations", rec.evaluations},
                           {"mean_hv", rec.mean_hv},
                           {"mps_size", rec.mps_size}});
    }
    j["history"] = std::move(history);
    j["history_bounds"] = bounds_json(result.history_bounds);

    json mps = json::array();
    for (std::size_t i : result.mps) mps.push_back(individual_json(result.final_population[i]));
    j["mps"] = std::move(mps);

    json population = json::array();
    for (const Individual& ind : result.final_population) population.push_back(individual_json(ind));
    j["final_population"] = std::move(population);
    return j;
}

namespace {

struct Job {
    int case_id;
    Algorithm algorithm;
    int replicate;
};

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << content;
}

std::string format_run_name(Algorithm algorithm, int replicate) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_rep%02d.json", algorithm_name(algorithm).c_str(),
                  replicate);
    return buf;
}

std::string aligned_summary_table(const CaseSummary& summary) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "case %d  meanHV over %zu algorithm(s)\n", summary.case_id,
                  summary.report.algorithms.size());
    out << line;
    out << "algorithm      runs        mean         std\n";
    for (const AlgorithmAggregate& a : summary.report.algorithms) {
        std::snprintf(line, sizeof line, "%-12s %6d %11.6f %11.6f\n", a.algorithm.c_str(),
                      a.stats.runs, a.stats.mean, a.stats.stddev);
        out << line;
    }
    out << "\npairwise Wilcoxon rank-sum p-values (two-sided)\n";
    for (const PairwiseComparison& p : summary.report.pairs) {
        std::snprintf(line, sizeof line, "%-12s vs %-12s %11.4g\n", p.a.c_str(), p.b.c_str(),
                      p.p_value);
        out << line;
    }
    return out.str();
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);

    CityScenario scenario;
    json scenario_source;
    if (spec.scenario_path.empty()) {
        scenario = generate_default_scenario(spec.scenario_seed);
        scenario_source = {{"kind", "generated"}, {"seed", spec.scenario_seed}};
    } else {
        scenario = load_scenario(spec.scenario_path);
        scenario_source = {{"kind", "file"}, {"path", spec.scenario_path}};
    }
    const json scenario_doc = scenario_to_json(scenario);

    std::vector<Job> jobs;
    for (int case_id : spec.cases) {
        for (Algorithm algorithm : spec.algorithms) {
            for (int r = 0; r < spec.replicates; ++r) {
                jobs.push_back({case_id, algorithm, r});
            }
        }
    }

    std::vector<RunResult> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            AlgorithmConfig config;
            config.variant = jobs[i].algorithm;
            config.population = spec.population;
            config.activation = spec.activation;
            config.fe_budget = spec.fe_budget;
            config.max_offset_m = spec.max_offset_m;
            config.seed = spec.base_seed + static_cast<std::uint64_t>(jobs[i].replicate);
            results[i] = run_algorithm(config, jobs[i].case_id, scenario);
        }
    };
    std::vector<std::thread> pool;
    const int threads = worker_count(spec.threads, jobs.size());
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    // Everything below is single-threaded: session bounds need the full join.
    std::error_code ec;
    std::filesystem::create_directories(spec.out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + spec.out_dir.string());

    ExperimentResult out;
    for (int case_id : spec.cases) {
        const std::filesystem::path case_dir =
            spec.out_dir / ("case" + std::to_string(case_id));
        std::filesystem::create_directories(case_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + case_dir.string());

        // Session-level normalization: union of every run's MPS for this case.
        std::vector<PartyFronts> union_sets;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].case_id == case_id) union_sets.push_back(mps_fronts(results[i]));
        }
        const NormalizationBounds bounds = compute_bounds(union_sets);

        CaseSummary summary;
        summary.case_id = case_id;
        summary.bounds = bounds;

        json per_run = json::array();
        for (Algorithm algorithm : spec.algorithms) {
            std::vector<double> values;
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                if (jobs[i].case_id != case_id || jobs[i].algorithm != algorithm) continue;
                const MetricRecord metric = mean_hv(mps_fronts(results[i]), bounds);

                json record = run_record_json(results[i], algorithm_name(algorithm),
                                              jobs[i].replicate, scenario_doc, scenario_source);
                record["metrics"] = {{"hv_per_party", metric.hv_per_party},
                                     {"mean_hv", metric.mean_hv},
                                     {"set_size", metric.set_size}};
                record["normalization_bounds"] = bounds_json(bounds);

                const std::filesystem::path run_file =
                    case_dir / format_run_name(algorithm, jobs[i].replicate);
                write_text(run_file, record.dump(1) + "\n");
                out.run_files.push_back(run_file);

                per_run.push_back({{"algorithm", algorithm_name(algorithm)},
                                   {"replicate", jobs[i].replicate},
                                   {"seed", results[i].config.seed},
                                   {"mean_hv", metric.mean_hv},
                                   {"mps_size", metric.set_size},
                                   {"file", run_file.filename().string()}});
                values.push_back(metric.mean_hv);
            }
            summary.values.emplace_back(algorithm_name(algorithm), std::move(values));
        }

        summary.report = spec.replicates >= 2
                             ? aggregate_replicates(summary.values)
                             : AggregateReport{};
        if (spec.replicates < 2) {
            for (const auto& [name, values] : summary.values) {
                summary.report.algorithms.push_back({name, replicate_stats(values)});
            }
        }

        json summary_doc;
        summary_doc["case"] = case_id;
        summary_doc["bounds"] = bounds_json(bounds);
        json algos = json::array();
        for (const AlgorithmAggregate& a : summary.report.algorithms) {
            algos.push_back({{"algorithm", a.algorithm},
                             {"mean", a.stats.mean},
                             {"stddev", a.stats.stddev},
                             {"runs", a.stats.runs}});
        }
        summary_doc["algorithms"] = std::move(algos);
        json pairs = json::array();
        for (const PairwiseComparison& p : summary.report.pairs) {
            pairs.push_back({{"a", p.a}, {"b", p.b}, {"p_value", p.p_value}});
        }
        summary_doc["pairs"] = std::move(pairs);
        summary_doc["per_run"] = std::move(per_run);

        const std::filesystem::path summary_file = case_dir / "summary.json";
        write_text(summary_file, summary_doc.dump(2) + "\n");
        write_text(case_dir / "summary.txt", aligned_summary_table(summary));

        std::ostringstream runs_csv;
        runs_csv << "algorithm,replicate,seed,mean_hv,mps_size\n";
        for (const json& row : summary_doc["per_run"]) {
            char line[200];
            std::snprintf(line, sizeof line, "%s,%d,%llu,%.17g,%d\n",
                          row.at("algorithm").get<std::string>().c_str(),
                          row.at("replicate").get<int>(),
                          static_cast<unsigned long long>(row.at("seed").get<std::uint64_t>()),
                          row.at("mean_hv").get<double>(), row.at("mps_size").get<int>());
            runs_csv << line;
        }
        write_text(case_dir / "runs.csv", runs_csv.str());

        out.summary_files[case_id] = summary_file;
        out.summaries[case_id] = std::move(summary);
    }
    return out;
}

// ---- exports -----------------------------------------------------------------

namespace {

json load_record(const std::filesystem::path& run_file) {
    std::ifstream in(run_file);
    if (!in) throw IoError("cannot open run record: " + run_file.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("run record: invalid JSON: ") + e.what());
    }
}

}  // namespace

int export_front(const std::filesystem::path& run_file, const std::string& party, bool full,
                 std::ostream& out) {
    if (party != "eff" && party != "safe") {
        throw ValidationError("party must be \"eff\" or \"safe\" (got \"" + party + "\")");
    }
    const json record = load_record(run_file);
    const int case_id = record.at("case").get<int>();
    const auto names =
        party == "eff" ? eff_objective_names(case_id) : safe_objective_names(case_id);

    out << names[0] << ',' << names[1];
    if (full) out << ",set";
    out << '\n';

    char line[128];
    int rows = 0;
    auto emit = [&](const json& entries, const char* tag) {
        for (const json& ind : entries) {
            const auto values = ind.at(party).get<std::array<double, 2>>();
            std::snprintf(line, sizeof line, "%.17g,%.17g", values[0], values[1]);
            out << line;
            if (full) out << ',' << tag;
            out << '\n';
            ++rows;
        }
    };
    emit(record.at("mps"), "mps");
    if (full) emit(record.at("final_population"), "population");

    if (record.at("mps").empty()) {
        std::cerr << "warning: run record has an empty MPS; wrote header only\n";
    }
    return rows;
}

std::filesystem::path export_path(const std::filesystem::path& run_file, int index,
                                  const std::filesystem::path& out_csv) {
    const json record = load_record(run_file);
    const json& mps = record.at("mps");
    if (index < 0 || static_cast<std::size_t>(index) >= mps.size()) {
        std::ostringstream msg;
        msg << "solution index " << index << " out of range 0.." << mps.size() - 1 << " ("
            << mps.size() << " MPS solutions)";
        throw ValidationError(msg.str());
    }

    const CityScenario scenario = scenario_from_json(record.at("scenario"));
    Genome genome{mps[index].at("genome").get<std::vector<double>>()};
    const PathPolyline path = decode(genome, scenario);

    std::ofstream csv(out_csv);
    if (!csv) throw IoError("cannot write path CSV: " + out_csv.string());
    write_path_csv(path, csv);

    std::filesystem::path sidecar = out_csv;
    sidecar.replace_extension(".objectives.json");
    write_text(sidecar, mps[index].at("raw").dump(2) + "\n");
    return sidecar;
}

// ---- sorting benchmark ---------------------------------------------------------

std::vector<BenchRow> bench_sorting(const std::vector<int>& ns, const std::vector<int>& ms,
                                    const std::vector<int>& ks, int repeats, std::uint64_t seed) {
    if (ns.empty() || ms.empty() || ks.empty()) {
        throw ValidationError("bench: n, m, and k lists must not be empty");
    }
    if (repeats < 1) throw ValidationError("bench: repeats must be positive");

    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        const std::size_t h = v.size() / 2;
        return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    };

    Rng rng(seed);
    std::vector<BenchRow> rows;
    for (int m : ms) {
        for (int k : ks) {
            if (m % k != 0) {
                throw ValidationError("bench: m must be divisible by k (m=" + std::to_string(m) +
                                      ", k=" + std::to_string(k) + ")");
            }
            for (int n : ns) {
                std::vector<double> t_multi, t_single;
                for (int rep = 0; rep < repeats; ++rep) {
                    ObjectiveMatrix points(n, std::vector<double>(m));
                    for (auto& row : points) {
                        for (double& v : row) v = rng.uniform01();
                    }
                    const std::vector<double> violations(n, 0.0);

                    std::vector<ObjectiveMatrix> parties(k);
                    const int per_party = m / k;
                    for (int p = 0; p < k; ++p) {
                        parties[p].assign(n, std::vector<double>(per_party));
                        for (int i = 0; i < n; ++i) {
                            for (int obj = 0; obj < per_party; ++obj) {
                                parties[p][i][obj] = points[i][p * per_party + obj];
                            }
                        }
                    }

                    auto t0 = clock::now();
                    const RankedPopulation ranked = mpnds(parties, violations);
                    t_multi.push_back(ms_since(t0));

                    t0 = clock::now();
                    const std::vector<int> base = fast_nds(points, &violations);
                    t_single.push_back(ms_since(t0));

                    // Keep the optimizer honest.
                    if (ranked.individuals[0].layer < 0 || base[0] < 0) std::abort();
                }
                BenchRow row;
                row.n = n;
                row.m = m;
                row.k = k;
                row.mpnds_ms = median(t_multi);
                row.fast_nds_ms = median(t_single);
                row.ratio = row.fast_nds_ms > 0.0 ? row.mpnds_ms / row.fast_nds_ms : 0.0;
                rows.push_back(row);
            }
        }
    }
    return rows;
}

void write_bench_report(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "     n    m    k   mpnds_ms  fast_nds_ms      ratio\n";
    char line[128];
    for (const BenchRow& r : rows) {
        std::snprintf(line, sizeof line, "%6d %4d %4d %10.4f %12.4f %10.3f\n", r.n, r.m, r.k,
                      r.mpnds_ms, r.fast_nds_ms, r.ratio);
        out << line;
    }
}

}  // namespace uavpp
