#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavpp/evolve.hpp"

namespace uavpp {

struct ExperimentSpec {
    std::vector<int> cases{1};
    std::vector<Algorithm> algorithms = all_algorithms();
    int replicates = 30;
    long long fe_budget = 80000;
    int population = 105;
    int activation = 20;
    std::uint64_t base_seed = 42;          // replicate r runs with base_seed + r
    std::string scenario_path;             // empty -> generated default scenario
    std::uint64_t scenario_seed = 2023;
    double max_offset_m = kDefaultMaxOffsetM;
    std::filesystem::path out_dir;
    int threads = 0;                       // 0 -> hardware; UAVPP_THREADS caps
};

// Throws ValidationError naming the offending field.
void validate_spec(const ExperimentSpec& spec);

struct CaseSummary {
    int case_id = 0;
    AggregateReport report;
    NormalizationBounds bounds;
    // per algorithm: per-replicate session-normalized meanHV
    std::vector<std::pair<std::string, std::vector<double>>> values;
};

struct ExperimentResult {
    std::vector<std::filesystem::path> run_files;
    std::map<int, std::filesystem::path> summary_files;
    std::map<int, CaseSummary> summaries;
};

// Runs every (case, algorithm, replicate) job on a worker pool, then writes
// one JSON record per run plus per-case summaries. Record payloads are a
// pure function of the spec; nothing time- or host-dependent is stored.
ExperimentResult run_experiment(const ExperimentSpec& spec);

nlohmann::json run_record_json(const RunResult& result, const std::string& algorithm,
                               int replicate, const nlohmann::json& scenario_doc,
                               const nlohmann::json& scenario_source);

// CSV of one party's objective pairs for the MPS of a stored run; with
// `full`, final-population rows follow, tagged by a `set` column. Returns
// the number of data rows.
int export_front(const std::filesystem::path& run_file, const std::string& party, bool full,
                 std::ostream& out);

// Waypoint CSV for one MPS solution plus a JSON sidecar with its seven raw
// objective values. Returns the sidecar path.
std::filesystem::path export_path(const std::filesystem::path& run_file, int index,
                                  const std::filesystem::path& out_csv);

struct BenchRow {
    int n = 0;
    int m = 0;
    int k = 0;
    double mpnds_ms = 0.0;
    double fast_nds_ms = 0.0;
    double ratio = 0.0;
};

// Median wall time of the multiparty sort (m/k objectives per party) vs the
// plain m-objective sort on random populations.
std::vector<BenchRow> bench_sorting(const std::vector<int>& ns, const std::vector<int>& ms,
                                    const std::vector<int>& ks, int repeats,
                                    std::uint64_t seed = 99);

void write_bench_report(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace uavpp
