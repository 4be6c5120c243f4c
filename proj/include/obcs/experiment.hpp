#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "obcs/balance.hpp"
#include "obcs/bounds.hpp"
#include "obcs/core.hpp"
#include "obcs/ensembles.hpp"

// Experiment orchestration: seeded sweeps over m, the de Caen-vs-Monte-Carlo
// report, and JSONL/CSV persistence of experiment records.

namespace obcs {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentRecord {
    std::string experiment_id;
    nlohmann::json params;  // full parameter echo
    RngSpec seed;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    double stderr_normal = 0.0;
    double wilson_lo = 0.0;
    double wilson_hi = 0.0;
    std::uint64_t wall_time_ms = 0;
    std::string tool_version = kToolVersion;

    bool operator==(const ExperimentRecord&) const = default;
};

void to_json(nlohmann::json& j, const ExperimentRecord& r);
void from_json(const nlohmann::json& j, ExperimentRecord& r);

// Streaming writer: header comment line up front, one record per line,
// flushed after every append so an interrupted sweep leaves a valid prefix.
class JsonlWriter {
  public:
    explicit JsonlWriter(const std::string& path);
    void append(const ExperimentRecord& record);

  private:
    std::ofstream out_;
};

void persist(const std::vector<ExperimentRecord>& records, const std::string& path);
std::vector<ExperimentRecord> load(const std::string& path);
void export_csv(const std::vector<ExperimentRecord>& records, const std::string& path);

// Matrix file format: line 1 "m n ensemble seed" (seed "-" when absent),
// then m lines of n space-separated decimals with 17 significant digits;
// '#'-prefixed comment lines are ignored.
void write_matrix(const MeasurementMatrix& A, std::ostream& out);
void write_matrix(const MeasurementMatrix& A, const std::string& path);
MeasurementMatrix read_matrix(std::istream& in);
MeasurementMatrix read_matrix_file(const std::string& path);

// Empirical Pr[V not (n,k,d)-balanced] over fresh ensemble draws, one record
// per m; per-trial substreams are derived from (m index, trial index).
std::vector<ExperimentRecord> sweep_balanced_failure(int n, int k, double d,
                                                     const std::vector<int>& m_list,
                                                     std::uint64_t trials, const RngSpec& rng,
                                                     Ensemble ensemble = Ensemble::gaussian,
                                                     std::uint64_t budget = kDefaultSubsetBudget,
                                                     JsonlWriter* writer = nullptr);

// Empirical certificate rate of the invalidity pipeline; params echo carries
// the certificate / no-certificate / tail-check-failed counts.
std::vector<ExperimentRecord> sweep_invalidity(int n, int k, double R,
                                               const std::vector<int>& m_list,
                                               std::uint64_t trials, const RngSpec& rng,
                                               Ensemble ensemble = Ensemble::gaussian,
                                               std::uint64_t budget = kDefaultSubsetBudget,
                                               JsonlWriter* writer = nullptr);

struct DecaenReport {
    BoundEvaluation evaluation;
    ExperimentRecord mc_record;
    bool ordering_ok = false;  // bound <= MC estimate + 4 SE
};

DecaenReport run_decaen_report(const BoundParams& params, std::uint64_t mc_trials,
                               const RngSpec& rng, std::uint64_t budget = kDefaultSubsetBudget);

// Seed parsing for the CLI: decimal or 0x-prefixed hex.
std::uint64_t parse_seed(const std::string& text);

}  // namespace obcs
