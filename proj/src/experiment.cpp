#include "obcs/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace obcs {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ms(Clock::time_point start) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
}

void fill_estimate(ExperimentRecord& r) {
    const auto n = static_cast<double>(r.trials);
    const double p = static_cast<double>(r.successes) / n;
    r.estimate = p;
    r.stderr_normal = std::sqrt(p * (1.0 - p) / n);
    // Wilson 95% interval; robust for small success counts near thresholds
    const double z = 1.959963984540054;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    r.wilson_lo = std::max(0.0, center - half);
    r.wilson_hi = std::min(1.0, center + half);
}

int version_major(const std::string& v) {
    return std::stoi(v.substr(0, v.find('.')));
}

}  // namespace

void to_json(nlohmann::json& j, const ExperimentRecord& r) {
    j = nlohmann::json{{"experiment_id", r.experiment_id},
                       {"params", r.params},
                       {"seed", {{"seed", r.seed.seed}, {"stream", r.seed.stream}}},
                       {"trials", r.trials},
                       {"successes", r.successes},
                       {"estimate", r.estimate},
                       {"stderr", r.stderr_normal},
                       {"wilson_lo", r.wilson_lo},
                       {"wilson_hi", r.wilson_hi},
                       {"wall_time_ms", r.wall_time_ms},
                       {"tool_version", r.tool_version}};
}

void from_json(const nlohmann::json& j, ExperimentRecord& r) {
    j.at("experiment_id").get_to(r.experiment_id);
    r.params = j.at("params");
    j.at("seed").at("seed").get_to(r.seed.seed);
    j.at("seed").at("stream").get_to(r.seed.stream);
    j.at("trials").get_to(r.trials);
    j.at("successes").get_to(r.successes);
    j.at("estimate").get_to(r.estimate);
    j.at("stderr").get_to(r.stderr_normal);
    j.at("wilson_lo").get_to(r.wilson_lo);
    j.at("wilson_hi").get_to(r.wilson_hi);
    j.at("wall_time_ms").get_to(r.wall_time_ms);
    j.at("tool_version").get_to(r.tool_version);
}

JsonlWriter::JsonlWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
    out_ << "# obcs experiment records, tool_version " << kToolVersion << "\n";
    out_.flush();
}

void JsonlWriter::append(const ExperimentRecord& record) {
    out_ << nlohmann::json(record).dump() << "\n";
    out_.flush();
    if (!out_) throw std::runtime_error("write failure on experiment file");
}

void persist(const std::vector<ExperimentRecord>& records, const std::string& path) {
    JsonlWriter writer(path);
    for (const auto& r : records) writer.append(r);
}

std::vector<ExperimentRecord> load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<ExperimentRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("malformed record at line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
        ExperimentRecord r = j.get<ExperimentRecord>();
        if (version_major(r.tool_version) > version_major(kToolVersion))
            throw std::runtime_error("record at line " + std::to_string(line_no) +
                                     " written by newer tool version " + r.tool_version);
        records.push_back(std::move(r));
    }
    // a truncated trailing line without '\n' still reaches parse above and fails there
    return records;
}

void export_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "experiment_id,trials,successes,estimate,stderr,wilson_lo,wilson_hi\n";
    char buf[160];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%s,%llu,%llu,%.17g,%.17g,%.17g,%.17g\n",
                      r.experiment_id.c_str(), static_cast<unsigned long long>(r.trials),
                      static_cast<unsigned long long>(r.successes), r.estimate, r.stderr_normal,
                      r.wilson_lo, r.wilson_hi);
        out << buf;
    }
}

void write_matrix(const MeasurementMatrix& A, std::ostream& out) {
    out << A.m << ' ' << A.n << ' ' << to_string(A.ensemble) << ' ';
    if (A.seed)
        out << *A.seed;
    else
        out << '-';
    out << '\n';
    char buf[40];
    for (std::size_t i = 0; i < A.m; ++i) {
        for (std::size_t j = 0; j < A.n; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", A.at(i, j));
            out << (j ? " " : "") << buf;
        }
        out << '\n';
    }
}

void write_matrix(const MeasurementMatrix& A, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_matrix(A, out);
}

MeasurementMatrix read_matrix(std::istream& in) {
    std::string line;
    auto next_data_line = [&]() {
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] != '#') return true;
        }
        return false;
    };
    if (!next_data_line()) throw std::runtime_error("matrix file: missing header line");
    std::istringstream header(line);
    std::size_t m, n;
    std::string ensemble_str, seed_str;
    if (!(header >> m >> n >> ensemble_str >> seed_str))
        throw std::runtime_error("matrix file: malformed header");
    std::optional<std::uint64_t> seed;
    if (seed_str != "-") seed = parse_seed(seed_str);

    std::vector<double> entries;
    entries.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        if (!next_data_line())
            throw std::runtime_error("matrix file: expected " + std::to_string(m) +
                                     " rows, got " + std::to_string(i));
        std::istringstream row(line);
        double v;
        std::size_t count = 0;
        while (row >> v) {
            entries.push_back(v);
            ++count;
        }
        if (count != n)
            throw std::runtime_error("matrix file: row " + std::to_string(i + 1) + " has " +
                                     std::to_string(count) + " entries, expected " +
                                     std::to_string(n));
    }
    return MeasurementMatrix(m, n, std::move(entries), ensemble_from_string(ensemble_str), seed);
}

MeasurementMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_matrix(in);
}

std::vector<ExperimentRecord> sweep_balanced_failure(int n, int k, double d,
                                                     const std::vector<int>& m_list,
                                                     std::uint64_t trials, const RngSpec& rng,
                                                     Ensemble ensemble, std::uint64_t budget,
                                                     JsonlWriter* writer) {
    if (trials < 1) throw std::invalid_argument("sweep_balanced_failure: need trials >= 1");
    BalanceSpec spec{n, k, d};
    spec.validate();

    std::vector<ExperimentRecord> records;
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
        const int m = m_list[mi];
        if (m < 0) throw std::invalid_argument("sweep_balanced_failure: need m >= 0");
        const auto start = Clock::now();
        const RngSpec m_stream = derive_substream(rng, mi);

        std::uint64_t successes = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto V = gen_vectors(derive_substream(m_stream, t), static_cast<std::size_t>(m),
                                       static_cast<std::size_t>(n), ensemble);
            if (!is_balanced(V, spec, budget).balanced) ++successes;
        }

        ExperimentRecord r;
        r.experiment_id = "sweep-balance/n" + std::to_string(n) + "/k" + std::to_string(k) + "/m" +
                          std::to_string(m);
        r.params = {{"n", n},       {"k", k},     {"d", d},
                    {"m", m},       {"ensemble", to_string(ensemble)},
                    {"trials", trials}};
        r.seed = rng;
        r.trials = trials;
        r.successes = successes;
        fill_estimate(r);
        r.wall_time_ms = elapsed_ms(start);
        if (writer) writer->append(r);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<ExperimentRecord> sweep_invalidity(int n, int k, double R,
                                               const std::vector<int>& m_list,
                                               std::uint64_t trials, const RngSpec& rng,
                                               Ensemble ensemble, std::uint64_t budget,
                                               JsonlWriter* writer) {
    if (trials < 1) throw std::invalid_argument("sweep_invalidity: need trials >= 1");

    std::vector<ExperimentRecord> records;
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
        const int m = m_list[mi];
        const auto start = Clock::now();
        const RngSpec m_stream = derive_substream(rng, mi);

        std::uint64_t certificates = 0, no_certificates = 0, tail_failures = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            const auto A = gen_matrix(derive_substream(m_stream, t), static_cast<std::size_t>(m),
                                      static_cast<std::size_t>(n), ensemble);
            const auto result = invalidity_pipeline(A, k, R, budget);
            if (!result.tail_check_passed) ++tail_failures;
            if (result.certificate && confusable(A, result.certificate->x, result.certificate->y))
                ++certificates;
            else
                ++no_certificates;
        }

        ExperimentRecord r;
        r.experiment_id = "sweep-invalidity/n" + std::to_string(n) + "/k" + std::to_string(k) +
                          "/m" + std::to_string(m);
        r.params = {{"n", n},
                    {"k", k},
                    {"R", R},
                    {"m", m},
                    {"ensemble", to_string(ensemble)},
                    {"trials", trials},
                    {"counts",
                     {{"certificate", certificates},
                      {"no_certificate", no_certificates},
                      {"tail_check_failed", tail_failures}}}};
        r.seed = rng;
        r.trials = trials;
        r.successes = certificates;
        fill_estimate(r);
        r.wall_time_ms = elapsed_ms(start);
        if (writer) writer->append(r);
        records.push_back(std::move(r));
    }
    return records;
}

DecaenReport run_decaen_report(const BoundParams& params, std::uint64_t mc_trials,
                               const RngSpec& rng, std::uint64_t budget) {
    if (mc_trials < 1) throw std::invalid_argument("run_decaen_report: need trials >= 1");
    DecaenReport report;
    report.evaluation = union_failure_lower_bound(params);

    const auto start = Clock::now();
    BalanceSpec spec{params.n, params.k, params.d};
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < mc_trials; ++t) {
        const auto V =
            gen_vectors(derive_substream(rng, t), static_cast<std::size_t>(params.m),
                        static_cast<std::size_t>(params.n), params.ensemble);
        if (!is_balanced(V, spec, budget).balanced) ++successes;
    }

    ExperimentRecord& r = report.mc_record;
    r.experiment_id = "decaen-mc/n" + std::to_string(params.n) + "/k" + std::to_string(params.k) +
                      "/m" + std::to_string(params.m);
    r.params = {{"n", params.n}, {"k", params.k},
                {"d", params.d}, {"m", params.m},
                {"ensemble", to_string(params.ensemble)}, {"trials", mc_trials}};
    r.seed = rng;
    r.trials = mc_trials;
    r.successes = successes;
    fill_estimate(r);
    r.wall_time_ms = elapsed_ms(start);

    report.ordering_ok =
        report.evaluation.decaen_value <= r.estimate + 4.0 * r.stderr_normal + 1e-12;
    return report;
}

std::uint64_t parse_seed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty seed");
    std::size_t pos = 0;
    const int base = (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) ? 16 : 10;
    const std::uint64_t value = std::stoull(base == 16 ? text.substr(2) : text, &pos, base);
    const std::size_t expected = (base == 16) ? text.size() - 2 : text.size();
    if (pos != expected) throw std::invalid_argument("malformed seed: " + text);
    return value;
}

}  // namespace obcs
