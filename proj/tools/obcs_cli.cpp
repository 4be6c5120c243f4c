// Command-line surface for the 1-bit CS verification laboratory. Subcommands
// cover matrix generation, sign measurement, balance checking, witness
// construction, validity checking, support decoding, kernel evaluation, the
// de Caen report, threshold formulas, and the two experiment sweeps.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <sstream>

#include "obcs/balance.hpp"
#include "obcs/bounds.hpp"
#include "obcs/core.hpp"
#include "obcs/ensembles.hpp"
#include "obcs/experiment.hpp"
#include "obcs/prob.hpp"
#include "obcs/validity.hpp"

using nlohmann::json;

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

// CLI indices are 1-based; internal indices 0-based.
std::vector<int> to_internal(std::vector<int> indices) {
    for (int& i : indices) --i;
    return indices;
}

json to_external(const std::vector<int>& indices) {
    json j = json::array();
    for (int i : indices) j.push_back(i + 1);
    return j;
}

json signal_json(const obcs::SparseSignal& x) {
    return json{{"n", x.n}, {"support", to_external(x.support)}, {"values", x.values}};
}

json bits_json(const obcs::SignPattern& b) {
    json j = json::array();
    for (auto bit : b.bits) j.push_back(static_cast<int>(bit));
    return j;
}

json estimate_json(const obcs::ProbabilityEstimate& p) {
    const char* method = nullptr;
    switch (p.method) {
        case obcs::ProbMethod::exact_rational: method = "exact_rational"; break;
        case obcs::ProbMethod::closed_form: method = "closed_form"; break;
        case obcs::ProbMethod::quadrature: method = "quadrature"; break;
        case obcs::ProbMethod::monte_carlo: method = "monte_carlo"; break;
    }
    json j{{"value", p.value}, {"standard_error", p.standard_error}, {"method", method}};
    if (p.trials) j["trials"] = p.trials;
    if (p.exact) {
        j["exact"] = {{"numerator", p.exact->num.str()},
                      {"denominator_pow2", p.exact->den_pow2}};
    }
    return j;
}

json checks_json(const std::vector<obcs::AdmissibilityCheck>& checks) {
    json j = json::array();
    for (const auto& c : checks)
        j.push_back({{"name", c.name}, {"pass", c.pass}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void write_records(const std::vector<obcs::ExperimentRecord>& records, const std::string& out,
                   const std::string& format) {
    if (out.empty()) {
        for (const auto& r : records) std::cout << json(r).dump() << "\n";
        return;
    }
    if (format == "csv")
        obcs::export_csv(records, out);
    else
        obcs::persist(records, out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-bit compressive sensing verification laboratory"};
    app.require_subcommand(1);

    // shared option storage
    int n = 0, k = 0, m = 0, ell = 0;
    double R = 1.0, d = 0.0, epsilon = 0.1, beta = 0.0, delta = 0.1;
    std::string ensemble_str = "gaussian", seed_str = "1", out_path, format = "jsonl";
    std::string matrix_path, m_list_str, support_str, values_str, bits_str, kernel;
    std::uint64_t trials = 10000, budget = obcs::kDefaultSubsetBudget;
    bool at_most = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed_str, "seed, decimal or 0x-hex");
        cmd->add_option("--budget", budget, "enumeration budget");
        cmd->add_option("--out", out_path, "output file path");
        cmd->add_option("--format", format, "jsonl or csv")
            ->check(CLI::IsMember({"jsonl", "csv"}));
    };

    auto* gen = app.add_subcommand("gen-matrix", "generate a seeded measurement matrix");
    gen->add_option("--m", m)->required();
    gen->add_option("--n", n)->required();
    gen->add_option("--ensemble", ensemble_str)->check(CLI::IsMember({"gaussian", "rademacher"}));
    add_common(gen);

    auto* measure = app.add_subcommand("measure", "sign-measure a sparse signal");
    measure->add_option("--matrix", matrix_path)->required();
    measure->add_option("--support", support_str, "1-based indices, comma separated")->required();
    measure->add_option("--values", values_str)->required();

    auto* chk = app.add_subcommand("check-balanced", "exhaustive (n, ell, d)-balance check");
    chk->add_option("--matrix", matrix_path, "rows form the vector family V")->required();
    chk->add_option("--ell", ell)->required();
    chk->add_option("--d", d)->required();
    add_common(chk);

    auto* wit = app.add_subcommand("witness", "build the confusable pair for a subset");
    wit->add_option("--matrix", matrix_path)->required();
    wit->add_option("--support", support_str, "1-based subset S")->required();
    wit->add_option("--r-range", R, "dynamic range R");

    auto* val = app.add_subcommand("validate", "exhaustive universal-validity check");
    val->add_option("--matrix", matrix_path)->required();
    val->add_option("--k", k)->required();
    val->add_option("--r-range", R);
    val->add_flag("--at-most-k", at_most, "class allows supports up to size k");
    add_common(val);

    auto* dec = app.add_subcommand("decode", "supports consistent with a sign pattern");
    dec->add_option("--matrix", matrix_path)->required();
    dec->add_option("--k", k)->required();
    dec->add_option("--r-range", R);
    dec->add_option("--bits", bits_str, "pattern like +-+")->required();
    dec->add_flag("--at-most-k", at_most);
    add_common(dec);

    auto* prob = app.add_subcommand("prob", "evaluate a probability kernel");
    prob->add_option("--kernel", kernel)
        ->required()
        ->check(CLI::IsMember(
            {"small-ball", "gauss-single", "gauss-joint", "rad-single", "rad-joint", "mc"}));
    prob->add_option("--k", k);
    prob->add_option("--d", d);
    prob->add_option("--beta", beta);
    prob->add_option("--delta", delta);
    prob->add_option("--m", m);
    prob->add_option("--ensemble", ensemble_str);
    prob->add_option("--trials", trials);
    add_common(prob);

    auto* dc = app.add_subcommand("decaen", "evaluate the union failure lower bound");
    dc->add_option("--n", n)->required();
    dc->add_option("--k", k)->required();
    dc->add_option("--d", d)->required();
    dc->add_option("--m", m)->required();
    dc->add_option("--epsilon", epsilon);
    dc->add_option("--r-range", R);
    dc->add_option("--ensemble", ensemble_str);

    auto* thr = app.add_subcommand("thresholds", "m-threshold and scaling assumption report");
    thr->add_option("--n", n)->required();
    thr->add_option("--k", k)->required();
    thr->add_option("--r-range", R);
    thr->add_option("--epsilon", epsilon);

    auto* swb = app.add_subcommand("sweep-balance", "empirical Pr[V not balanced] over m");
    swb->add_option("--n", n)->required();
    swb->add_option("--k", k)->required();
    swb->add_option("--d", d)->required();
    swb->add_option("--m", m_list_str, "comma-separated m values")->required();
    swb->add_option("--ensemble", ensemble_str);
    swb->add_option("--trials", trials);
    add_common(swb);

    auto* swi = app.add_subcommand("sweep-invalidity", "empirical certificate rate over m");
    swi->add_option("--n", n)->required();
    swi->add_option("--k", k)->required();
    swi->add_option("--r-range", R);
    swi->add_option("--m", m_list_str)->required();
    swi->add_option("--ensemble", ensemble_str);
    swi->add_option("--trials", trials);
    add_common(swi);

    auto* rep = app.add_subcommand("report", "de Caen bound vs Monte Carlo union estimate");
    rep->add_option("--n", n)->required();
    rep->add_option("--k", k)->required();
    rep->add_option("--d", d)->required();
    rep->add_option("--m", m)->required();
    rep->add_option("--epsilon", epsilon);
    rep->add_option("--ensemble", ensemble_str);
    rep->add_option("--trials", trials);
    add_common(rep);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto ensemble = obcs::ensemble_from_string(ensemble_str);
        const obcs::RngSpec rng{obcs::parse_seed(seed_str), 0};

        if (gen->parsed()) {
            const auto A = obcs::gen_matrix(rng, static_cast<std::size_t>(m),
                                            static_cast<std::size_t>(n), ensemble);
            if (out_path.empty())
                obcs::write_matrix(A, std::cout);
            else
                obcs::write_matrix(A, out_path);
        } else if (measure->parsed()) {
            const auto A = obcs::read_matrix_file(matrix_path);
            obcs::SparseSignal x(static_cast<int>(A.n), to_internal(parse_int_list(support_str)),
                                 parse_double_list(values_str));
            emit(json{{"bits", bits_json(obcs::sign_measure(A, x))}});
        } else if (chk->parsed()) {
            const auto A = obcs::read_matrix_file(matrix_path);
            const auto result = obcs::is_balanced(A.full_rows(),
                                                  {static_cast<int>(A.n), ell, d}, budget);
            json j{{"balanced", result.balanced}, {"subsets_checked", result.subsets_checked}};
            if (result.witness) j["witness"] = to_external(*result.witness);
            emit(j);
        } else if (wit->parsed()) {
            const auto A = obcs::read_matrix_file(matrix_path);
            const auto w =
                obcs::build_witness_pair(A, to_internal(parse_int_list(support_str)), R);
            emit(json{{"S", to_external(w.S)},
                      {"x", signal_json(w.x)},
                      {"y", signal_json(w.y)},
                      {"dominance_holds", w.dominance_holds},
                      {"confusable", obcs::confusable(A, w.x, w.y)}});
        } else if (val->parsed()) {
            const auto A = obcs::read_matrix_file(matrix_path);
            obcs::SignalClassSpec spec{static_cast<int>(A.n), k, R,
                                       at_most ? obcs::SupportSizeMode::at_most_k
                                               : obcs::SupportSizeMode::exactly_k};
            const auto report = obcs::validate_universal(A, spec, {budget, false});
            json j{{"verdict", report.verdict == obcs::Verdict::valid     ? "valid"
                               : report.verdict == obcs::Verdict::invalid ? "invalid"
                                                                          : "inconclusive"},
                   {"pairs_checked", report.pairs_checked},
                   {"method_notes", report.method_notes}};
            if (report.counterexample) {
                j["counterexample"] = {{"x", signal_json(report.counterexample->first)},
                                       {"y", signal_json(report.counterexample->second)}};
            }
            emit(j);
        } else if (dec->parsed()) {
            const auto A = obcs::read_matrix_file(matrix_path);
            obcs::SignPattern b;
            for (char c : bits_str) {
                if (c == '+') b.bits.push_back(1);
                else if (c == '-') b.bits.push_back(-1);
                else throw std::invalid_argument("bits must be + or -");
            }
            obcs::SignalClassSpec spec{static_cast<int>(A.n), k, R,
                                       at_most ? obcs::SupportSizeMode::at_most_k
                                               : obcs::SupportSizeMode::exactly_k};
            json supports = json::array();
            for (const auto& s : obcs::decode_support(A, b, spec, {budget, false}))
                supports.push_back(to_external(s));
            emit(json{{"supports", supports}});
        } else if (prob->parsed()) {
            if (kernel == "small-ball") {
                const auto [lo, hi] = obcs::gaussian_small_ball_bounds(delta);
                emit(json{{"lower", lo}, {"upper", hi}});
            } else if (kernel == "gauss-single") {
                emit(estimate_json(obcs::gaussian_single_exact(k, d)));
            } else if (kernel == "gauss-joint") {
                emit(estimate_json(obcs::gaussian_joint_exact(k, d, beta)));
            } else if (kernel == "rad-single") {
                emit(estimate_json(obcs::rademacher_small_ball_exact(k)));
            } else if (kernel == "rad-joint") {
                emit(estimate_json(obcs::rademacher_joint_exact(k, beta)));
            } else {
                obcs::FailureModel model{k, d, m, ensemble};
                std::optional<double> overlap;
                if (prob->count("--beta")) overlap = beta;
                emit(estimate_json(obcs::mc_failure_prob(model, overlap, rng, trials)));
            }
        } else if (dc->parsed()) {
            obcs::BoundParams params{n, k, m, d, epsilon, R, ensemble, {}};
            const auto eval = obcs::union_failure_lower_bound(params);
            json vbeta = json::array();
            for (const auto& v : eval.vbeta_table) {
                vbeta.push_back({{"beta", v.beta},
                                 {"log_exact", v.log_exact},
                                 {"log_bound", v.bound_applicable ? json(v.log_bound) : json()},
                                 {"bound_applicable", v.bound_applicable}});
            }
            emit(json{{"log_alpha_exact", eval.log_alpha_exact},
                      {"log_alpha_lower", eval.log_alpha_lower},
                      {"vbeta", vbeta},
                      {"log_sum_A", eval.sums.log_A},
                      {"log_sum_B", eval.sums.log_B},
                      {"log_sum_C", eval.sums.log_C},
                      {"decaen_value", eval.decaen_value},
                      {"admissibility", checks_json(eval.admissibility)}});
        } else if (thr->parsed()) {
            const auto report = obcs::m_thresholds(n, k, R, epsilon);
            emit(json{{"lower_threshold", report.lower_threshold},
                      {"upper_threshold", report.upper_threshold},
                      {"induced_d", report.induced_d},
                      {"assumptions", checks_json(report.assumptions)}});
        } else if (swb->parsed()) {
            std::optional<obcs::JsonlWriter> writer;
            if (!out_path.empty() && format == "jsonl") writer.emplace(out_path);
            auto records = obcs::sweep_balanced_failure(n, k, d, parse_int_list(m_list_str),
                                                        trials, rng, ensemble, budget,
                                                        writer ? &*writer : nullptr);
            if (!writer) write_records(records, out_path, format);
        } else if (swi->parsed()) {
            std::optional<obcs::JsonlWriter> writer;
            if (!out_path.empty() && format == "jsonl") writer.emplace(out_path);
            auto records = obcs::sweep_invalidity(n, k, R, parse_int_list(m_list_str), trials,
                                                  rng, ensemble, budget,
                                                  writer ? &*writer : nullptr);
            if (!writer) write_records(records, out_path, format);
        } else if (rep->parsed()) {
            obcs::BoundParams params{n, k, m, d, epsilon, R, ensemble, {}};
            const auto report = obcs::run_decaen_report(params, trials, rng, budget);
            json j{{"decaen_value", report.evaluation.decaen_value},
                   {"mc_record", json(report.mc_record)},
                   {"ordering_ok", report.ordering_ok},
                   {"admissibility", checks_json(report.evaluation.admissibility)}};
            emit(j);
            if (!out_path.empty()) obcs::persist({report.mc_record}, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
