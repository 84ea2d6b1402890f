#include <array>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pvcomp/errors.hpp"
#include "pvcomp/report.hpp"
#include "pvcomp/sim.hpp"
#include "pvcomp/tables.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

pvcomp::VerificationTable table_from_args(const std::vector<double>& counts,
                                          const std::string& table_file) {
    std::array<double, 12> v{};
    if (!table_file.empty()) {
        if (!counts.empty())
            throw pvcomp::InvalidInput("give either 12 positional counts or --table, not both");
        std::ifstream in(table_file);
        if (!in) throw pvcomp::InvalidInput("cannot open table file: " + table_file);
        std::string line, tok;
        std::vector<double> parsed;
        while (std::getline(in, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ls(line);
            while (ls >> tok) {
                try {
                    parsed.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw pvcomp::InvalidInput("bad count '" + tok + "' in " + table_file);
                }
            }
        }
        if (parsed.size() != 12)
            throw pvcomp::InvalidInput("table file must hold exactly 12 counts, found " +
                                       std::to_string(parsed.size()));
        for (std::size_t i = 0; i < 12; ++i) v[i] = parsed[i];
    } else {
        if (counts.size() != 12)
            throw pvcomp::InvalidInput("expected 12 counts (a11 a10 a01 a00 b11 b10 b01 b00 "
                                       "c11 c10 c01 c00), got " +
                                       std::to_string(counts.size()));
        for (std::size_t i = 0; i < 12; ++i) v[i] = counts[i];
    }
    return pvcomp::VerificationTable::from_counts(v);
}

void emit(const std::string& text, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_file);
    if (!out) throw pvcomp::InvalidInput("cannot open output file: " + out_file);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compare the predictive values of two binary diagnostic tests when the gold "
                 "standard covers only part of the sample"};
    app.require_subcommand(1);

    // ---- emsempv ----
    auto* emsem = app.add_subcommand(
        "emsempv", "Maximum-likelihood comparison (EM estimates, SEM covariance)");
    std::vector<double> em_counts;
    std::string em_table_file, em_out;
    pvcomp::EmSemOptions em_opts;
    bool em_json = false;
    emsem->add_option("counts", em_counts,
                      "a11 a10 a01 a00 b11 b10 b01 b00 c11 c10 c01 c00");
    emsem->add_option("--table", em_table_file, "read the 12 counts from a file");
    emsem->add_option("--delta", em_opts.delta, "EM stop tolerance")->capture_default_str();
    emsem->add_option("--max-iter", em_opts.max_iter, "EM iteration cap")->capture_default_str();
    emsem->add_option("--conf", em_opts.confidence, "confidence level for intervals")
        ->capture_default_str();
    emsem->add_option("--alpha", em_opts.alpha, "test size")->capture_default_str();
    emsem->add_flag("--json", em_json, "emit JSON instead of text");
    emsem->add_option("--out", em_out, "write the report to a file");

    // ---- impv ----
    auto* impv = app.add_subcommand("impv", "Multiple-imputation comparison (MICE-style)");
    std::vector<double> mi_counts;
    std::string mi_table_file, mi_out, mi_conv = "paper";
    pvcomp::MiOptions mi_opts;
    bool mi_json = false;
    impv->add_option("counts", mi_counts, "a11 a10 a01 a00 b11 b10 b01 b00 c11 c10 c01 c00");
    impv->add_option("--table", mi_table_file, "read the 12 counts from a file");
    impv->add_option("--m", mi_opts.m, "number of imputations")->capture_default_str();
    impv->add_option("--cycles", mi_opts.cycles, "imputation cycles")->capture_default_str();
    impv->add_option("--seed", mi_opts.seed, "random seed")->capture_default_str();
    impv->add_option("--conf", mi_opts.confidence, "confidence level for intervals")
        ->capture_default_str();
    impv->add_option("--alpha", mi_opts.alpha, "test size")->capture_default_str();
    impv->add_option("--rubin-convention", mi_conv,
                     "pooling rule for the individual tests: paper or standard")
        ->capture_default_str();
    impv->add_flag("--json", mi_json, "emit JSON instead of text");
    impv->add_option("--out", mi_out, "write the report to a file");

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte Carlo size/power/bias studies");
    std::string scn_file, sim_out;
    int threads = 1;
    sim->add_option("scenarios", scn_file, "scenario file")->required();
    sim->add_option("--threads", threads, "worker threads")->capture_default_str();
    sim->add_option("--out", sim_out, "write the CSV to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (emsem->parsed()) {
            const auto table = table_from_args(em_counts, em_table_file);
            const auto report = pvcomp::run_emsem(table, em_opts);
            emit(em_json ? pvcomp::render_json(report) : pvcomp::render_text(report), em_out);
        } else if (impv->parsed()) {
            if (mi_conv == "paper")
                mi_opts.convention = pvcomp::RubinConvention::paper;
            else if (mi_conv == "standard")
                mi_opts.convention = pvcomp::RubinConvention::standard;
            else
                throw pvcomp::InvalidInput("--rubin-convention must be paper or standard");
            const auto table = table_from_args(mi_counts, mi_table_file);
            const auto report = pvcomp::run_mi(table, mi_opts);
            emit(mi_json ? pvcomp::render_json(report) : pvcomp::render_text(report), mi_out);
        } else if (sim->parsed()) {
            std::ifstream in(scn_file);
            if (!in) throw pvcomp::InvalidInput("cannot open scenario file: " + scn_file);
            const auto scenarios = pvcomp::parse_scenarios(in);
            std::ostringstream csv;
            pvcomp::write_csv_header(csv);
            for (const auto& scn : scenarios) {
                try {
                    const auto res = pvcomp::run_study(scn, threads);
                    pvcomp::write_csv_rows(csv, res);
                } catch (const pvcomp::Error& e) {
                    csv << scn.name << ",error,,,,,,,,,,,,,\"" << e.what() << "\"\n";
                    std::cerr << "scenario " << scn.name << " failed: " << e.what() << "\n";
                }
            }
            emit(csv.str(), sim_out);
        }
    } catch (const pvcomp::InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const pvcomp::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
