#include "pvcomp/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "pvcomp/em.hpp"
#include "pvcomp/errors.hpp"
#include "pvcomp/inference.hpp"
#include "pvcomp/mi.hpp"
#include "pvcomp/sem.hpp"

namespace pvcomp {

namespace {

const std::map<std::string, Method>& method_table() {
    static const std::map<std::string, Method> table = {
        {"em_global", Method::em_global},
        {"em_individual_raw", Method::em_individual_raw},
        {"em_individual_bonferroni", Method::em_individual_bonferroni},
        {"em_individual_holm", Method::em_individual_holm},
        {"mi_wald", Method::mi_wald},
        {"mi_combined_p", Method::mi_combined_p},
        {"mi_lrt", Method::mi_lrt},
        {"mi_leisenring_raw", Method::mi_leisenring_raw},
        {"mi_leisenring_bonferroni", Method::mi_leisenring_bonferroni},
        {"mi_leisenring_holm", Method::mi_leisenring_holm},
        {"mi_wang_raw", Method::mi_wang_raw},
        {"mi_wang_bonferroni", Method::mi_wang_bonferroni},
        {"mi_wang_holm", Method::mi_wang_holm},
        {"mi_kosinski_raw", Method::mi_kosinski_raw},
        {"mi_kosinski_bonferroni", Method::mi_kosinski_bonferroni},
        {"mi_kosinski_holm", Method::mi_kosinski_holm},
    };
    return table;
}

// outcome of one method on one replicate
enum class Outcome : unsigned char { reject, accept, error };

struct RepRecord {
    std::array<Outcome, 16> outcome{};
    std::array<double, 4> em_eta{};
    std::array<double, 4> mi_eta{};
    bool em_eta_ok = false;
    bool mi_eta_ok = false;
    long discards = 0;
};

Outcome pair_decision(double p_ppv, double p_npv, AdjustMethod adj, double alpha) {
    const Decisions d = adjust(p_ppv, p_npv, adj, alpha);
    return (d.reject_ppv || d.reject_npv) ? Outcome::reject : Outcome::accept;
}

bool needs_em(const std::vector<Method>& methods) {
    for (Method m : methods)
        if (!is_mi_method(m)) return true;
    return false;
}

bool needs_mi(const std::vector<Method>& methods) {
    for (Method m : methods)
        if (is_mi_method(m)) return true;
    return false;
}

void run_replicate(const Scenario& scn, std::uint64_t rep, RepRecord& rec) {
    Rng rng = Rng::substream(scn.seed, rep);
    const VerificationTable table = draw_table(scn, rng, &rec.discards);

    for (auto& o : rec.outcome) o = Outcome::error;

    if (needs_em(scn.methods)) {
        try {
            const EmResult em = run_em(table);
            if (!em.converged) throw NotConverged("EM hit the iteration cap");
            if (em.boundary) throw BoundaryEstimate("estimate on the boundary");
            rec.em_eta = {em.theta_hat.ppv1, em.theta_hat.npv1, em.theta_hat.ppv2,
                          em.theta_hat.npv2};
            rec.em_eta_ok = true;
            const SemResult sem = sem_covariance(table, em);
            PvInference inf;
            inf.eta = rec.em_eta;
            inf.sigma = pv_block(sem.sigma);
            inf.n = table.n();

            auto [q2, pq] = global_test(inf);
            rec.outcome[static_cast<int>(Method::em_global)] =
                pq < scn.alpha ? Outcome::reject : Outcome::accept;
            const auto z = individual_tests(inf);
            rec.outcome[static_cast<int>(Method::em_individual_raw)] =
                pair_decision(z[2], z[3], AdjustMethod::raw, scn.alpha);
            rec.outcome[static_cast<int>(Method::em_individual_bonferroni)] =
                pair_decision(z[2], z[3], AdjustMethod::bonferroni, scn.alpha);
            rec.outcome[static_cast<int>(Method::em_individual_holm)] =
                pair_decision(z[2], z[3], AdjustMethod::holm, scn.alpha);
        } catch (const Error&) {
            // all EM-family outcomes stay 'error'
        }
    }

    if (needs_mi(scn.methods)) {
        try {
            ImputationSet set = impute_m(table, scn.mi_m, scn.mi_cycles, rng);
            const PooledEstimates pe = pooled_estimates(set);
            rec.mi_eta = pe.eta_bar;
            rec.mi_eta_ok = true;

            auto global_outcome = [&](GlobalMiTest (*fn)(const ImputationSet&), Method m) {
                try {
                    const GlobalMiTest g = fn(set);
                    rec.outcome[static_cast<int>(m)] =
                        g.pvalue < scn.alpha ? Outcome::reject : Outcome::accept;
                } catch (const Error&) {
                }
            };
            global_outcome(&wald_global, Method::mi_wald);
            global_outcome(&combine_pvalues, Method::mi_combined_p);
            global_outcome(&combined_lrt, Method::mi_lrt);

            auto individual_outcomes = [&](IndividualMethod im, Method raw, Method bonf,
                                           Method holm) {
                try {
                    const MiIndividual r = individual_mi(set, im, scn.rubin);
                    rec.outcome[static_cast<int>(raw)] =
                        pair_decision(r.ppv.pvalue, r.npv.pvalue, AdjustMethod::raw, scn.alpha);
                    rec.outcome[static_cast<int>(bonf)] = pair_decision(
                        r.ppv.pvalue, r.npv.pvalue, AdjustMethod::bonferroni, scn.alpha);
                    rec.outcome[static_cast<int>(holm)] =
                        pair_decision(r.ppv.pvalue, r.npv.pvalue, AdjustMethod::holm, scn.alpha);
                } catch (const Error&) {
                }
            };
            individual_outcomes(IndividualMethod::leisenring, Method::mi_leisenring_raw,
                                Method::mi_leisenring_bonferroni, Method::mi_leisenring_holm);
            individual_outcomes(IndividualMethod::wang, Method::mi_wang_raw,
                                Method::mi_wang_bonferroni, Method::mi_wang_holm);
            individual_outcomes(IndividualMethod::kosinski, Method::mi_kosinski_raw,
                                Method::mi_kosinski_bonferroni, Method::mi_kosinski_holm);
        } catch (const Error&) {
            // all MI-family outcomes stay 'error'
        }
    }
}

}  // namespace

std::string method_name(Method m) {
    for (const auto& [name, val] : method_table())
        if (val == m) return name;
    return "unknown";
}

Method method_from_name(const std::string& name) {
    const auto& table = method_table();
    const auto it = table.find(name);
    if (it == table.end()) throw InvalidInput("unknown method: " + name);
    return it->second;
}

bool is_mi_method(Method m) {
    switch (m) {
        case Method::em_global:
        case Method::em_individual_raw:
        case Method::em_individual_bonferroni:
        case Method::em_individual_holm:
            return false;
        default:
            return true;
    }
}

VerificationTable draw_table(const Scenario& scn, Rng& rng, long* discards) {
    CellProbs probs;
    try {
        probs = cell_probabilities(scn.theta, scn.lambdas);
    } catch (const Error& e) {
        throw InfeasibleScenario(std::string("scenario infeasible: ") + e.what());
    }
    const auto flat = probs.flat();
    long attempts = 0;
    for (;;) {
        const std::vector<long> cells = rng.multinomial(scn.n, std::span<const double>(flat));
        VerificationTable t;
        for (std::size_t k = 0; k < 4; ++k) {
            t.a[k] = static_cast<double>(cells[k]);
            t.b[k] = static_cast<double>(cells[4 + k]);
            t.c[k] = static_cast<double>(cells[8 + k]);
        }
        if (scn.require_mi_feasible) {
            bool ok = true;
            for (std::size_t k = 0; k < 4; ++k)
                if (t.a[k] == 0.0 || t.b[k] == 0.0) ok = false;
            if (!ok) {
                if (discards) ++*discards;
                if (++attempts >= 10000000)
                    throw InfeasibleScenario(
                        "no acceptable sample after 1e7 draws; a verified cell is "
                        "effectively impossible at this configuration");
                continue;
            }
        }
        return t;
    }
}

StudyResult run_study(const Scenario& scn, int threads) {
    if (scn.n_reps < 1) throw InvalidInput("n_reps must be at least 1");
    if (scn.methods.empty()) throw InvalidInput("no methods requested");
    // surface infeasible scenarios before spawning workers
    cell_probabilities(scn.theta, scn.lambdas);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<RepRecord> records(scn.n_reps);

    const int workers = std::max(1, threads);
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= scn.n_reps) return;
            run_replicate(scn, static_cast<std::uint64_t>(rep), records[rep]);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    StudyResult out;
    out.scenario = scn.name;
    out.n = scn.n;
    out.n_reps = scn.n_reps;
    out.alpha = scn.alpha;

    const double truth[4] = {scn.theta.ppv1, scn.theta.npv1, scn.theta.ppv2, scn.theta.npv2};
    for (const RepRecord& rec : records) {
        out.discards += rec.discards;
        if (rec.em_eta_ok) {
            ++out.em_bias_used;
            for (std::size_t i = 0; i < 4; ++i)
                out.em_bias[i] += (rec.em_eta[i] - truth[i]) / truth[i];
        }
        if (rec.mi_eta_ok) {
            ++out.mi_bias_used;
            for (std::size_t i = 0; i < 4; ++i)
                out.mi_bias[i] += (rec.mi_eta[i] - truth[i]) / truth[i];
        }
    }
    for (std::size_t i = 0; i < 4; ++i) {
        if (out.em_bias_used > 0) out.em_bias[i] /= out.em_bias_used;
        if (out.mi_bias_used > 0) out.mi_bias[i] /= out.mi_bias_used;
    }

    for (Method m : scn.methods) {
        MethodResult mr;
        mr.method = m;
        for (const RepRecord& rec : records) {
            switch (rec.outcome[static_cast<int>(m)]) {
                case Outcome::reject: ++mr.rejections; ++mr.used; break;
                case Outcome::accept: ++mr.used; break;
                case Outcome::error: ++mr.errors; break;
            }
        }
        mr.rate = mr.used > 0 ? static_cast<double>(mr.rejections) / mr.used : 0.0;
        out.methods.push_back(mr);
    }

    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::vector<Scenario> parse_scenarios(std::istream& in) {
    std::vector<Scenario> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        Scenario scn;
        bool any = false;
        while (ls >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw InvalidInput("line " + std::to_string(lineno) + ": expected key=value, got '" +
                                   tok + "'");
            const std::string key = tok.substr(0, eq);
            const std::string val = tok.substr(eq + 1);
            any = true;
            try {
                if (key == "name") scn.name = val;
                else if (key == "ppv1") scn.theta.ppv1 = std::stod(val);
                else if (key == "npv1") scn.theta.npv1 = std::stod(val);
                else if (key == "ppv2") scn.theta.ppv2 = std::stod(val);
                else if (key == "npv2") scn.theta.npv2 = std::stod(val);
                else if (key == "p") scn.theta.p = std::stod(val);
                else if (key == "alpha1") scn.theta.alpha1 = std::stod(val);
                else if (key == "alpha0") scn.theta.alpha0 = std::stod(val);
                else if (key == "lambdas") {
                    std::istringstream vs(val);
                    std::string piece;
                    for (std::size_t k = 0; k < 4; ++k) {
                        if (!std::getline(vs, piece, ','))
                            throw InvalidInput("lambdas needs four values");
                        scn.lambdas.lam[k] = std::stod(piece);
                    }
                } else if (key == "n") scn.n = std::stol(val);
                else if (key == "reps") scn.n_reps = std::stoi(val);
                else if (key == "alpha") scn.alpha = std::stod(val);
                else if (key == "seed") scn.seed = std::stoull(val);
                else if (key == "mi_m") scn.mi_m = std::stoi(val);
                else if (key == "mi_cycles") scn.mi_cycles = std::stoi(val);
                else if (key == "require_mi_feasible") scn.require_mi_feasible = val != "0";
                else if (key == "rubin") {
                    if (val == "paper") scn.rubin = RubinConvention::paper;
                    else if (val == "standard") scn.rubin = RubinConvention::standard;
                    else throw InvalidInput("rubin must be paper or standard");
                }
                else if (key == "methods") {
                    std::istringstream vs(val);
                    std::string piece;
                    while (std::getline(vs, piece, ','))
                        scn.methods.push_back(method_from_name(piece));
                } else
                    throw InvalidInput("unknown key '" + key + "'");
            } catch (const std::invalid_argument&) {
                throw InvalidInput("line " + std::to_string(lineno) + ": bad value for " + key);
            }
        }
        if (!any) continue;
        if (scn.n < 1) throw InvalidInput("line " + std::to_string(lineno) + ": n missing");
        if (scn.methods.empty())
            throw InvalidInput("line " + std::to_string(lineno) + ": methods missing");
        out.push_back(std::move(scn));
    }
    return out;
}

void write_csv_header(std::ostream& out) {
    out << "scenario,method,n,n_reps,alpha,rate,rejections,used,errors,discards,"
           "bias_ppv1,bias_npv1,bias_ppv2,bias_npv2,seconds\n";
}

void write_csv_rows(std::ostream& out, const StudyResult& res) {
    for (const MethodResult& mr : res.methods) {
        const auto& bias = is_mi_method(mr.method) ? res.mi_bias : res.em_bias;
        out << res.scenario << ',' << method_name(mr.method) << ',' << res.n << ',' << res.n_reps
            << ',' << res.alpha << ',' << mr.rate << ',' << mr.rejections << ',' << mr.used << ','
            << mr.errors << ',' << res.discards << ',' << bias[0] << ',' << bias[1] << ','
            << bias[2] << ',' << bias[3] << ',' << res.seconds << '\n';
    }
}

}  // namespace pvcomp
