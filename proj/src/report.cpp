#include "pvcomp/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pvcomp/distributions.hpp"
#include "pvcomp/errors.hpp"

namespace pvcomp {

using nlohmann::json;

namespace {

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json cells_json(const Cells& c) { return json{c[0], c[1], c[2], c[3]}; }

json decisions_json(const Decisions& d) {
    return json{{"reject_ppv", d.reject_ppv}, {"reject_npv", d.reject_npv}};
}

json interval_json(const Interval& iv) { return json{iv.lo, iv.hi}; }

json pooled_test_json(const PooledScalar& s) {
    json j{{"estimate", s.estimate}, {"variance", s.variance}, {"statistic", s.statistic},
           {"pvalue", s.pvalue}};
    j["df"] = std::isinf(s.df) ? json("inf") : json(s.df);
    return j;
}

json global_mi_json(const GlobalMiTest& g) {
    json j{{"statistic", g.stat}, {"pvalue", g.pvalue}, {"r", g.r}};
    j["df2"] = std::isinf(g.df2) ? json("inf") : json(g.df2);
    if (g.r_floored) j["r_floored"] = true;
    return j;
}

void print_matrix(std::ostringstream& os, const char* title, const Matrix& m) {
    os << title << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << "   ";
        for (std::size_t j = 0; j < m.cols(); ++j) os << " " << fmt_num(m(i, j));
        os << "\n";
    }
}

void print_table(std::ostringstream& os, const VerificationTable& t) {
    os << "Observed table (cells 11 10 01 00)\n";
    os << "    verified D=1:   " << fmt_num(t.a[0]) << " " << fmt_num(t.a[1]) << " "
       << fmt_num(t.a[2]) << " " << fmt_num(t.a[3]) << "\n";
    os << "    verified D=0:   " << fmt_num(t.b[0]) << " " << fmt_num(t.b[1]) << " "
       << fmt_num(t.b[2]) << " " << fmt_num(t.b[3]) << "\n";
    os << "    unverified:     " << fmt_num(t.c[0]) << " " << fmt_num(t.c[1]) << " "
       << fmt_num(t.c[2]) << " " << fmt_num(t.c[3]) << "\n";
}

void print_decision_line(std::ostringstream& os, const char* label, const Decisions& d) {
    os << "    " << label << ": PPV " << (d.reject_ppv ? "reject" : "keep") << ", NPV "
       << (d.reject_npv ? "reject" : "keep") << "\n";
}

std::string df_text(double df) {
    if (std::isinf(df)) return "inf";
    return fmt_num(df);
}

}  // namespace

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

EmSemReport run_emsem(const VerificationTable& table, const EmSemOptions& opts) {
    table.validate(true);
    EmSemReport rep;
    rep.table = table;
    rep.options = opts;

    EmOptions em_opts;
    em_opts.delta = opts.delta;
    em_opts.max_iter = opts.max_iter;
    rep.em = run_em(table, em_opts);
    if (!rep.em.converged)
        throw NotConverged("EM did not converge in " + std::to_string(opts.max_iter) +
                           " iterations");
    if (rep.em.boundary)
        throw BoundaryEstimate("a predictive-value estimate reached 0 or 1");

    rep.sem = sem_covariance(table, rep.em);
    for (std::size_t i = 0; i < 4; ++i) rep.se[i] = std::sqrt(rep.sem.sigma(i, i));

    PvInference inf;
    inf.eta = {rep.em.theta_hat.ppv1, rep.em.theta_hat.npv1, rep.em.theta_hat.ppv2,
               rep.em.theta_hat.npv2};
    inf.sigma = pv_block(rep.sem.sigma);
    inf.n = table.n();
    rep.tests = make_report(inf, opts.confidence, opts.alpha);
    return rep;
}

MiReport run_mi(const VerificationTable& table, const MiOptions& opts) {
    table.validate(false);
    MiReport rep;
    rep.table = table;
    rep.options = opts;

    Rng rng(opts.seed);
    ImputationSet set = impute_m(table, opts.m, opts.cycles, rng);
    rep.pooled = pooled_estimates(set);
    rep.wald = wald_global(set);
    rep.combined = combine_pvalues(set);
    rep.lrt = combined_lrt(set);
    rep.wang = individual_mi(set, IndividualMethod::wang, opts.convention);
    rep.kosinski = individual_mi(set, IndividualMethod::kosinski, opts.convention);
    rep.leisenring = individual_mi(set, IndividualMethod::leisenring, opts.convention);

    auto all_decisions = [&](const MiIndividual& r, Decisions& raw, Decisions& bonf,
                             Decisions& holm) {
        raw = adjust(r.ppv.pvalue, r.npv.pvalue, AdjustMethod::raw, opts.alpha);
        bonf = adjust(r.ppv.pvalue, r.npv.pvalue, AdjustMethod::bonferroni, opts.alpha);
        holm = adjust(r.ppv.pvalue, r.npv.pvalue, AdjustMethod::holm, opts.alpha);
    };
    all_decisions(rep.wang, rep.wang_raw, rep.wang_bonferroni, rep.wang_holm);
    all_decisions(rep.kosinski, rep.kosinski_raw, rep.kosinski_bonferroni, rep.kosinski_holm);
    all_decisions(rep.leisenring, rep.leisenring_raw, rep.leisenring_bonferroni,
                  rep.leisenring_holm);

    auto ci_of = [&](const PooledScalar& s) {
        const double crit = std::isinf(s.df)
                                ? normal_quantile(0.5 * (1.0 + opts.confidence))
                                : t_critical(s.df, opts.confidence);
        const double half = crit * std::sqrt(s.variance);
        return Interval{s.estimate - half, s.estimate + half};
    };
    rep.ci_ppv_diff = ci_of(rep.wang.ppv);
    rep.ci_npv_diff = ci_of(rep.wang.npv);
    return rep;
}

std::string render_text(const EmSemReport& r) {
    std::ostringstream os;
    os << "Predictive-value comparison under partial verification (EM-SEM)\n";
    print_table(os, r.table);
    os << "EM\n";
    os << "    iterations: " << r.em.iterations << " (converged, delta=" << fmt_num(r.options.delta)
       << ", d0=c/2)\n";
    os << "    log-likelihood: " << fmt_num(r.em.loglik_trajectory.back()) << "\n";
    const Theta& th = r.em.theta_hat;
    os << "Estimates (MLE +- SE)\n";
    os << "    PPV1: " << fmt_num(th.ppv1) << " +- " << fmt_num(r.se[0]) << "\n";
    os << "    NPV1: " << fmt_num(th.npv1) << " +- " << fmt_num(r.se[1]) << "\n";
    os << "    PPV2: " << fmt_num(th.ppv2) << " +- " << fmt_num(r.se[2]) << "\n";
    os << "    NPV2: " << fmt_num(th.npv2) << " +- " << fmt_num(r.se[3]) << "\n";
    os << "    prevalence: " << fmt_num(th.p) << "  alpha1: " << fmt_num(th.alpha1)
       << "  alpha0: " << fmt_num(th.alpha0) << "\n";
    print_matrix(os, "Inverse complete-data information (7x7)", r.sem.i_oc_inv);
    print_matrix(os, "Rate matrix DM (7x7)", r.sem.dm);
    print_matrix(os, "Covariance of the predictive values (4x4)", pv_block(r.sem.sigma));
    os << "    asymmetry diagnostic: " << fmt_num(r.sem.asymmetry) << "\n";
    os << "Global test\n";
    os << "    Q2: " << fmt_num(r.tests.q2) << "  p: " << fmt_num(r.tests.q2_pvalue) << "\n";
    os << "Individual tests\n";
    os << "    PPV: z = " << fmt_num(r.tests.z_ppv) << "  p = " << fmt_num(r.tests.p_ppv) << "\n";
    os << "    NPV: z = " << fmt_num(r.tests.z_npv) << "  p = " << fmt_num(r.tests.p_npv) << "\n";
    os << "Decisions at alpha = " << fmt_num(r.tests.alpha) << "\n";
    print_decision_line(os, "unadjusted", r.tests.raw);
    print_decision_line(os, "bonferroni", r.tests.bonferroni);
    print_decision_line(os, "holm      ", r.tests.holm);
    os << "Difference intervals (" << fmt_num(100.0 * r.tests.confidence) << "%)\n";
    os << "    PPV1-PPV2: (" << fmt_num(r.tests.ci_ppv_diff.lo) << ", "
       << fmt_num(r.tests.ci_ppv_diff.hi) << ")\n";
    os << "    NPV1-NPV2: (" << fmt_num(r.tests.ci_npv_diff.lo) << ", "
       << fmt_num(r.tests.ci_npv_diff.hi) << ")\n";
    os << "Provenance: method=em-sem version=" << kVersion << " delta=" << fmt_num(r.options.delta)
       << " max_iter=" << r.options.max_iter << "\n";
    return os.str();
}

std::string render_json(const EmSemReport& r) {
    json j;
    j["method"] = "em-sem";
    j["version"] = kVersion;
    j["table"] = {{"a", cells_json(r.table.a)}, {"b", cells_json(r.table.b)},
                  {"c", cells_json(r.table.c)}};
    j["options"] = {{"delta", r.options.delta},
                    {"max_iter", r.options.max_iter},
                    {"confidence", r.options.confidence},
                    {"alpha", r.options.alpha},
                    {"d0", "c/2"}};
    const Theta& th = r.em.theta_hat;
    j["em"] = {{"iterations", r.em.iterations},
               {"converged", r.em.converged},
               {"loglik", r.em.loglik_trajectory.back()},
               {"theta",
                {{"ppv1", th.ppv1},
                 {"npv1", th.npv1},
                 {"ppv2", th.ppv2},
                 {"npv2", th.npv2},
                 {"p", th.p},
                 {"alpha1", th.alpha1},
                 {"alpha0", th.alpha0}}}};
    j["se"] = {r.se[0], r.se[1], r.se[2], r.se[3]};
    j["i_oc_inv"] = matrix_json(r.sem.i_oc_inv);
    j["dm"] = matrix_json(r.sem.dm);
    j["sigma_pv"] = matrix_json(pv_block(r.sem.sigma));
    j["asymmetry"] = r.sem.asymmetry;
    j["global"] = {{"q2", r.tests.q2}, {"pvalue", r.tests.q2_pvalue}};
    j["individual"] = {{"z_ppv", r.tests.z_ppv},
                       {"z_npv", r.tests.z_npv},
                       {"p_ppv", r.tests.p_ppv},
                       {"p_npv", r.tests.p_npv}};
    j["decisions"] = {{"raw", decisions_json(r.tests.raw)},
                      {"bonferroni", decisions_json(r.tests.bonferroni)},
                      {"holm", decisions_json(r.tests.holm)}};
    j["ci"] = {{"confidence", r.tests.confidence},
               {"ppv_diff", interval_json(r.tests.ci_ppv_diff)},
               {"npv_diff", interval_json(r.tests.ci_npv_diff)}};
    return j.dump(2);
}

std::string render_text(const MiReport& r) {
    std::ostringstream os;
    os << "Predictive-value comparison under partial verification (multiple imputation)\n";
    print_table(os, r.table);
    os << "Imputation\n";
    os << "    m: " << r.options.m << "  cycles: " << r.options.cycles
       << "  seed: " << r.options.seed << "  test pooling: "
       << (r.options.convention == RubinConvention::paper ? "paper" : "standard") << "\n";
    os << "Pooled estimates (+- SE, within + between variance)\n";
    os << "    PPV1: " << fmt_num(r.pooled.eta_bar[0]) << " +- " << fmt_num(r.pooled.se[0]) << "\n";
    os << "    NPV1: " << fmt_num(r.pooled.eta_bar[1]) << " +- " << fmt_num(r.pooled.se[1]) << "\n";
    os << "    PPV2: " << fmt_num(r.pooled.eta_bar[2]) << " +- " << fmt_num(r.pooled.se[2]) << "\n";
    os << "    NPV2: " << fmt_num(r.pooled.eta_bar[3]) << " +- " << fmt_num(r.pooled.se[3]) << "\n";
    print_matrix(os, "Pooled covariance of the predictive values (4x4)", r.pooled.total);
    os << "Global tests\n";
    os << "    Wald:        F = " << fmt_num(r.wald.stat) << "  df = (2, " << df_text(r.wald.df2)
       << ")  p = " << fmt_num(r.wald.pvalue) << "\n";
    os << "    combined-p:  F = " << fmt_num(r.combined.stat) << "  df = (2, "
       << df_text(r.combined.df2) << ")  p = " << fmt_num(r.combined.pvalue) << "\n";
    os << "    LRT:         F = " << fmt_num(r.lrt.stat) << "  df = (2, " << df_text(r.lrt.df2)
       << ")  p = " << fmt_num(r.lrt.pvalue) << (r.lrt.r_floored ? "  (r floored at 0)" : "")
       << "\n";
    auto individual = [&](const char* label, const MiIndividual& t, const Decisions& raw,
                          const Decisions& bonf, const Decisions& holm) {
        os << label << "\n";
        os << "    PPV: stat = " << fmt_num(t.ppv.statistic) << "  df = " << df_text(t.ppv.df)
           << "  p = " << fmt_num(t.ppv.pvalue) << "\n";
        os << "    NPV: stat = " << fmt_num(t.npv.statistic) << "  df = " << df_text(t.npv.df)
           << "  p = " << fmt_num(t.npv.pvalue) << "\n";
        print_decision_line(os, "unadjusted", raw);
        print_decision_line(os, "bonferroni", bonf);
        print_decision_line(os, "holm      ", holm);
    };
    individual("Wald-contrast pooled test", r.wang, r.wang_raw, r.wang_bonferroni, r.wang_holm);
    individual("Pooled-score test", r.kosinski, r.kosinski_raw, r.kosinski_bonferroni,
               r.kosinski_holm);
    os << "Averaged-score test (mean z over imputations, normal reference)\n";
    os << "    PPV: z = " << fmt_num(r.leisenring.ppv.statistic)
       << "  p = " << fmt_num(r.leisenring.ppv.pvalue) << "\n";
    os << "    NPV: z = " << fmt_num(r.leisenring.npv.statistic)
       << "  p = " << fmt_num(r.leisenring.npv.pvalue) << "\n";
    print_decision_line(os, "unadjusted", r.leisenring_raw);
    print_decision_line(os, "bonferroni", r.leisenring_bonferroni);
    print_decision_line(os, "holm      ", r.leisenring_holm);
    os << "Difference intervals (" << fmt_num(100.0 * r.options.confidence) << "%)\n";
    os << "    PPV1-PPV2: (" << fmt_num(r.ci_ppv_diff.lo) << ", " << fmt_num(r.ci_ppv_diff.hi)
       << ")\n";
    os << "    NPV1-NPV2: (" << fmt_num(r.ci_npv_diff.lo) << ", " << fmt_num(r.ci_npv_diff.hi)
       << ")\n";
    os << "Provenance: method=mi version=" << kVersion << " m=" << r.options.m
       << " cycles=" << r.options.cycles << " seed=" << r.options.seed << " estimate_pooling=standard\n";
    return os.str();
}

std::string render_json(const MiReport& r) {
    json j;
    j["method"] = "mi";
    j["version"] = kVersion;
    j["table"] = {{"a", cells_json(r.table.a)}, {"b", cells_json(r.table.b)},
                  {"c", cells_json(r.table.c)}};
    j["options"] = {{"m", r.options.m},
                    {"cycles", r.options.cycles},
                    {"seed", r.options.seed},
                    {"test_pooling",
                     r.options.convention == RubinConvention::paper ? "paper" : "standard"},
                    {"estimate_pooling", "standard"},
                    {"confidence", r.options.confidence},
                    {"alpha", r.options.alpha}};
    j["pooled"] = {{"eta_bar", {r.pooled.eta_bar[0], r.pooled.eta_bar[1], r.pooled.eta_bar[2],
                                r.pooled.eta_bar[3]}},
                   {"se", {r.pooled.se[0], r.pooled.se[1], r.pooled.se[2], r.pooled.se[3]}},
                   {"sigma_bar", matrix_json(r.pooled.sigma_bar)},
                   {"b_between", matrix_json(r.pooled.b_between)},
                   {"total", matrix_json(r.pooled.total)}};
    j["global"] = {{"wald", global_mi_json(r.wald)},
                   {"combined_p", global_mi_json(r.combined)},
                   {"lrt", global_mi_json(r.lrt)}};
    j["individual"] = {
        {"wang",
         {{"ppv", pooled_test_json(r.wang.ppv)},
          {"npv", pooled_test_json(r.wang.npv)},
          {"raw", decisions_json(r.wang_raw)},
          {"bonferroni", decisions_json(r.wang_bonferroni)},
          {"holm", decisions_json(r.wang_holm)}}},
        {"kosinski",
         {{"ppv", pooled_test_json(r.kosinski.ppv)},
          {"npv", pooled_test_json(r.kosinski.npv)},
          {"raw", decisions_json(r.kosinski_raw)},
          {"bonferroni", decisions_json(r.kosinski_bonferroni)},
          {"holm", decisions_json(r.kosinski_holm)}}},
        {"leisenring",
         {{"ppv", pooled_test_json(r.leisenring.ppv)},
          {"npv", pooled_test_json(r.leisenring.npv)},
          {"raw", decisions_json(r.leisenring_raw)},
          {"bonferroni", decisions_json(r.leisenring_bonferroni)},
          {"holm", decisions_json(r.leisenring_holm)}}}};
    j["ci"] = {{"confidence", r.options.confidence},
               {"ppv_diff", interval_json(r.ci_ppv_diff)},
               {"npv_diff", interval_json(r.ci_npv_diff)}};
    return j.dump(2);
}

}  // namespace pvcomp
