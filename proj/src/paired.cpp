#include "pvcomp/paired.hpp"

#include <cmath>

#include "pvcomp/errors.hpp"

namespace pvcomp {

namespace {

struct Counts {
    double x11, x10, x01, x00;
    double y11, y10, y01, y00;
    double n;
};

Counts unpack(const CompleteTable& t) {
    return {t.x[kCell11], t.x[kCell10], t.x[kCell01], t.x[kCell00],
            t.y[kCell11], t.y[kCell10], t.y[kCell01], t.y[kCell00], t.n()};
}

double checked_ratio(double num, double den, const char* margin) {
    if (den <= 0.0) throw EmptyMargin(std::string("empty margin: ") + margin);
    return num / den;
}

}  // namespace

PvInference PairedEstimates::inference(double n) const {
    PvInference inf;
    inf.eta = {ppv1, npv1, ppv2, npv2};
    inf.sigma = sigma;
    inf.n = n;
    return inf;
}

PairedEstimates estimates(const CompleteTable& t) {
    const Counts c = unpack(t);
    PairedEstimates e{};
    const double m1p = c.x11 + c.x10 + c.y11 + c.y10;  // T1 positive
    const double m1n = c.x01 + c.x00 + c.y01 + c.y00;  // T1 negative
    const double m2p = c.x11 + c.x01 + c.y11 + c.y01;  // T2 positive
    const double m2n = c.x10 + c.x00 + c.y10 + c.y00;  // T2 negative
    e.ppv1 = checked_ratio(c.x11 + c.x10, m1p, "T1 positive");
    e.npv1 = checked_ratio(c.y01 + c.y00, m1n, "T1 negative");
    e.ppv2 = checked_ratio(c.x11 + c.x01, m2p, "T2 positive");
    e.npv2 = checked_ratio(c.y10 + c.y00, m2n, "T2 negative");

    // Delta-method covariance of the multinomial cell proportions. The
    // variances are the binomial p(1-p)/m of each column proportion; the
    // cross terms were validated entry-by-entry against a
    // finite-difference oracle.
    Matrix& s = e.sigma;
    s(0, 0) = (c.x10 + c.x11) * (c.y10 + c.y11) / (m1p * m1p * m1p);
    s(1, 1) = (c.x00 + c.x01) * (c.y00 + c.y01) / (m1n * m1n * m1n);
    s(2, 2) = (c.x01 + c.x11) * (c.y01 + c.y11) / (m2p * m2p * m2p);
    s(3, 3) = (c.x00 + c.x10) * (c.y00 + c.y10) / (m2n * m2n * m2n);

    s(0, 2) = s(2, 0) =
        (c.x01 * c.x10 * c.y11 +
         c.x11 * (c.y01 * (c.y10 + c.y11) + c.y11 * (c.x01 + c.x10 + c.x11 + c.y10 + c.y11))) /
        (m2p * m2p * m1p * m1p);
    s(0, 3) = s(3, 0) = -(c.x00 * (c.x10 + c.x11) * c.y10 +
                          c.x10 * c.y10 * (c.x10 + c.x11 + c.y00 + c.y10) +
                          c.x10 * (c.y00 + c.y10) * c.y11) /
                        (m2n * m2n * m1p * m1p);
    s(1, 2) = s(2, 1) = -(c.x00 * (c.x01 + c.x11) * c.y01 +
                          c.x01 * c.y01 * (c.x01 + c.x11 + c.y00 + c.y01) +
                          c.x01 * (c.y00 + c.y01) * c.y11) /
                        (m1n * m1n * m2p * m2p);
    s(1, 3) = s(3, 1) = (c.y10 * c.y01 * c.x00 +
                         c.y00 * (c.x10 * (c.x01 + c.x00) +
                                  c.x00 * (c.y10 + c.y01 + c.y00 + c.x01 + c.x00))) /
                        (m1n * m1n * m2n * m2n);
    // Cov(PPV_h, NPV_h) = 0: a column proportion and its complement's
    // column share no cells.
    s(0, 1) = s(1, 0) = 0.0;
    s(2, 3) = s(3, 2) = 0.0;
    return e;
}

ContrastStat wang_contrast(const CompleteTable& t, bool positive) {
    const PairedEstimates e = estimates(t);
    const Matrix& s = e.sigma;
    if (positive)
        return {e.ppv1 - e.ppv2, s(0, 0) + s(2, 2) - 2.0 * s(0, 2)};
    return {e.npv1 - e.npv2, s(1, 1) + s(3, 3) - 2.0 * s(1, 3)};
}

ZPair wang_tests(const CompleteTable& t) {
    const ContrastStat p = wang_contrast(t, true);
    const ContrastStat n = wang_contrast(t, false);
    if (p.variance <= 0.0 || n.variance <= 0.0)
        throw ZeroVarianceContrast("Wald contrast variance not positive");
    return {p.diff / std::sqrt(p.variance), n.diff / std::sqrt(n.variance)};
}

ZPair leisenring_tests(const CompleteTable& t) {
    const Counts c = unpack(t);

    const double den1 = 2.0 * c.x11 + c.x01 + c.x10 + 2.0 * c.y11 + c.y10 + c.y01;
    if (den1 <= 0.0) throw ZeroVarianceContrast("no positive results for the PPV score");
    const double z1 = (c.x11 + c.x01 + c.y11 + c.y01) / den1;
    const double d1 = (2.0 * c.x11 + c.x01 + c.x10) / den1;
    const double num_p = c.x11 * (1.0 - 2.0 * z1) + c.x01 * (1.0 - z1) - c.x10 * z1;
    const double var_p = c.x11 * (1.0 - d1) * (1.0 - d1) * (1.0 - 2.0 * z1) * (1.0 - 2.0 * z1) +
                         c.x01 * (1.0 - d1) * (1.0 - d1) * (1.0 - z1) * (1.0 - z1) +
                         c.x10 * (1.0 - d1) * (1.0 - d1) * z1 * z1 +
                         c.y11 * d1 * d1 * (1.0 - 2.0 * z1) * (1.0 - 2.0 * z1) +
                         c.y01 * d1 * d1 * (1.0 - z1) * (1.0 - z1) + c.y10 * d1 * d1 * z1 * z1;

    const double den2 = 2.0 * c.x00 + c.x01 + c.x10 + 2.0 * c.y00 + c.y01 + c.y10;
    if (den2 <= 0.0) throw ZeroVarianceContrast("no negative results for the NPV score");
    const double z2 = (c.x00 + c.x10 + c.y00 + c.y10) / den2;
    const double d2 = (2.0 * c.y00 + c.y01 + c.y10) / den2;
    const double num_n = c.y00 * (1.0 - 2.0 * z2) + c.y10 * (1.0 - z2) - c.y01 * z2;
    const double var_n = c.y00 * (1.0 - d2) * (1.0 - d2) * (1.0 - 2.0 * z2) * (1.0 - 2.0 * z2) +
                         c.y10 * (1.0 - d2) * (1.0 - d2) * (1.0 - z2) * (1.0 - z2) +
                         c.y01 * (1.0 - d2) * (1.0 - d2) * z2 * z2 +
                         c.x00 * d2 * d2 * (1.0 - 2.0 * z2) * (1.0 - 2.0 * z2) +
                         c.x10 * d2 * d2 * (1.0 - z2) * (1.0 - z2) + c.x01 * d2 * d2 * z2 * z2;

    if (var_p <= 0.0 || var_n <= 0.0) throw ZeroVarianceContrast("score variance not positive");
    return {num_p / std::sqrt(var_p), num_n / std::sqrt(var_n)};
}

ContrastStat kosinski_contrast(const CompleteTable& t, bool positive) {
    const Counts c = unpack(t);
    const double n11 = c.x11 + c.y11, n10 = c.x10 + c.y10;
    const double n01 = c.x01 + c.y01, n00 = c.x00 + c.y00;
    const PairedEstimates e = estimates(t);
    if (positive) {
        const double den = 2.0 * n11 + n10 + n01;
        if (den <= 0.0) throw ZeroVarianceContrast("no positive results for the pooled PPV");
        const double pooled = (2.0 * c.x11 + c.x10 + c.x01) / den;
        const double cp = (c.x11 * (1.0 - pooled) * (1.0 - pooled) + c.y11 * pooled * pooled) / den;
        const double var =
            (pooled * (1.0 - pooled) - 2.0 * cp) * (1.0 / (n10 + n11) + 1.0 / (n01 + n11));
        return {e.ppv1 - e.ppv2, var};
    }
    const double den = 2.0 * n00 + n01 + n10;
    if (den <= 0.0) throw ZeroVarianceContrast("no negative results for the pooled NPV");
    const double pooled = (2.0 * c.y00 + c.y01 + c.y10) / den;
    const double cp = (c.x00 * pooled * pooled + c.y00 * (1.0 - pooled) * (1.0 - pooled)) / den;
    const double var =
        (pooled * (1.0 - pooled) - 2.0 * cp) * (1.0 / (n00 + n01) + 1.0 / (n00 + n10));
    return {e.npv1 - e.npv2, var};
}

ZPair kosinski_tests(const CompleteTable& t) {
    const ContrastStat p = kosinski_contrast(t, true);
    const ContrastStat n = kosinski_contrast(t, false);
    if (p.variance <= 0.0 || n.variance <= 0.0)
        throw ZeroVarianceContrast("pooled score variance not positive");
    return {p.diff / std::sqrt(p.variance), n.diff / std::sqrt(n.variance)};
}

std::pair<double, double> complete_global(const CompleteTable& t) {
    return global_test(estimates(t).inference(t.n()));
}

double lrt_statistic(const CompleteTable& t) {
    const Counts c = unpack(t);
    auto term = [](double k, double pair_sum) {
        if (k <= 0.0) return 0.0;
        return k * std::log(2.0 * k / pair_sum);
    };
    double stat = 0.0;
    if (c.x10 + c.x01 > 0.0) stat += term(c.x10, c.x10 + c.x01) + term(c.x01, c.x10 + c.x01);
    if (c.y10 + c.y01 > 0.0) stat += term(c.y10, c.y10 + c.y01) + term(c.y01, c.y10 + c.y01);
    return 2.0 * stat;
}

}  // namespace pvcomp
