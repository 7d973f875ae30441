#pragma once

// Closed-form teleported-QFI results implemented exactly as printed, used as
// comparison oracles and for figure-data generation. Normalization factors
// that come out non-positive raise domain errors instead of being clamped.

#include <cmath>
#include <stdexcept>
#include <string>

namespace qfiport::formulas {

struct PaperBloch {
    double rx = 0.0, ry = 0.0, rz = 0.0;
    double normalization = 1.0;
};

struct SchemeEval {
    PaperBloch bloch;
    double qfi = 0.0;
};

struct OptimalPoint {
    double pr_opt = 0.0;
    double qfi_opt_coeff = 0.0;  // QFI at theta = pi/2; caller scales by sin^2(theta)
};

struct Probabilities {
    double p_qfi = 0.0;
    double p_fid = 0.0;
    double p_imp = 0.0;
};

inline void check01(double v, const char* name) {
    if (v < 0.0 || v > 1.0) throw std::domain_error(std::string(name) + " outside [0,1]");
}

inline double f_ad(double theta, double gamma) {
    check01(gamma, "gamma");
    const double s = std::sin(theta);
    return s * s * (1.0 - gamma);
}

inline SchemeEval scheme_a(double theta, double phi, double gamma, double pr) {
    check01(gamma, "gamma");
    check01(pr, "pr");
    const double gb = 1.0 - gamma, prb = 1.0 - pr;
    const double n = 2.0 - pr - gamma * pr;  // as printed
    if (n <= 0.0) throw std::domain_error("scheme_a: normalization factor non-positive");
    SchemeEval e;
    e.bloch.normalization = n;
    e.bloch.rx = 2.0 * std::sin(theta) * std::cos(phi) * std::sqrt(prb * gb) / n;
    e.bloch.ry = 2.0 * std::sin(theta) * std::sin(phi) * std::sqrt(prb * gb) / n;
    e.bloch.rz = std::cos(theta) * (1.0 + prb) * gb / n;
    const double s = std::sin(theta);
    e.qfi = 4.0 * s * s * prb * gb / (n * n);
    return e;
}

inline OptimalPoint scheme_a_optimal(double gamma) {
    check01(gamma, "gamma");
    return {2.0 * gamma / (1.0 + gamma), 1.0 / (1.0 + gamma)};
}

inline Probabilities scheme_a_probabilities(double gamma) {
    check01(gamma, "gamma");
    Probabilities p;
    p.p_qfi = 1.0 - gamma;
    p.p_fid = 1.0 - gamma * (3.0 + gamma) / (2.0 * (1.0 + gamma));
    p.p_imp = gamma * (1.0 - gamma) / (2.0 * (1.0 + gamma));
    return p;
}

inline double f_imp_a(double theta, double gamma) {
    check01(gamma, "gamma");
    const double s = std::sin(theta);
    return s * s / (1.0 + gamma) - s * s * (1.0 - gamma);
}

inline SchemeEval scheme_b(double theta, double phi, double gamma, double p, double pr) {
    check01(gamma, "gamma");
    check01(p, "p");
    check01(pr, "pr");
    const double gb = 1.0 - gamma, pb = 1.0 - p, prb = 1.0 - pr;
    const double n = prb + pb * gb + pb * gamma * prb;
    if (n <= 0.0) throw std::domain_error("scheme_b: normalization factor non-positive");
    SchemeEval e;
    e.bloch.normalization = n;
    e.bloch.rx = 2.0 * std::sin(theta) * std::cos(phi) * std::sqrt(pb * prb * gb) / n;
    e.bloch.ry = 2.0 * std::sin(theta) * std::sin(phi) * std::sqrt(pb * prb * gb) / n;
    e.bloch.rz = std::cos(theta) * (prb * gb + pb * gb + p * gamma * prb) / n;
    const double s = std::sin(theta);
    e.qfi = 4.0 * s * s * pb * prb * gb / (n * n);
    return e;
}

inline OptimalPoint scheme_b_optimal(double gamma, double p) {
    check01(gamma, "gamma");
    check01(p, "p");
    const double gb = 1.0 - gamma, pb = 1.0 - p;
    return {1.0 - pb * gb / (1.0 + pb * gamma), 1.0 / (1.0 + pb * gamma)};
}

inline Probabilities scheme_b_probabilities(double gamma, double p) {
    check01(gamma, "gamma");
    check01(p, "p");
    const double gb = 1.0 - gamma, pb = 1.0 - p;
    Probabilities r;
    r.p_qfi = pb * gb;
    r.p_fid = gb * pb * (2.0 + gamma * pb) / (2.0 * (1.0 + gamma * pb));
    r.p_imp = r.p_qfi - r.p_fid;
    return r;
}

inline SchemeEval two_sided(double theta, double phi, double gamma1, double gamma2,
                            double p1, double p2, double pr1, double pr2) {
    check01(gamma1, "gamma1");
    check01(gamma2, "gamma2");
    check01(p1, "p1");
    check01(p2, "p2");
    check01(pr1, "pr1");
    check01(pr2, "pr2");
    const double g1b = 1.0 - gamma1, g2b = 1.0 - gamma2;
    const double p1b = 1.0 - p1, p2b = 1.0 - p2;
    const double r1b = 1.0 - pr1, r2b = 1.0 - pr2;
    const double n = r1b * r2b + p1b * p2b * r1b * r2b * gamma1 * gamma2 +
                     p1b * p2b * g1b * g2b +
                     p1b * p2b * (gamma1 * g2b * r1b + g1b * gamma2 * r2b);
    if (n <= 0.0) throw std::domain_error("two_sided: normalization factor non-positive");
    SchemeEval e;
    e.bloch.normalization = n;
    const double root = std::sqrt(p1b * p2b * g1b * g2b * r1b * r2b);
    e.bloch.rx = 2.0 * std::sin(theta) * std::cos(phi) * root / n;
    e.bloch.ry = 2.0 * std::sin(theta) * std::sin(phi) * root / n;
    e.bloch.rz = std::cos(theta) *
                 (r1b * r2b + p1b * p2b * r1b * r2b * gamma1 * gamma2 +
                  p1b * p2b * g1b * g2b -
                  p1b * p2b * (gamma1 * g2b * r1b + g1b * gamma2 * r2b)) / n;
    const double s = std::sin(theta);
    e.qfi = 4.0 * s * s * p1b * p2b * g1b * g2b * r1b * r2b / (n * n);
    return e;
}

inline OptimalPoint two_sided_symmetric_optimal(double gamma, double p) {
    check01(gamma, "gamma");
    check01(p, "p");
    const double gb = 1.0 - gamma, pb = 1.0 - p;
    const double root = std::sqrt(1.0 + pb * pb * gamma * gamma);
    return {1.0 - pb * gb / root, 1.0 / ((root + pb * gamma) * (root + pb * gamma))};
}

struct ConcurrenceForms {
    double c_ad = 0.0;
    double c_a = 0.0;
    double c_a_opt = 0.0;
    double ratio = 0.0;  // c_a_opt / c_ad
};

inline ConcurrenceForms concurrence_formulas(double gamma, double pr) {
    check01(gamma, "gamma");
    check01(pr, "pr");
    const double gb = 1.0 - gamma, prb = 1.0 - pr;
    ConcurrenceForms c;
    c.c_ad = std::sqrt(gb);
    c.c_a = 2.0 * std::sqrt(prb * gb) / (1.0 + prb);
    c.c_a_opt = gb * std::sqrt(1.0 + gamma);
    c.ratio = std::sqrt(1.0 - gamma * gamma);
    return c;
}

}  // namespace qfiport::formulas
