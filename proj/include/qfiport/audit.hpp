#pragma once

// Grid sweeps for figure data, numeric optimization of measurement strengths,
// and structured discrepancy reporting between the brute-force simulation and
// the closed-form results.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "formulas.hpp"
#include "golden.hpp"
#include "teleport.hpp"

namespace qfiport {

struct GridAxis {
    std::string name;
    double lo = 0.0, hi = 0.0;
    int steps = 2;
};

struct GridSpec {
    std::vector<GridAxis> axes;
    std::map<std::string, double> fixed;

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= static_cast<std::size_t>(a.steps);
        return n;
    }
    // row-major: last axis varies fastest
    std::vector<double> point(std::size_t index) const {
        std::vector<double> v(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto& a = axes[k];
            const std::size_t i = index % a.steps;
            index /= a.steps;
            v[k] = (a.steps == 1) ? a.lo : a.lo + (a.hi - a.lo) * double(i) / double(a.steps - 1);
        }
        return v;
    }
    void validate() const {
        for (const auto& a : axes) {
            if (a.steps < 1) throw std::invalid_argument("GridSpec: steps must be >= 1");
            if (a.lo > a.hi) throw std::invalid_argument("GridSpec: lo > hi");
        }
    }
};

inline void set_config_field(SchemeConfig& cfg, const std::string& name, double value) {
    if (name == "theta") cfg.theta = value;
    else if (name == "phi") cfg.phi = value;
    else if (name == "gamma") { cfg.gamma = value; cfg.gamma1 = value; cfg.gamma2 = value; }
    else if (name == "gamma1") cfg.gamma1 = value;
    else if (name == "gamma2") cfg.gamma2 = value;
    else if (name == "p") { cfg.p = value; cfg.p1 = value; cfg.p2 = value; }
    else if (name == "p1") cfg.p1 = value;
    else if (name == "p2") cfg.p2 = value;
    else if (name == "pr") { cfg.pr = value; cfg.pr1 = value; cfg.pr2 = value; }
    else if (name == "pr1") cfg.pr1 = value;
    else if (name == "pr2") cfg.pr2 = value;
    else throw std::invalid_argument("unknown parameter name: " + name);
}

inline int thread_cap() {
    if (const char* env = std::getenv("QFIPORT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Evaluate fn(i) for i in [0, n); results land in index order, so parallel
// execution stays deterministic.
template <typename Fn>
void for_each_index(std::size_t n, Fn&& fn) {
    const int threads = std::min<std::size_t>(thread_cap(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += threads) fn(i);
        });
    for (auto& th : pool) th.join();
}

enum class Objective { PaperFormula, Simulation };

inline double paper_qfi_at_pr(const SchemeConfig& cfg, double pr) {
    switch (cfg.scheme) {
        case Scheme::AD: return formulas::f_ad(cfg.theta, cfg.gamma);
        case Scheme::A:  return formulas::scheme_a(cfg.theta, cfg.phi, cfg.gamma, pr).qfi;
        case Scheme::B:  return formulas::scheme_b(cfg.theta, cfg.phi, cfg.gamma, cfg.p, pr).qfi;
        case Scheme::TwoSided:
            return formulas::two_sided(cfg.theta, cfg.phi, cfg.gamma1, cfg.gamma2,
                                       cfg.p1, cfg.p2, pr, pr).qfi;  // symmetric shared pr
    }
    return 0.0;
}

// Maximize the teleported QFI over pr in [0, 1-1e-9].
inline OptResult optimize_pr_numeric(const SchemeConfig& cfg, Objective objective) {
    const double hi = 1.0 - 1e-9;
    if (objective == Objective::PaperFormula)
        return golden_section_max([&](double pr) { return paper_qfi_at_pr(cfg, pr); },
                                  0.0, hi, 1e-8);

    SchemeConfig sub = cfg;
    sub.pr_policy = PrPolicy::Fixed;
    auto sim_qfi = [&](double pr) {
        SchemeConfig point = sub;
        point.pr = pr;
        if (point.scheme == Scheme::TwoSided) { point.pr1 = pr; point.pr2 = pr; }
        return run_scheme(point).qfi_simulated;
    };
    // coarse 1e-3 scan, then golden refinement around the best cell
    const int n = 1000;
    int best = 0;
    double fbest = -1.0;
    for (int i = 0; i <= n; ++i) {
        const double pr = hi * double(i) / double(n);
        double f;
        try {
            f = sim_qfi(pr);
        } catch (const degenerate_run_error&) {
            throw degenerate_run_error("optimize_pr_numeric: degenerate run at pr=" + std::to_string(pr));
        }
        if (f > fbest) { fbest = f; best = i; }
    }
    const double lo2 = hi * double(std::max(0, best - 2)) / double(n);
    const double hi2 = hi * double(std::min(n, best + 2)) / double(n);
    return golden_section_max(sim_qfi, lo2, hi2, 1e-8);
}

struct DeviationRecord {
    std::string quantity;
    double max_abs_dev = 0.0;
    double mean_abs_dev = 0.0;
    std::vector<double> argmax_point;
    std::size_t count = 0;
};

struct DiscrepancyReport {
    std::string scheme;
    std::string placement;
    GridSpec grid;
    std::vector<DeviationRecord> records;
    std::map<std::string, double> asserted_tolerances;
    std::map<std::string, bool> passed;
    bool all_passed = true;
    std::vector<std::string> notes;

    const DeviationRecord* find(const std::string& quantity) const {
        for (const auto& r : records)
            if (r.quantity == quantity) return &r;
        return nullptr;
    }
};

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::AD: return "ad";
        case Scheme::A: return "a";
        case Scheme::B: return "b";
        default: return "two-sided";
    }
}

inline const char* placement_name(Placement p) {
    switch (p) {
        case Placement::OnResource: return "resource";
        case Placement::PostBellPreCorrection: return "pre-correction";
        default: return "post-correction";
    }
}

namespace detail {

struct PointDeviation {
    // one slot per tracked quantity; NaN means "not defined at this point"
    std::map<std::string, double> dev;
};

inline formulas::SchemeEval paper_eval(const SchemeConfig& cfg, double pr) {
    switch (cfg.scheme) {
        case Scheme::AD: {
            formulas::SchemeEval e;
            const double gb = 1.0 - cfg.gamma;
            e.bloch.rx = std::sin(cfg.theta) * std::cos(cfg.phi) * std::sqrt(gb);
            e.bloch.ry = std::sin(cfg.theta) * std::sin(cfg.phi) * std::sqrt(gb);
            e.bloch.rz = std::cos(cfg.theta) * gb;
            e.bloch.normalization = 1.0;
            e.qfi = formulas::f_ad(cfg.theta, cfg.gamma);
            return e;
        }
        case Scheme::A:
            return formulas::scheme_a(cfg.theta, cfg.phi, cfg.gamma, pr);
        case Scheme::B:
            return formulas::scheme_b(cfg.theta, cfg.phi, cfg.gamma, cfg.p, pr);
        case Scheme::TwoSided:
            return formulas::two_sided(cfg.theta, cfg.phi, cfg.gamma1, cfg.gamma2,
                                       cfg.p1, cfg.p2, cfg.pr1, pr);
    }
    return {};
}

inline double paper_success(const SchemeConfig& cfg) {
    switch (cfg.scheme) {
        case Scheme::AD: return 1.0;
        case Scheme::A:  return formulas::scheme_a_probabilities(cfg.gamma).p_qfi;
        case Scheme::B:  return formulas::scheme_b_probabilities(cfg.gamma, cfg.p).p_qfi;
        case Scheme::TwoSided: {
            // product of the one-sided closed forms; informational only
            const double a = formulas::scheme_b_probabilities(cfg.gamma1, cfg.p1).p_qfi;
            const double b = formulas::scheme_b_probabilities(cfg.gamma2, cfg.p2).p_qfi;
            return a * b;
        }
    }
    return 1.0;
}

inline double paper_pr_opt(const SchemeConfig& cfg) {
    switch (cfg.scheme) {
        case Scheme::AD: return 0.0;
        case Scheme::A:  return formulas::scheme_a_optimal(cfg.gamma).pr_opt;
        case Scheme::B:  return formulas::scheme_b_optimal(cfg.gamma, cfg.p).pr_opt;
        case Scheme::TwoSided:
            return formulas::two_sided_symmetric_optimal(cfg.gamma1, cfg.p1).pr_opt;
    }
    return 0.0;
}

}  // namespace detail

// Run simulation and paper formulas over a grid and record per-quantity
// deviations. Quantities: rx, ry, rz, qfi, success (evaluated at the paper's
// optimal pr), and bloch_ratio (rx/rz, which cancels the normalization factor).
// Assertion keys: "bloch" (max over rx,ry,rz), "qfi", "success".
inline DiscrepancyReport
compare_paper_vs_sim(Scheme scheme, Placement placement, const GridSpec& grid,
                     const std::map<std::string, double>& tolerances = {}) {
    grid.validate();
    const std::size_t n = grid.size();
    std::vector<detail::PointDeviation> devs(n);

    for_each_index(n, [&](std::size_t i) {
        SchemeConfig cfg;
        cfg.scheme = scheme;
        cfg.placement = placement;
        for (const auto& [k, v] : grid.fixed) set_config_field(cfg, k, v);
        const std::vector<double> pt = grid.point(i);
        for (std::size_t a = 0; a < grid.axes.size(); ++a)
            set_config_field(cfg, grid.axes[a].name, pt[a]);

        SchemeResult sim = run_scheme(cfg);
        formulas::SchemeEval paper = detail::paper_eval(cfg, sim.pr_resolved);

        auto& d = devs[i].dev;
        d["rx"] = std::abs(sim.bloch.rx - paper.bloch.rx);
        d["ry"] = std::abs(sim.bloch.ry - paper.bloch.ry);
        d["rz"] = std::abs(sim.bloch.rz - paper.bloch.rz);
        d["qfi"] = std::abs(sim.qfi_simulated - paper.qfi);
        if (std::abs(sim.bloch.rz) > 1e-12 && std::abs(paper.bloch.rz) > 1e-12)
            d["bloch_ratio"] = std::abs(sim.bloch.rx / sim.bloch.rz -
                                        paper.bloch.rx / paper.bloch.rz);

        // success probability is compared at the paper-optimal pr
        SchemeConfig opt = cfg;
        opt.pr_policy = PrPolicy::PaperOptimal;
        bool comparable = true;
        if (scheme == Scheme::TwoSided && (cfg.gamma1 != cfg.gamma2 || cfg.p1 != cfg.p2))
            comparable = false;
        if (comparable) {
            SchemeResult sim_opt = run_scheme(opt);
            d["success"] = std::abs(sim_opt.success_probability - detail::paper_success(cfg));
        }
    });

    DiscrepancyReport rep;
    rep.scheme = scheme_name(scheme);
    rep.placement = placement_name(placement);
    rep.grid = grid;
    rep.asserted_tolerances = tolerances;

    const std::vector<std::string> quantities = {"rx", "ry", "rz", "qfi", "success", "bloch_ratio"};
    for (const auto& q : quantities) {
        DeviationRecord r;
        r.quantity = q;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto it = devs[i].dev.find(q);
            if (it == devs[i].dev.end()) continue;
            ++r.count;
            sum += it->second;
            if (it->second > r.max_abs_dev) {
                r.max_abs_dev = it->second;
                r.argmax_point = grid.point(i);
            }
        }
        if (r.count > 0) r.mean_abs_dev = sum / double(r.count);
        if (r.argmax_point.empty() && !grid.axes.empty()) r.argmax_point = grid.point(0);
        rep.records.push_back(r);
    }

    for (const auto& [key, tol] : tolerances) {
        double dev = 0.0;
        if (key == "bloch") {
            for (const char* q : {"rx", "ry", "rz"}) dev = std::max(dev, rep.find(q)->max_abs_dev);
        } else if (const DeviationRecord* r = rep.find(key)) {
            dev = r->max_abs_dev;
        } else {
            throw std::invalid_argument("unknown assert quantity: " + key);
        }
        const bool ok = dev <= tol;
        rep.passed[key] = ok;
        if (!ok) rep.all_passed = false;
    }
    if (scheme == Scheme::A)
        rep.notes.push_back(
            "scheme A full-state match against the printed normalization factor is reported, "
            "not asserted; the rx/rz ratio cancels it");
    return rep;
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Deterministic row-major table of closed-form and simulated quantities.
inline Table sweep(Scheme scheme, const GridSpec& grid,
                   const std::vector<std::string>& outputs) {
    grid.validate();
    const std::size_t n = grid.size();
    Table t;
    for (const auto& a : grid.axes) t.columns.push_back(a.name);
    for (const auto& c : outputs) t.columns.push_back(c);
    t.rows.assign(n, {});

    for_each_index(n, [&](std::size_t i) {
        SchemeConfig cfg;
        cfg.scheme = scheme;
        for (const auto& [k, v] : grid.fixed) set_config_field(cfg, k, v);
        const std::vector<double> pt = grid.point(i);
        for (std::size_t a = 0; a < grid.axes.size(); ++a)
            set_config_field(cfg, grid.axes[a].name, pt[a]);

        std::vector<double> row = pt;
        SchemeResult sim;
        bool have_sim = false;
        auto simulated = [&]() -> SchemeResult& {
            if (!have_sim) { sim = run_scheme(cfg); have_sim = true; }
            return sim;
        };
        for (const auto& col : outputs) {
            double v = 0.0;
            if (col == "f_ad") v = formulas::f_ad(cfg.theta, cfg.gamma);
            else if (col == "f_a") v = formulas::scheme_a(cfg.theta, cfg.phi, cfg.gamma, cfg.pr).qfi;
            else if (col == "f_a_opt") {
                const double s = std::sin(cfg.theta);
                v = s * s * formulas::scheme_a_optimal(cfg.gamma).qfi_opt_coeff;
            } else if (col == "f_imp_a") v = formulas::f_imp_a(cfg.theta, cfg.gamma);
            else if (col == "pr_opt_a") v = formulas::scheme_a_optimal(cfg.gamma).pr_opt;
            else if (col == "p_qfi_a") v = formulas::scheme_a_probabilities(cfg.gamma).p_qfi;
            else if (col == "p_fid_a") v = formulas::scheme_a_probabilities(cfg.gamma).p_fid;
            else if (col == "p_imp_a") v = formulas::scheme_a_probabilities(cfg.gamma).p_imp;
            else if (col == "f_b") v = formulas::scheme_b(cfg.theta, cfg.phi, cfg.gamma, cfg.p, cfg.pr).qfi;
            else if (col == "f_b_opt") {
                const double s = std::sin(cfg.theta);
                v = s * s * formulas::scheme_b_optimal(cfg.gamma, cfg.p).qfi_opt_coeff;
            } else if (col == "pr_opt_b") v = formulas::scheme_b_optimal(cfg.gamma, cfg.p).pr_opt;
            else if (col == "p_qfi_b") v = formulas::scheme_b_probabilities(cfg.gamma, cfg.p).p_qfi;
            else if (col == "p_fid_b") v = formulas::scheme_b_probabilities(cfg.gamma, cfg.p).p_fid;
            else if (col == "p_imp_b") v = formulas::scheme_b_probabilities(cfg.gamma, cfg.p).p_imp;
            else if (col == "f_two_sided")
                v = formulas::two_sided(cfg.theta, cfg.phi, cfg.gamma1, cfg.gamma2,
                                        cfg.p1, cfg.p2, cfg.pr1, cfg.pr2).qfi;
            else if (col == "f_two_sided_opt") {
                const double s = std::sin(cfg.theta);
                v = s * s * formulas::two_sided_symmetric_optimal(cfg.gamma1, cfg.p1).qfi_opt_coeff;
            } else if (col == "pr_opt_two_sided")
                v = formulas::two_sided_symmetric_optimal(cfg.gamma1, cfg.p1).pr_opt;
            else if (col == "c_ad") v = formulas::concurrence_formulas(cfg.gamma, cfg.pr).c_ad;
            else if (col == "c_a") v = formulas::concurrence_formulas(cfg.gamma, cfg.pr).c_a;
            else if (col == "c_a_opt") v = formulas::concurrence_formulas(cfg.gamma, cfg.pr).c_a_opt;
            else if (col == "c_ratio") v = formulas::concurrence_formulas(cfg.gamma, cfg.pr).ratio;
            else if (col == "qfi_sim") v = simulated().qfi_simulated;
            else if (col == "success_sim") v = simulated().success_probability;
            else if (col == "rx_sim") v = simulated().bloch.rx;
            else if (col == "ry_sim") v = simulated().bloch.ry;
            else if (col == "rz_sim") v = simulated().bloch.rz;
            else throw std::invalid_argument("unknown sweep column: " + col);
            row.push_back(v);
        }
        t.rows[i] = std::move(row);
    });
    return t;
}

}  // namespace qfiport
