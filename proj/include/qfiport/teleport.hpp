#pragma once

// Branch-explicit simulation of the teleportation circuit: plain AD noise,
// post-measurement protection (scheme A), prior measurement plus reversal
// (scheme B) and the two-sided generalization. The teleported state is
// reconstructed as the probability-weighted mixture of the four corrected
// Bell branches; success probabilities are traces of unnormalized states.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "complexalg.hpp"
#include "formulas.hpp"
#include "golden.hpp"
#include "qfi.hpp"
#include "quantum.hpp"

namespace qfiport {

enum class Scheme { AD, A, B, TwoSided };
enum class PrPolicy { Fixed, PaperOptimal, NumericOptimal };
enum class Placement { OnResource, PostBellPreCorrection, PostBellPostCorrection };

struct SchemeConfig {
    Scheme scheme = Scheme::AD;
    double theta = M_PI / 2.0;
    double phi = 0.0;
    double gamma = 0.0;            // Bob-side damping (AD, A, B)
    double gamma1 = 0.0, gamma2 = 0.0;  // two-sided damping, Alice / Bob
    double p = 0.0;                // prior strength (B)
    double p1 = 0.0, p2 = 0.0;     // two-sided prior strengths
    double pr = 0.0;               // post strength (A: measurement, B: reversal)
    double pr1 = 0.0, pr2 = 0.0;   // two-sided post strengths
    PrPolicy pr_policy = PrPolicy::Fixed;
    Placement placement = Placement::OnResource;
};

struct BranchOutcome {
    int bell_index = 0;
    double joint_probability = 0.0;
    DensityMatrix bob_state_unnormalized;  // pre-correction
    std::string correction_applied;
};

struct SchemeResult {
    std::array<BranchOutcome, 4> branches;
    DensityMatrix averaged_state;
    double success_probability = 0.0;
    BlochVector bloch;
    double qfi_simulated = 0.0;
    std::optional<double> qfi_paper;
    double pr_resolved = 0.0;
    std::vector<std::string> notes;
};

// Bell projectors on qubits (0,1) with the Pauli corrections for a
// (|00>+|11>)/sqrt(2) resource: PhiPlus->I, PhiMinus->Z, PsiPlus->X,
// PsiMinus->Z.X.
inline std::array<std::pair<Matrix, Matrix>, 4> bell_projectors_and_corrections() {
    const std::array<BellKind, 4> kinds = {BellKind::PhiPlus, BellKind::PhiMinus,
                                           BellKind::PsiPlus, BellKind::PsiMinus};
    std::array<std::pair<Matrix, Matrix>, 4> table = {
        std::pair{bell_state(kinds[0]).mat, Matrix::identity(2)},
        std::pair{bell_state(kinds[1]).mat, pauli_z()},
        std::pair{bell_state(kinds[2]).mat, pauli_x()},
        std::pair{bell_state(kinds[3]).mat, pauli_z() * pauli_x()}};
    return table;
}

inline const char* correction_label(int bell_index) {
    switch (bell_index) {
        case 0: return "I";
        case 1: return "Z";
        case 2: return "X";
        default: return "ZX";
    }
}

// Project qubits (0,1) of input (x) resource onto each Bell state and reduce
// to Bob's qubit. Corrections are not applied here so that a post operation
// can be inserted between projection and correction.
inline std::array<BranchOutcome, 4>
teleport_branches(const DensityMatrix& input, const DensityMatrix& resource) {
    if (input.n_qubits != 1 || resource.n_qubits != 2)
        throw std::invalid_argument("teleport_branches: need 1-qubit input and 2-qubit resource");
    const Matrix full = tensor(input.mat, resource.mat);
    const auto table = bell_projectors_and_corrections();
    std::array<BranchOutcome, 4> out;
    for (int k = 0; k < 4; ++k) {
        const Matrix proj = tensor(table[k].first, Matrix::identity(2));
        const Matrix projected = proj * full * proj.dagger();
        Matrix bob = partial_trace(projected, {2}, 3);
        BranchOutcome& br = out[k];
        br.bell_index = k;
        br.joint_probability = bob.trace().real();
        br.bob_state_unnormalized = DensityMatrix(1, std::move(bob), false);
        br.correction_applied = correction_label(k);
    }
    return out;
}

// Probability-weighted mixture of the corrected kept branches. Branches with
// trace below 1e-14 are dropped; `dropped` (when given) collects their indices.
inline std::pair<DensityMatrix, double>
averaged_output(const std::array<BranchOutcome, 4>& branches,
                const std::array<std::pair<Matrix, Matrix>, 4>& table,
                std::vector<int>* dropped = nullptr) {
    Matrix acc = Matrix::zero(2, 2);
    double success = 0.0;
    int kept = 0;
    for (int k = 0; k < 4; ++k) {
        const BranchOutcome& br = branches[k];
        if (br.joint_probability < 1e-14) {
            if (dropped) dropped->push_back(k);
            continue;
        }
        const Matrix& u = table[k].second;
        acc += u * br.bob_state_unnormalized.mat * u.dagger();
        success += br.joint_probability;
        ++kept;
    }
    if (kept == 0)
        throw degenerate_run_error("averaged_output: every branch has zero trace");
    return {DensityMatrix(1, acc * cx{1.0 / success, 0.0}, true), success};
}

namespace detail {

inline void check01_cfg(double v, const char* name) {
    if (v < 0.0 || v > 1.0)
        throw std::invalid_argument(std::string("SchemeConfig: ") + name + " outside [0,1]");
}

inline void validate(const SchemeConfig& cfg) {
    check01_cfg(cfg.gamma, "gamma");
    check01_cfg(cfg.gamma1, "gamma1");
    check01_cfg(cfg.gamma2, "gamma2");
    check01_cfg(cfg.p, "p");
    check01_cfg(cfg.p1, "p1");
    check01_cfg(cfg.p2, "p2");
    check01_cfg(cfg.pr, "pr");
    check01_cfg(cfg.pr1, "pr1");
    check01_cfg(cfg.pr2, "pr2");
}

struct Pipeline {
    DensityMatrix resource;          // 2-qubit, possibly unnormalized
    std::optional<Matrix> post_op;   // single-qubit op on Bob, placed per cfg
};

// Build the resource state and the Bob-side post operation for a given
// post-strength value (scheme A: M0(pr); B / two-sided: reversal(pr)).
inline Pipeline build_pipeline(const SchemeConfig& cfg, double pr_bob) {
    DensityMatrix res = bell_state(BellKind::PhiPlus);
    Pipeline pl{res, std::nullopt};
    switch (cfg.scheme) {
        case Scheme::AD: {
            pl.resource = apply_channel(res, ad_channel(cfg.gamma, 1, 2));
            break;
        }
        case Scheme::A: {
            pl.resource = apply_channel(res, ad_channel(cfg.gamma, 1, 2));
            pl.post_op = partial_measurement(pr_bob, 1, 2).first.op;
            break;
        }
        case Scheme::B: {
            auto m0 = partial_measurement(cfg.p, 1, 2).first;
            res = apply_measurement(res, m0).first;
            res = apply_channel(res, ad_channel(cfg.gamma, 1, 2));
            pl.resource = res;
            pl.post_op = reversal_operator(pr_bob, 1, 2).op;
            break;
        }
        case Scheme::TwoSided: {
            res = apply_measurement(res, partial_measurement(cfg.p1, 0, 2).first).first;
            res = apply_measurement(res, partial_measurement(cfg.p2, 1, 2).first).first;
            res = apply_channel(res, ad_channel(cfg.gamma1, 0, 2));
            res = apply_channel(res, ad_channel(cfg.gamma2, 1, 2));
            // Alice's reversal acts on a qubit consumed by the Bell
            // measurement, so it always goes on the resource.
            res = apply_measurement(res, reversal_operator(cfg.pr1, 0, 2)).first;
            pl.resource = res;
            pl.post_op = reversal_operator(pr_bob, 1, 2).op;
            break;
        }
    }
    return pl;
}

// Run the full circuit for one (cfg, pr, phi) and return the normalized
// averaged output and success probability.
inline std::pair<DensityMatrix, double>
averaged_state_for(const SchemeConfig& cfg, double pr_bob, double phi,
                   std::vector<int>* dropped = nullptr) {
    Pipeline pl = build_pipeline(cfg, pr_bob);
    DensityMatrix resource = pl.resource;
    if (pl.post_op && cfg.placement == Placement::OnResource) {
        const Matrix em = embed_1q(*pl.post_op, 1, 2);
        resource = DensityMatrix(2, em * resource.mat * em.dagger(), false);
    }
    auto branches = teleport_branches(input_state(cfg.theta, phi), resource);
    if (pl.post_op && cfg.placement != Placement::OnResource) {
        for (auto& br : branches) {
            Matrix m = br.bob_state_unnormalized.mat;
            if (cfg.placement == Placement::PostBellPreCorrection) {
                m = *pl.post_op * m * pl.post_op->dagger();
            } else {
                // applied after the correction U: state seen by Bob is
                // M U rho U^dag M^dag = (M U) rho (M U)^dag
                const Matrix u = bell_projectors_and_corrections()[br.bell_index].second;
                m = (*pl.post_op) * u * m * u.dagger() * pl.post_op->dagger();
                // undo the correction applied later by averaged_output
                m = u.dagger() * m * u;
            }
            br.bob_state_unnormalized = DensityMatrix(1, std::move(m), false);
            br.joint_probability = br.bob_state_unnormalized.trace();
        }
    }
    return averaged_output(branches, bell_projectors_and_corrections(), dropped);
}

inline double resolve_pr(const SchemeConfig& cfg) {
    switch (cfg.pr_policy) {
        case PrPolicy::Fixed:
            return (cfg.scheme == Scheme::TwoSided) ? cfg.pr2 : cfg.pr;
        case PrPolicy::PaperOptimal:
            switch (cfg.scheme) {
                case Scheme::AD: return 0.0;
                case Scheme::A:  return formulas::scheme_a_optimal(cfg.gamma).pr_opt;
                case Scheme::B:  return formulas::scheme_b_optimal(cfg.gamma, cfg.p).pr_opt;
                case Scheme::TwoSided:
                    if (cfg.gamma1 != cfg.gamma2 || cfg.p1 != cfg.p2)
                        throw config_error("paper-optimal pr for the two-sided scheme requires the symmetric case");
                    return formulas::two_sided_symmetric_optimal(cfg.gamma1, cfg.p1).pr_opt;
            }
            return 0.0;
        case PrPolicy::NumericOptimal: {
            SchemeConfig sub = cfg;
            sub.pr_policy = PrPolicy::Fixed;
            auto objective = [&](double pr) {
                SchemeConfig point = sub;
                if (point.scheme == Scheme::TwoSided) point.pr1 = pr;  // shared sweep
                StateFamily fam{
                    [point, pr](double phi) { return averaged_state_for(point, pr, phi).first; }, 2};
                return qfi_sld(fam, cfg.phi).value;
            };
            return golden_section_max(objective, 0.0, 1.0 - 1e-9, 1e-8).x_star;
        }
    }
    return 0.0;
}

}  // namespace detail

inline SchemeResult run_scheme(const SchemeConfig& cfg) {
    detail::validate(cfg);
    const double pr = detail::resolve_pr(cfg);

    // two-sided symmetric policies drive both reversals
    SchemeConfig eff = cfg;
    if (cfg.scheme == Scheme::TwoSided && cfg.pr_policy != PrPolicy::Fixed) eff.pr1 = pr;

    SchemeResult result;
    result.pr_resolved = pr;

    detail::Pipeline pl = detail::build_pipeline(eff, pr);
    DensityMatrix resource = pl.resource;
    if (pl.post_op && eff.placement == Placement::OnResource) {
        const Matrix em = embed_1q(*pl.post_op, 1, 2);
        resource = DensityMatrix(2, em * resource.mat * em.dagger(), false);
    }
    result.branches = teleport_branches(input_state(eff.theta, eff.phi), resource);

    std::vector<int> dropped;
    auto [avg, success] = detail::averaged_state_for(eff, pr, eff.phi, &dropped);
    result.averaged_state = avg;
    result.success_probability = success;
    for (int k : dropped)
        result.notes.push_back("branch " + std::to_string(k) + " dropped (trace < 1e-14)");
    result.bloch = bloch_of(avg);

    StateFamily fam{[eff, pr](double phi) { return detail::averaged_state_for(eff, pr, phi).first; }, 2};
    result.qfi_simulated = qfi_sld(fam, eff.phi).value;

    switch (eff.scheme) {
        case Scheme::AD:
            result.qfi_paper = formulas::f_ad(eff.theta, eff.gamma);
            break;
        case Scheme::A:
            result.qfi_paper = formulas::scheme_a(eff.theta, eff.phi, eff.gamma, pr).qfi;
            break;
        case Scheme::B:
            result.qfi_paper = formulas::scheme_b(eff.theta, eff.phi, eff.gamma, eff.p, pr).qfi;
            break;
        case Scheme::TwoSided:
            result.qfi_paper = formulas::two_sided(eff.theta, eff.phi, eff.gamma1, eff.gamma2,
                                                   eff.p1, eff.p2, eff.pr1, pr).qfi;
            break;
    }
    return result;
}

}  // namespace qfiport
