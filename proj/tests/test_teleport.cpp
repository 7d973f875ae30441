#include <catch2/catch_amalgamated.hpp>

#include "qfiport/teleport.hpp"

using namespace qfiport;

namespace {

DensityMatrix rho_ad(double gamma) {
    return apply_channel(bell_state(BellKind::PhiPlus), ad_channel(gamma, 1, 2));
}

DensityMatrix corrected(const BranchOutcome& br) {
    const Matrix u = bell_projectors_and_corrections()[br.bell_index].second;
    Matrix m = u * br.bob_state_unnormalized.mat * u.dagger();
    m *= cx{1.0 / m.trace().real(), 0.0};
    return DensityMatrix(1, std::move(m), true);
}

}  // namespace

TEST_CASE("bell projector table") {
    const auto table = bell_projectors_and_corrections();
    Matrix sum(4, 4);
    for (const auto& [proj, corr] : table) {
        sum += proj;
        // rank 1
        auto ed = hermitian_eig(proj);
        int nonzero = 0;
        for (double lam : ed.eigenvalues)
            if (std::abs(lam) > 1e-12) ++nonzero;
        CHECK(nonzero == 1);
    }
    CHECK(max_abs_diff(sum, Matrix::identity(4)) < 1e-15);
}

TEST_CASE("ideal teleportation recovers the input on every branch") {
    const DensityMatrix input = input_state(M_PI / 3.0, 0.7);
    const auto branches = teleport_branches(input, bell_state(BellKind::PhiPlus));
    for (const auto& br : branches) {
        CHECK(br.joint_probability == Catch::Approx(0.25).margin(1e-12));
        CHECK(max_abs_diff(corrected(br).mat, input.mat) < 1e-12);
    }

    // pre-correction states carry the Pauli frame
    const Matrix sx = pauli_x();
    Matrix b2 = branches[2].bob_state_unnormalized.mat * cx{4.0, 0.0};
    CHECK(max_abs_diff(b2, sx * input.mat * sx) < 1e-12);
    Matrix b0 = branches[0].bob_state_unnormalized.mat * cx{4.0, 0.0};
    CHECK(max_abs_diff(b0, input.mat) < 1e-12);
}

TEST_CASE("fully damped resource teleports nothing") {
    const auto branches = teleport_branches(input_state(1.0, 0.4), rho_ad(1.0));
    auto [avg, success] = averaged_output(branches, bell_projectors_and_corrections());
    CHECK(success == Catch::Approx(1.0).margin(1e-12));
    const BlochVector b = bloch_of(avg);
    CHECK(b.norm() < 1e-12);
}

TEST_CASE("averaged_output") {
    const DensityMatrix input = input_state(1.1, 0.3);
    const auto branches = teleport_branches(input, bell_state(BellKind::PhiPlus));
    auto [avg, success] = averaged_output(branches, bell_projectors_and_corrections());
    CHECK(success == Catch::Approx(1.0).margin(1e-12));
    CHECK(max_abs_diff(avg.mat, input.mat) < 1e-12);

    // averaging is what reproduces the closed-form rz; a single branch differs
    const double gamma = 0.5, th = 1.1;
    const auto noisy = teleport_branches(input, rho_ad(gamma));
    auto [avg2, s2] = averaged_output(noisy, bell_projectors_and_corrections());
    CHECK(bloch_of(avg2).rz == Catch::Approx((1.0 - gamma) * std::cos(th)).margin(1e-12));
    CHECK(bloch_of(corrected(noisy[0])).rz ==
          Catch::Approx(std::cos(th) + gamma * (1.0 - std::cos(th))).margin(1e-12));
}

TEST_CASE("noiseless run is exact") {
    SchemeConfig cfg;
    cfg.scheme = Scheme::AD;
    cfg.theta = M_PI / 2.0;
    cfg.gamma = 0.0;
    const SchemeResult r = run_scheme(cfg);
    CHECK(r.qfi_simulated == Catch::Approx(1.0).margin(1e-9));
    CHECK(r.success_probability == Catch::Approx(1.0).margin(1e-12));
    for (const auto& br : r.branches)
        CHECK(br.joint_probability == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("AD scheme matches the closed form") {
    SchemeConfig cfg;
    cfg.scheme = Scheme::AD;
    cfg.theta = M_PI / 2.0;
    cfg.phi = 0.4;
    cfg.gamma = 0.5;
    const SchemeResult r = run_scheme(cfg);
    CHECK(r.bloch.rx == Catch::Approx(std::sqrt(0.5) * std::cos(0.4)).margin(1e-10));
    CHECK(r.bloch.ry == Catch::Approx(std::sqrt(0.5) * std::sin(0.4)).margin(1e-10));
    CHECK(r.bloch.rz == Catch::Approx(0.0).margin(1e-12));
    CHECK(r.qfi_simulated == Catch::Approx(0.5).margin(1e-8));
    CHECK(r.qfi_paper.value() == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("scheme B checkpoint") {
    SchemeConfig cfg;
    cfg.scheme = Scheme::B;
    cfg.theta = M_PI / 2.0;
    cfg.gamma = 0.5;
    cfg.p = 0.5;
    cfg.pr = 0.8;
    const SchemeResult r = run_scheme(cfg);
    CHECK(r.qfi_simulated == Catch::Approx(0.8).margin(1e-8));
    CHECK(r.success_probability == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("probability conservation without post-selection") {
    SchemeConfig cfg;
    cfg.scheme = Scheme::AD;
    cfg.theta = 0.9;
    cfg.gamma = 0.35;
    const SchemeResult r = run_scheme(cfg);
    double total = 0.0;
    for (const auto& br : r.branches) total += br.joint_probability;
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("scheme A placement equivalence and difference") {
    SchemeConfig cfg;
    cfg.scheme = Scheme::A;
    cfg.theta = M_PI / 3.0;
    cfg.phi = 0.2;
    cfg.gamma = 0.4;
    cfg.pr = 0.6;

    cfg.placement = Placement::OnResource;
    const SchemeResult on_res = run_scheme(cfg);
    cfg.placement = Placement::PostBellPreCorrection;
    const SchemeResult pre = run_scheme(cfg);
    cfg.placement = Placement::PostBellPostCorrection;
    const SchemeResult post = run_scheme(cfg);

    CHECK(max_abs_diff(on_res.averaged_state.mat, pre.averaged_state.mat) < 1e-12);
    CHECK(std::abs(on_res.success_probability - pre.success_probability) < 1e-12);
    // applying the measurement after the Pauli correction is a different circuit
    CHECK(max_abs_diff(on_res.averaged_state.mat, post.averaged_state.mat) > 1e-6);
}

TEST_CASE("scheme B at p=0 reproduces the scheme A closed form") {
    // the reversal circuit with no prior measurement realizes the printed
    // scheme A expressions, including the case where the printed normalization
    // deviates from the M0 circuit
    for (double g : {0.2, 0.45, 0.7})
        for (double pr : {0.0, 0.3, 0.8}) {
            SchemeConfig b;
            b.scheme = Scheme::B;
            b.theta = 1.0;
            b.phi = 0.5;
            b.gamma = g;
            b.p = 0.0;
            b.pr = pr;
            const SchemeResult rb = run_scheme(b);
            const auto ea = formulas::scheme_a(1.0, 0.5, g, pr);
            CHECK(rb.qfi_simulated == Catch::Approx(ea.qfi).margin(1e-8));
            CHECK(rb.bloch.rx == Catch::Approx(ea.bloch.rx).margin(1e-10));
            CHECK(rb.bloch.rz == Catch::Approx(ea.bloch.rz).margin(1e-10));
        }
}

TEST_CASE("two-sided degenerate limits") {
    SchemeConfig t;
    t.scheme = Scheme::TwoSided;
    t.theta = 1.2;
    t.phi = 0.3;
    t.gamma1 = 0.0;
    t.gamma2 = 0.4;
    t.p1 = t.p2 = t.pr1 = t.pr2 = 0.0;
    const SchemeResult rt = run_scheme(t);

    SchemeConfig ad;
    ad.scheme = Scheme::AD;
    ad.theta = 1.2;
    ad.phi = 0.3;
    ad.gamma = 0.4;
    const SchemeResult rad = run_scheme(ad);

    CHECK(max_abs_diff(rt.averaged_state.mat, rad.averaged_state.mat) < 1e-12);
    CHECK(std::abs(rt.qfi_simulated - rad.qfi_simulated) < 1e-10);
    CHECK(std::abs(rt.success_probability - rad.success_probability) < 1e-12);
}

TEST_CASE("two-sided matches the closed forms") {
    SchemeConfig t;
    t.scheme = Scheme::TwoSided;
    t.theta = 1.1;
    t.phi = 0.7;
    t.gamma1 = 0.4;
    t.gamma2 = 0.25;
    t.p1 = 0.3;
    t.p2 = 0.2;
    t.pr1 = 0.35;
    t.pr2 = 0.15;
    const SchemeResult r = run_scheme(t);
    const auto e = formulas::two_sided(t.theta, t.phi, t.gamma1, t.gamma2,
                                       t.p1, t.p2, t.pr1, t.pr2);
    CHECK(r.bloch.rx == Catch::Approx(e.bloch.rx).margin(1e-10));
    CHECK(r.bloch.ry == Catch::Approx(e.bloch.ry).margin(1e-10));
    CHECK(r.bloch.rz == Catch::Approx(e.bloch.rz).margin(1e-10));
    CHECK(r.qfi_simulated == Catch::Approx(e.qfi).margin(1e-8));
}

TEST_CASE("configuration validation") {
    SchemeConfig cfg;
    cfg.gamma = 1.5;
    CHECK_THROWS_AS(run_scheme(cfg), std::invalid_argument);

    SchemeConfig ts;
    ts.scheme = Scheme::TwoSided;
    ts.gamma1 = 0.2;
    ts.gamma2 = 0.5;
    ts.pr_policy = PrPolicy::PaperOptimal;
    CHECK_THROWS_AS(run_scheme(ts), config_error);
}

TEST_CASE("paper-optimal policy resolves pr") {
    SchemeConfig cfg;
    cfg.scheme = Scheme::B;
    cfg.theta = M_PI / 2.0;
    cfg.gamma = 0.5;
    cfg.p = 0.5;
    cfg.pr_policy = PrPolicy::PaperOptimal;
    const SchemeResult r = run_scheme(cfg);
    CHECK(r.pr_resolved == Catch::Approx(0.8).margin(1e-12));
    CHECK(r.qfi_paper.value() == Catch::Approx(0.8).margin(1e-12));
    CHECK(r.success_probability == Catch::Approx(0.25).margin(1e-10));
}
