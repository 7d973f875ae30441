#pragma once

// Quantum Fisher information estimators over parameterized state families:
// SLD eigenbasis sum, the spectral three-term formula, and the single-qubit
// Bloch-vector form. Derivatives are central finite differences.

#include <cmath>
#include <functional>
#include <vector>

#include "complexalg.hpp"
#include "quantum.hpp"

namespace qfiport {

struct StateFamily {
    std::function<DensityMatrix(double)> evaluate;
    int dimension = 2;
};

enum class QfiMethod { Sld, Spectral, Bloch };

struct QfiEstimate {
    double value = 0.0;
    QfiMethod method = QfiMethod::Sld;
    double step = 0.0;
};

constexpr double kDefaultStep = 1e-5;
constexpr double kEigCutoff = 1e-10;

// Central difference (rho(phi+h) - rho(phi-h)) / 2h.
inline Matrix d_rho(const StateFamily& family, double phi, double h = kDefaultStep) {
    if (h <= 0.0) throw std::invalid_argument("d_rho: step must be positive");
    const Matrix plus = family.evaluate(phi + h).mat;
    const Matrix minus = family.evaluate(phi - h).mat;
    return (plus - minus) * cx{1.0 / (2.0 * h), 0.0};
}

// F = sum over m,n with lam_m + lam_n > eps of 2|<m|drho|n>|^2 / (lam_m + lam_n).
inline QfiEstimate qfi_sld(const StateFamily& family, double phi, double h = kDefaultStep) {
    const DensityMatrix rho = family.evaluate(phi);
    const Matrix dr = d_rho(family, phi, h);
    const EigenDecomposition ed = hermitian_eig(rho.mat);
    const std::size_t n = rho.mat.rows();

    // <m| drho |n> in the eigenbasis
    const Matrix v = ed.eigenvectors;
    const Matrix w = v.dagger() * dr * v;
    double f = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const double den = std::max(0.0, ed.eigenvalues[a]) + std::max(0.0, ed.eigenvalues[b]);
            if (den > kEigCutoff) f += 2.0 * std::norm(w(a, b)) / den;
        }
    return {std::max(0.0, f), QfiMethod::Sld, h};
}

namespace detail {

// Reorder and phase-fix the columns of `other` so column k matches column k of
// `ref` with real-positive overlap. Throws if the overlap matrix is not close
// to a permutation (eigenvalue crossing inside the stencil).
inline Matrix align_eigvecs(const Matrix& ref, const Matrix& other) {
    const std::size_t n = ref.cols();
    Matrix out(n, n);
    std::vector<bool> used(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t best = n;
        double bestmag = -1.0;
        cx bestov{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            cx ov{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i)
                ov += std::conj(ref(i, k)) * other(i, j);
            if (std::abs(ov) > bestmag) { bestmag = std::abs(ov); best = j; bestov = ov; }
        }
        if (best == n || bestmag < 0.7)
            throw crossing_error("qfi_spectral: eigenvector overlap not near-permutation; reduce h");
        used[best] = true;
        const cx phase = std::conj(bestov) / bestmag;
        for (std::size_t i = 0; i < n; ++i) out(i, k) = other(i, best) * phase;
    }
    return out;
}

}  // namespace detail

// Spectral form: sum (dlam)^2/lam + sum lam * F_n - sum_{n!=m} 8 lam_n lam_m /
// (lam_n+lam_m) |<psi_n|dpsi_m>|^2, with finite-difference eigen-derivatives
// tracked by maximal overlap.
inline QfiEstimate qfi_spectral(const StateFamily& family, double phi, double h = kDefaultStep) {
    const EigenDecomposition e0 = hermitian_eig(family.evaluate(phi).mat);
    EigenDecomposition ep = hermitian_eig(family.evaluate(phi + h).mat);
    EigenDecomposition em = hermitian_eig(family.evaluate(phi - h).mat);
    const std::size_t n = e0.eigenvectors.rows();

    // Align eigenvalues as well: match to the phi ordering before differencing.
    auto aligned_values = [&](const EigenDecomposition& e) {
        std::vector<double> vals(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t best = 0;
            double bestmag = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                cx ov{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i)
                    ov += std::conj(e0.eigenvectors(i, k)) * e.eigenvectors(i, j);
                if (std::abs(ov) > bestmag) { bestmag = std::abs(ov); best = j; }
            }
            vals[k] = e.eigenvalues[best];
        }
        return vals;
    };
    const std::vector<double> lp = aligned_values(ep);
    const std::vector<double> lm = aligned_values(em);

    const Matrix vp = detail::align_eigvecs(e0.eigenvectors, ep.eigenvectors);
    const Matrix vm = detail::align_eigvecs(e0.eigenvectors, em.eigenvectors);
    Matrix dv = (vp - vm) * cx{1.0 / (2.0 * h), 0.0};

    auto col_dot = [&](const Matrix& a, std::size_t ca, const Matrix& b, std::size_t cb) {
        cx s{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) s += std::conj(a(i, ca)) * b(i, cb);
        return s;
    };

    double f = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = std::max(0.0, e0.eigenvalues[k]);
        const double dlam = (lp[k] - lm[k]) / (2.0 * h);
        if (lam > kEigCutoff) f += dlam * dlam / lam;
        const double dd = std::real(col_dot(dv, k, dv, k));
        const double mixed = std::norm(col_dot(e0.eigenvectors, k, dv, k));
        f += lam * 4.0 * (dd - mixed);
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            const double la = std::max(0.0, e0.eigenvalues[a]);
            const double lb = std::max(0.0, e0.eigenvalues[b]);
            if (la + lb <= kEigCutoff || la <= kEigCutoff || lb <= kEigCutoff) continue;
            f -= 8.0 * la * lb / (la + lb) * std::norm(col_dot(e0.eigenvectors, a, dv, b));
        }
    return {std::max(0.0, f), QfiMethod::Spectral, h};
}

// Single-qubit Bloch form, with the (r . dr) numerator squared.
inline QfiEstimate qfi_bloch(const BlochVector& r, const BlochVector& dr) {
    const double rn = r.norm();
    if (rn > 1.0 + 1e-9) throw std::invalid_argument("qfi_bloch: |r| exceeds 1");
    const double drsq = dr.dot(dr);
    double f;
    if (rn < 1.0 - 1e-9) {
        const double rdot = r.dot(dr);
        f = drsq + rdot * rdot / (1.0 - rn * rn);
    } else {
        f = drsq;
    }
    return {std::max(0.0, f), QfiMethod::Bloch, 0.0};
}

// Convenience: Bloch-form QFI of a single-qubit family via central differences.
inline QfiEstimate qfi_bloch_family(const StateFamily& family, double phi,
                                    double h = kDefaultStep) {
    const BlochVector r = bloch_of(family.evaluate(phi));
    const BlochVector rp = bloch_of(family.evaluate(phi + h));
    const BlochVector rm = bloch_of(family.evaluate(phi - h));
    BlochVector dr{(rp.rx - rm.rx) / (2.0 * h), (rp.ry - rm.ry) / (2.0 * h),
                   (rp.rz - rm.rz) / (2.0 * h)};
    QfiEstimate e = qfi_bloch(r, dr);
    e.step = h;
    return e;
}

}  // namespace qfiport
