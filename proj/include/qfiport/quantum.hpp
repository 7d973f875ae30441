#pragma once

// Quantum-state constructors, channels and measurements: the phase-encoded
// input state, Bell states, amplitude-damping Kraus pairs, partial
// measurements and their physical reversal, Bloch conversion and Wootters
// concurrence.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "complexalg.hpp"
#include "errors.hpp"

namespace qfiport {

inline Matrix pauli_x() { return Matrix(2, 2, {0, 1, 1, 0}); }
inline Matrix pauli_y() { return Matrix(2, 2, {0, cx{0, -1}, cx{0, 1}, 0}); }
inline Matrix pauli_z() { return Matrix(2, 2, {1, 0, 0, -1}); }

struct DensityMatrix {
    int n_qubits = 1;
    Matrix mat;
    bool normalized = true;

    DensityMatrix() : mat(Matrix::identity(2) * cx{0.5, 0.0}) {}
    DensityMatrix(int nq, Matrix m, bool norm = true)
        : n_qubits(nq), mat(std::move(m)), normalized(norm) {
        const std::size_t dim = std::size_t{1} << nq;
        if (nq < 1 || nq > 3 || mat.rows() != dim || mat.cols() != dim)
            throw std::invalid_argument("DensityMatrix: dimension does not match qubit count");
        if (!mat.is_finite())
            throw std::invalid_argument("DensityMatrix: non-finite entries");
        if (mat.hermiticity_defect() > 1e-10)
            throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
    }

    double trace() const { return mat.trace().real(); }

    DensityMatrix renormalized() const {
        const double t = trace();
        if (t < 1e-14)
            throw degenerate_run_error("DensityMatrix: cannot renormalize near-zero trace");
        return DensityMatrix(n_qubits, mat * cx{1.0 / t, 0.0}, true);
    }
};

struct BlochVector {
    double rx = 0.0, ry = 0.0, rz = 0.0;
    double norm() const { return std::sqrt(rx * rx + ry * ry + rz * rz); }
    double dot(const BlochVector& o) const { return rx * o.rx + ry * o.ry + rz * o.rz; }
};

// Embed a single-qubit operator on `target` within an n-qubit register.
inline Matrix embed_1q(const Matrix& op, int target, int n_qubits) {
    if (op.rows() != 2 || op.cols() != 2)
        throw std::invalid_argument("embed_1q: operator must be 2x2");
    if (target < 0 || target >= n_qubits)
        throw std::invalid_argument("embed_1q: target out of range");
    Matrix r = (target == 0) ? op : Matrix::identity(2);
    for (int q = 1; q < n_qubits; ++q)
        r = tensor(r, (q == target) ? op : Matrix::identity(2));
    return r;
}

struct KrausChannel {
    std::vector<Matrix> operators;  // single-qubit, 2x2
    int target = 0;
    int n_qubits = 1;

    double completeness_defect() const {
        Matrix s = Matrix::zero(2, 2);
        for (const auto& e : operators) s += e.dagger() * e;
        return max_abs_diff(s, Matrix::identity(2));
    }
};

struct MeasurementOperator {
    Matrix op;  // single-qubit, 2x2
    int target = 0;
    int n_qubits = 1;
    double strength = 0.0;

    Matrix embedded() const { return embed_1q(op, target, n_qubits); }
};

// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, as a rank-1 density matrix.
inline DensityMatrix input_state(double theta, double phi) {
    const cx a{std::cos(theta / 2.0), 0.0};
    const cx b = std::polar(std::sin(theta / 2.0), phi);
    Matrix m(2, 2,
             {a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b)});
    return DensityMatrix(1, std::move(m), true);
}

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

inline DensityMatrix bell_state(BellKind kind) {
    std::vector<cx> v(4, cx{0.0, 0.0});
    const double s = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case BellKind::PhiPlus:  v[0] = s; v[3] = s;  break;
        case BellKind::PhiMinus: v[0] = s; v[3] = -s; break;
        case BellKind::PsiPlus:  v[1] = s; v[2] = s;  break;
        case BellKind::PsiMinus: v[1] = s; v[2] = -s; break;
    }
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = v[i] * std::conj(v[j]);
    return DensityMatrix(2, std::move(m), true);
}

inline KrausChannel ad_channel(double gamma, int target, int n_qubits) {
    if (gamma < 0.0 || gamma > 1.0)
        throw std::invalid_argument("ad_channel: gamma outside [0,1]");
    KrausChannel ch;
    ch.operators = {Matrix(2, 2, {1, 0, 0, std::sqrt(1.0 - gamma)}),
                    Matrix(2, 2, {0, std::sqrt(gamma), 0, 0})};
    ch.target = target;
    ch.n_qubits = n_qubits;
    return ch;
}

inline DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
    if (rho.n_qubits != ch.n_qubits)
        throw std::invalid_argument("apply_channel: qubit count mismatch");
    Matrix out = Matrix::zero(rho.mat.rows(), rho.mat.cols());
    for (const auto& e : ch.operators) {
        const Matrix em = embed_1q(e, ch.target, ch.n_qubits);
        out += em * rho.mat * em.dagger();
    }
    return DensityMatrix(rho.n_qubits, std::move(out), rho.normalized);
}

// M0 = diag(1, sqrt(1-p)), M1 = sqrt(p)|1><1|.
inline std::pair<MeasurementOperator, MeasurementOperator>
partial_measurement(double p, int target, int n_qubits) {
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("partial_measurement: p outside [0,1]");
    MeasurementOperator m0{Matrix(2, 2, {1, 0, 0, std::sqrt(1.0 - p)}), target, n_qubits, p};
    MeasurementOperator m1{Matrix(2, 2, {0, 0, 0, std::sqrt(p)}), target, n_qubits, p};
    return {m0, m1};
}

// Physical (trace-nonincreasing) reversal X.M0(pr).X = diag(sqrt(1-pr), 1).
inline MeasurementOperator reversal_operator(double pr, int target, int n_qubits) {
    if (pr < 0.0 || pr > 1.0)
        throw std::invalid_argument("reversal_operator: pr outside [0,1]");
    return {Matrix(2, 2, {std::sqrt(1.0 - pr), 0, 0, 1}), target, n_qubits, pr};
}

// Returns M rho M^dag unnormalized together with the outcome probability.
inline std::pair<DensityMatrix, double>
apply_measurement(const DensityMatrix& rho, const MeasurementOperator& m) {
    if (rho.n_qubits != m.n_qubits)
        throw std::invalid_argument("apply_measurement: qubit count mismatch");
    const Matrix em = m.embedded();
    Matrix out = em * rho.mat * em.dagger();
    const double tin = rho.trace();
    const double tout = out.trace().real();
    DensityMatrix r(rho.n_qubits, std::move(out), false);
    return {r, tin > 0.0 ? tout / tin : 0.0};
}

inline BlochVector bloch_of(const DensityMatrix& rho, bool renormalize = true) {
    if (rho.n_qubits != 1) throw std::invalid_argument("bloch_of: state is not single-qubit");
    double t = 1.0;
    if (renormalize) {
        t = rho.trace();
        if (t < 1e-14) throw degenerate_run_error("bloch_of: zero-trace state");
    }
    BlochVector r;
    r.rx = (rho.mat * pauli_x()).trace().real() / t;
    r.ry = (rho.mat * pauli_y()).trace().real() / t;
    r.rz = (rho.mat * pauli_z()).trace().real() / t;
    return r;
}

// Wootters concurrence: max(0, s1-s2-s3-s4), s_i descending square roots of the
// eigenvalues of sqrt(rho).rho_tilde.sqrt(rho).
inline double concurrence(const DensityMatrix& rho) {
    if (rho.n_qubits != 2) throw std::invalid_argument("concurrence: state is not two-qubit");
    const Matrix yy = tensor(pauli_y(), pauli_y());
    const Matrix tilde = yy * rho.mat.conjugate() * yy;
    const Matrix s = sqrt_psd(rho.mat);
    Matrix r = s * tilde * s;
    // symmetrize away iteration noise before the eigensolve
    r = (r + r.dagger()) * cx{0.5, 0.0};
    EigenDecomposition ed = hermitian_eig(r);
    std::vector<double> roots;
    for (double lam : ed.eigenvalues) {
        if (lam < -1e-9) throw not_psd_error("concurrence: negative eigenvalue beyond tolerance");
        roots.push_back(std::sqrt(std::max(0.0, lam)));
    }
    std::sort(roots.rbegin(), roots.rend());
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

// Closed form for X-states: C = 2 max(0, |rho03| - sqrt(rho11 rho22),
// |rho12| - sqrt(rho00 rho33)).
inline double concurrence_x_state(const DensityMatrix& rho) {
    if (rho.n_qubits != 2) throw std::invalid_argument("concurrence_x_state: state is not two-qubit");
    const Matrix& m = rho.mat;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j && i + j != 3 && std::abs(m(i, j)) > 1e-10)
                throw std::invalid_argument("concurrence_x_state: non-X entry present");
    const double a = std::max(0.0, m(0, 0).real());
    const double b = std::max(0.0, m(1, 1).real());
    const double c = std::max(0.0, m(2, 2).real());
    const double d = std::max(0.0, m(3, 3).real());
    const double c1 = std::abs(m(0, 3)) - std::sqrt(b * c);
    const double c2 = std::abs(m(1, 2)) - std::sqrt(a * d);
    return 2.0 * std::max({0.0, c1, c2});
}

}  // namespace qfiport
