#pragma once

// Minimal dense complex-matrix kernel for dimensions up to 8x8:
// arithmetic, Kronecker products, partial trace, Hermitian eigendecomposition
// (cyclic complex Jacobi) and PSD matrix square root.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace qfiport {

using cx = std::complex<double>;

constexpr std::size_t kMaxDim = 8;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cx{0.0, 0.0}) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: entry count does not match dimensions");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix diag(std::vector<cx> d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cx& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    const cx& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    Matrix& operator*=(cx s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cx s) { return a *= s; }
    friend Matrix operator*(cx s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("Matrix multiply: inner dimensions differ");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cx aik = a(i, k);
                if (aik == cx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    Matrix dagger() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    Matrix conjugate() const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = std::conj(a_[i]);
        return r;
    }

    cx trace() const {
        cx t{0.0, 0.0};
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    bool is_finite() const {
        for (const auto& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    bool is_square() const { return rows_ == cols_; }

    double hermiticity_defect() const {
        double d = 0.0;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
        return d;
    }

    Matrix column(std::size_t c) const {
        Matrix v(rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) v(i, 0) = (*this)(i, c);
        return v;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cx> a_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

// Kronecker product; qubit 0 is the leftmost (most significant) factor.
inline Matrix tensor(const Matrix& a, const Matrix& b) {
    const std::size_t rr = a.rows() * b.rows();
    const std::size_t rc = a.cols() * b.cols();
    if (rr > kMaxDim || rc > kMaxDim)
        throw size_error("tensor: result exceeds the 8x8 cap");
    Matrix r(rr, rc);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cx aij = a(i, j);
            if (aij == cx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

// Reduced matrix on the kept qubits. Qubit q occupies bit (n_qubits-1-q) of the
// basis index, i.e. qubit 0 is the most significant bit.
inline Matrix partial_trace(const Matrix& m, const std::vector<int>& keep, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (!m.is_square() || m.rows() != dim)
        throw std::invalid_argument("partial_trace: matrix is not 2^n square");
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set empty");
    for (int q : keep)
        if (q < 0 || q >= n_qubits) throw std::invalid_argument("partial_trace: qubit index out of range");

    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    std::vector<int> traced;
    for (int q = 0; q < n_qubits; ++q)
        if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

    const std::size_t kdim = std::size_t{1} << kept.size();
    const std::size_t tdim = std::size_t{1} << traced.size();
    auto full_index = [&](std::size_t k, std::size_t t) {
        std::size_t idx = 0;
        for (std::size_t b = 0; b < kept.size(); ++b)
            idx |= ((k >> (kept.size() - 1 - b)) & 1u) << (n_qubits - 1 - kept[b]);
        for (std::size_t b = 0; b < traced.size(); ++b)
            idx |= ((t >> (traced.size() - 1 - b)) & 1u) << (n_qubits - 1 - traced[b]);
        return idx;
    };

    Matrix r(kdim, kdim);
    for (std::size_t i = 0; i < kdim; ++i)
        for (std::size_t j = 0; j < kdim; ++j)
            for (std::size_t t = 0; t < tdim; ++t)
                r(i, j) += m(full_index(i, t), full_index(j, t));
    return r;
}

struct EigenDecomposition {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // columns, orthonormal
};

// Cyclic complex Jacobi on the symmetrized input. Converges when the
// off-diagonal Frobenius norm drops below 1e-14 * ||m||_F, capped at 100 sweeps.
// Eigenvalues ascending; each eigenvector's largest-magnitude component is made
// real positive so identical inputs give identical outputs.
inline EigenDecomposition hermitian_eig(const Matrix& m) {
    if (!m.is_square()) throw std::invalid_argument("hermitian_eig: matrix not square");
    if (m.hermiticity_defect() > 1e-10)
        throw std::invalid_argument("hermitian_eig: input not Hermitian within 1e-10");
    const std::size_t n = m.rows();

    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    Matrix v = Matrix::identity(n);

    const double norm = a.frobenius_norm();
    auto offdiag = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += std::norm(a(i, j));
        return std::sqrt(s);
    };

    const double tol = 1e-14 * norm;
    int sweep = 0;
    while (offdiag() > tol && norm > 0.0) {
        if (++sweep > 100)
            throw numerical_error("hermitian_eig: Jacobi did not converge in 100 sweeps", offdiag());
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= 1e-300) continue;
                const cx e = a(p, q) / r;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary U: U[p][p]=c, U[p][q]=s*e, U[q][p]=-s*conj(e), U[q][q]=c.
                for (std::size_t i = 0; i < n; ++i) {  // columns: A <- A U
                    const cx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * std::conj(e) * aiq;
                    a(i, q) = s * e * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {  // rows: A <- U^dag A
                    const cx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * e * aqj;
                    a(q, j) = s * std::conj(e) * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {  // V <- V U
                    const cx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * std::conj(e) * viq;
                    v(i, q) = s * e * vip + c * viq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        out.eigenvalues[k] = a(src, src).real();
        std::size_t imax = 0;
        double amax = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v(i, src));
            if (mag > amax) { amax = mag; imax = i; }
        }
        cx phase{1.0, 0.0};
        if (amax > 1e-300) phase = std::conj(v(imax, src)) / amax;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * phase;
    }
    return out;
}

// Hermitian PSD square root. Eigenvalues in [-1e-10, 0) are clamped to zero;
// anything lower is rejected.
inline Matrix sqrt_psd(const Matrix& m) {
    EigenDecomposition ed = hermitian_eig(m);
    const std::size_t n = m.rows();
    for (double lam : ed.eigenvalues)
        if (lam < -1e-10) throw not_psd_error("sqrt_psd: eigenvalue below -1e-10");
    Matrix r(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = std::max(0.0, ed.eigenvalues[k]);
        const double s = std::sqrt(lam);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                r(i, j) += s * ed.eigenvectors(i, k) * std::conj(ed.eigenvectors(j, k));
    }
    return r;
}

}  // namespace qfiport
