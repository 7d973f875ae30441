#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qfiport/complexalg.hpp"

using namespace qfiport;

namespace {

Matrix random_complex(std::size_t n, std::mt19937& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cx{g(rng), g(rng)};
    return m;
}

Matrix random_hermitian(std::size_t n, std::mt19937& rng) {
    Matrix g = random_complex(n, rng);
    return (g + g.dagger()) * cx{0.5, 0.0};
}

Matrix random_density(std::size_t n, std::mt19937& rng) {
    Matrix g = random_complex(n, rng);
    Matrix rho = g * g.dagger();
    return rho * cx{1.0 / rho.trace().real(), 0.0};
}

}  // namespace

TEST_CASE("tensor basics") {
    const Matrix i2 = Matrix::identity(2);
    const Matrix d = Matrix::diag({1.0, std::sqrt(0.75)});
    const Matrix t = tensor(i2, d);
    REQUIRE(t.rows() == 4);
    CHECK(std::abs(t(0, 0) - cx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(t(1, 1) - cx{std::sqrt(0.75), 0.0}) < 1e-15);
    CHECK(std::abs(t(2, 2) - cx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(t(3, 3) - cx{std::sqrt(0.75), 0.0}) < 1e-15);

    CHECK(max_abs_diff(tensor(i2, i2), Matrix::identity(4)) == 0.0);

    const Matrix sx(2, 2, {0, 1, 1, 0});
    Matrix v00(4, 1);
    v00(0, 0) = 1.0;
    const Matrix v = tensor(sx, sx) * v00;
    CHECK(std::abs(v(3, 0) - cx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(v(0, 0)) < 1e-15);
}

TEST_CASE("tensor size cap") {
    const Matrix i4 = Matrix::identity(4);
    CHECK_THROWS_AS(tensor(i4, i4), size_error);
}

TEST_CASE("tensor associativity") {
    std::mt19937 rng(11);
    const Matrix a = random_complex(2, rng);
    const Matrix b = random_complex(2, rng);
    const Matrix c = random_complex(2, rng);
    CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) < 1e-13);
}

TEST_CASE("partial trace") {
    // maximally entangled reduction
    Matrix bell(4, 4);
    bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
    const Matrix half = Matrix::identity(2) * cx{0.5, 0.0};
    CHECK(max_abs_diff(partial_trace(bell, {0}, 2), half) < 1e-15);
    CHECK(max_abs_diff(partial_trace(bell, {1}, 2), half) < 1e-15);

    // product state
    std::mt19937 rng(17);
    const Matrix ra = random_density(2, rng);
    const Matrix rb = random_density(2, rng);
    CHECK(max_abs_diff(partial_trace(tensor(ra, rb), {1}, 2), rb) < 1e-14);
    CHECK(max_abs_diff(partial_trace(tensor(ra, rb), {0}, 2), ra) < 1e-14);

    // identity case
    const Matrix full = random_density(4, rng);
    CHECK(max_abs_diff(partial_trace(full, {0, 1}, 2), full) == 0.0);

    // trace preservation
    const Matrix m3 = random_density(8, rng);
    CHECK(std::abs(partial_trace(m3, {1}, 3).trace() - m3.trace()) < 1e-12);

    CHECK_THROWS_AS(partial_trace(full, {5}, 2), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(full, {}, 2), std::invalid_argument);
}

TEST_CASE("hermitian_eig pauli and diagonal") {
    const Matrix sx(2, 2, {0, 1, 1, 0});
    auto ed = hermitian_eig(sx);
    CHECK(ed.eigenvalues[0] == Catch::Approx(-1.0).margin(1e-14));
    CHECK(ed.eigenvalues[1] == Catch::Approx(1.0).margin(1e-14));

    auto ed2 = hermitian_eig(Matrix::diag({0.2, 0.8}));
    CHECK(ed2.eigenvalues[0] == Catch::Approx(0.2).margin(1e-15));
    CHECK(ed2.eigenvalues[1] == Catch::Approx(0.8).margin(1e-15));
    CHECK(std::abs(ed2.eigenvectors(0, 0) - cx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(ed2.eigenvectors(1, 1) - cx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("hermitian_eig reconstruction on random 8x8") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix h = random_hermitian(8, rng);
        const double scale = h.frobenius_norm();
        h *= cx{1.0 / scale, 0.0};  // unit-norm input
        auto ed = hermitian_eig(h);
        Matrix rec(8, 8);
        for (std::size_t k = 0; k < 8; ++k)
            for (std::size_t i = 0; i < 8; ++i)
                for (std::size_t j = 0; j < 8; ++j)
                    rec(i, j) += ed.eigenvalues[k] * ed.eigenvectors(i, k) *
                                 std::conj(ed.eigenvectors(j, k));
        CHECK((rec - h).frobenius_norm() / h.frobenius_norm() < 1e-12);
        CHECK(max_abs_diff(ed.eigenvectors.dagger() * ed.eigenvectors,
                           Matrix::identity(8)) < 1e-12);
        // eigenvalue sum equals trace
        double sum = 0.0;
        for (double lam : ed.eigenvalues) sum += lam;
        CHECK(std::abs(sum - h.trace().real()) < 1e-12);
        // ascending
        for (std::size_t k = 1; k < 8; ++k)
            CHECK(ed.eigenvalues[k] >= ed.eigenvalues[k - 1]);
    }
}

TEST_CASE("hermitian_eig spectrum invariant under unitary conjugation") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix h = random_hermitian(4, rng);
        const Matrix u = hermitian_eig(random_hermitian(4, rng)).eigenvectors;
        auto e1 = hermitian_eig(h);
        auto e2 = hermitian_eig(u * h * u.dagger());
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(std::abs(e1.eigenvalues[k] - e2.eigenvalues[k]) < 1e-10);
    }
}

TEST_CASE("hermitian_eig is deterministic") {
    std::mt19937 rng(37);
    const Matrix h = random_hermitian(6, rng);
    auto e1 = hermitian_eig(h);
    auto e2 = hermitian_eig(h);
    CHECK(max_abs_diff(e1.eigenvectors, e2.eigenvectors) == 0.0);
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    Matrix m(2, 2, {0, 1, 2, 0});
    CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("sqrt_psd") {
    CHECK(max_abs_diff(sqrt_psd(Matrix::diag({4.0, 9.0})), Matrix::diag({2.0, 3.0})) < 1e-12);
    CHECK(max_abs_diff(sqrt_psd(Matrix::identity(4)), Matrix::identity(4)) < 1e-13);

    std::mt19937 rng(41);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix rho = random_density(4, rng);
        const Matrix s = sqrt_psd(rho);
        worst = std::max(worst, max_abs_diff(s * s, rho));
        // commutes with the input
        CHECK((s * rho - rho * s).frobenius_norm() < 1e-10);
        CHECK(s.hermiticity_defect() < 1e-12);
    }
    CHECK(worst < 1e-10);

    CHECK_THROWS_AS(sqrt_psd(Matrix::diag({1.0, -0.5})), not_psd_error);
}
