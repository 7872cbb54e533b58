#include <cmath>

#include "doctest.h"
#include "hnnso/error.hpp"
#include "hnnso/linalg.hpp"

using namespace hnnso;

namespace {

// Straight-line reference contractions, kept independent of the kernels.
Vector oracle_bilinear(const Tensor3& t, const Vector& u, const Vector& v) {
    Vector out(t.d3(), 0.0);
    for (std::size_t k = 0; k < t.d3(); ++k)
        for (std::size_t i = 0; i < t.d1(); ++i)
            for (std::size_t j = 0; j < t.d2(); ++j) out[k] += u[i] * t(i, j, k) * v[j];
    return out;
}

Vector oracle_contract_13(const Tensor3& t, const Vector& u, const Vector& h) {
    Vector out(t.d2(), 0.0);
    for (std::size_t j = 0; j < t.d2(); ++j)
        for (std::size_t i = 0; i < t.d1(); ++i)
            for (std::size_t k = 0; k < t.d3(); ++k) out[j] += u[i] * t(i, j, k) * h[k];
    return out;
}

Tensor3 random_tensor(std::size_t d1, std::size_t d2, std::size_t d3, Rng& rng) {
    Tensor3 t(d1, d2, d3);
    for (std::size_t k = 0; k < d3; ++k)
        for (std::size_t i = 0; i < d1; ++i)
            for (std::size_t j = 0; j < d2; ++j) t(i, j, k) = rng.uniform_range(-1.0, 1.0);
    return t;
}

Vector random_vector(std::size_t n, Rng& rng) {
    Vector v(n);
    for (auto& x : v) x = rng.uniform_range(-1.0, 1.0);
    return v;
}

}  // namespace

TEST_CASE("matvec identity and zero") {
    Matrix id = Matrix::identity(2);
    CHECK(matvec(id, {3.0, 4.0}) == Vector{3.0, 4.0});

    Matrix z(2, 2);
    CHECK(matvec(z, {3.0, 4.0}) == Vector{0.0, 0.0});
}

TEST_CASE("matvec hand-evaluated case") {
    Matrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = 2.0;
    m(1, 0) = 0.0;
    m(1, 1) = 1.0;
    CHECK(matvec(m, {1.0, 1.0}) == Vector{3.0, 1.0});
}

TEST_CASE("matvec shape mismatch names both operands") {
    Matrix m(2, 3);
    CHECK_THROWS_WITH_AS(matvec(m, {1.0, 2.0}),
                         "matvec: matrix is 2x3 but vector has length 2", ShapeError);
}

TEST_CASE("matvec_t matches transposed matvec") {
    Rng rng(7);
    Matrix m(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = rng.uniform_range(-1.0, 1.0);
    Matrix mt(4, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) mt(j, i) = m(i, j);
    Vector v = random_vector(3, rng);
    Vector a = matvec_t(m, v);
    Vector b = matvec(mt, v);
    for (std::size_t j = 0; j < 4; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-15));
}

TEST_CASE("bilinear_slices trivial cases") {
    Tensor3 id(2, 2, 1);
    id(0, 0, 0) = 1.0;
    id(1, 1, 0) = 1.0;
    CHECK(bilinear_slices(id, {1.0, 2.0}, {1.0, 2.0}) == Vector{5.0});

    Tensor3 ones(2, 2, 1, 1.0);
    CHECK(bilinear_slices(ones, {1.0, -1.0}, {1.0, -1.0}) == Vector{0.0});

    Tensor3 t(2, 2, 1);
    t(0, 1, 0) = 1.0;
    CHECK(bilinear_slices(t, {1.0, 2.0}, {3.0, 4.0}) == Vector{4.0});
}

TEST_CASE("bilinear_slices equals triple-loop oracle on random shapes") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const std::size_t d1 = 1 + seed % 6, d2 = 1 + (seed / 2) % 6, d3 = 1 + (seed / 3) % 6;
        Tensor3 t = random_tensor(d1, d2, d3, rng);
        Vector u = random_vector(d1, rng), v = random_vector(d2, rng);
        Vector got = bilinear_slices(t, u, v);
        Vector want = oracle_bilinear(t, u, v);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < d3; ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-12);
    }
}

TEST_CASE("bilinear_slices shape mismatch") {
    Tensor3 t(2, 3, 1);
    CHECK_THROWS_AS(bilinear_slices(t, {1.0, 2.0}, {1.0, 2.0}), ShapeError);
}

TEST_CASE("contract_13 trivial cases") {
    Tensor3 ones(2, 2, 1, 1.0);
    CHECK(contract_13(ones, {1.0, -1.0}, {1.0}) == Vector{0.0, 0.0});

    Tensor3 id(2, 2, 1);
    id(0, 0, 0) = 1.0;
    id(1, 1, 0) = 1.0;
    CHECK(contract_13(id, {2.0, 3.0}, {1.0}) == Vector{2.0, 3.0});

    Tensor3 t(2, 2, 1);
    t(0, 1, 0) = 5.0;
    Vector out = contract_13(t, {2.0, 7.0}, {3.0});
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 30.0);
}

TEST_CASE("contract_13 equals triple-loop oracle on random shapes") {
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        Rng rng(seed);
        const std::size_t d1 = 1 + seed % 6, d2 = 1 + (seed / 2) % 6, d3 = 1 + (seed / 3) % 6;
        Tensor3 t = random_tensor(d1, d2, d3, rng);
        Vector u = random_vector(d1, rng), h = random_vector(d3, rng);
        Vector got = contract_13(t, u, h);
        Vector want = oracle_contract_13(t, u, h);
        for (std::size_t j = 0; j < d2; ++j) CHECK(std::abs(got[j] - want[j]) <= 1e-12);
    }
}

TEST_CASE("contract_13 is consistent with bilinear_slices on basis vectors") {
    Rng rng(42);
    Tensor3 t = random_tensor(4, 3, 5, rng);
    Vector u = random_vector(4, rng), h = random_vector(5, rng);
    Vector lhs = contract_13(t, u, h);
    for (std::size_t j = 0; j < 3; ++j) {
        Vector ej(3, 0.0);
        ej[j] = 1.0;
        Vector slices = bilinear_slices(t, u, ej);
        double rhs = 0.0;
        for (std::size_t k = 0; k < 5; ++k) rhs += h[k] * slices[k];
        CHECK(lhs[j] == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("tanh_vec") {
    CHECK(tanh_vec({0.0, 0.0}) == Vector{0.0, 0.0});

    // reference value from (e - 1/e) / (e + 1/e)
    const double e = std::exp(1.0);
    const double ref = (e - 1.0 / e) / (e + 1.0 / e);
    CHECK(tanh_vec({1.0})[0] == doctest::Approx(ref).epsilon(1e-15));

    Rng rng(3);
    Vector v = random_vector(16, rng);
    for (auto& x : v) x *= 5.0;
    Vector pos = tanh_vec(v);
    Vector neg(v);
    for (auto& x : neg) x = -x;
    Vector flipped = tanh_vec(neg);
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(pos[i] == -flipped[i]);  // odd symmetry
        CHECK(pos[i] > -1.0);
        CHECK(pos[i] < 1.0);
    }
}

TEST_CASE("jacobi_eigensym diagonal and rank-1 cases") {
    Matrix d(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 1.0;
    SymmetricEigen ed = jacobi_eigensym(d);
    CHECK(ed.eigenvalues[0] == doctest::Approx(2.0));
    CHECK(ed.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(std::abs(ed.eigenvectors(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(ed.eigenvectors(1, 1)) == doctest::Approx(1.0));

    Matrix ones(2, 2, 1.0);
    SymmetricEigen e1 = jacobi_eigensym(ones);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(e1.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e1.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(e1.eigenvectors(0, 0) == doctest::Approx(s).epsilon(1e-12));
    CHECK(e1.eigenvectors(1, 0) == doctest::Approx(s).epsilon(1e-12));
}

TEST_CASE("jacobi_eigensym reconstruction and orthonormality on random symmetric input") {
    Rng rng(11);
    const std::size_t n = 5;
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.uniform_range(-2.0, 2.0);

    SymmetricEigen e = jacobi_eigensym(m);
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(e.eigenvalues[i] >= e.eigenvalues[i + 1]);

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += e.eigenvectors(i, a) * e.eigenvectors(i, b);
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-9);
        }
    }

    // V diag(lambda) V^T == m
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double rec = 0.0;
            for (std::size_t k = 0; k < n; ++k)
                rec += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
            CHECK(std::abs(rec - m(i, j)) <= 1e-9);
        }
    }

    // m v_i = lambda_i v_i
    for (std::size_t k = 0; k < n; ++k) {
        Vector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = e.eigenvectors(i, k);
        Vector mv = matvec(m, v);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(mv[i] - e.eigenvalues[k] * v[i]) <= 1e-9);
    }
}

TEST_CASE("jacobi_eigensym recovers a planted spectrum") {
    // Build an orthonormal V from the eigenvectors of a random symmetric
    // matrix, plant a known spectrum, and check it is recovered.
    Rng rng(21);
    const std::size_t n = 4;
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = rng.uniform_range(-1.0, 1.0);
    Matrix v = jacobi_eigensym(m).eigenvectors;

    Vector lambda = {5.0, 2.0, 1.0, -3.0};
    Matrix planted(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) planted(i, j) += v(i, k) * lambda[k] * v(j, k);

    SymmetricEigen e = jacobi_eigensym(planted);
    for (std::size_t k = 0; k < n; ++k)
        CHECK(std::abs(e.eigenvalues[k] - lambda[k]) <= 1e-9);
}

TEST_CASE("jacobi_eigensym rejects non-symmetric input") {
    Matrix m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 0.5;
    CHECK_THROWS_AS(jacobi_eigensym(m), ValidationError);

    Matrix rect(2, 3);
    CHECK_THROWS_AS(jacobi_eigensym(rect), ValidationError);
}

TEST_CASE("rng determinism and range") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng r(5);
    for (int i = 0; i < 1000; ++i) {
        const double x = r.uniform_range(0.0, 1e-6);
        CHECK(x >= 0.0);
        CHECK(x < 1e-6);
    }

    CHECK_THROWS_AS(r.uniform_range(1.0, 1.0), ValidationError);
    CHECK_THROWS_AS(r.uniform_range(2.0, 1.0), ValidationError);
}

TEST_CASE("rng uniform mean over 1e5 draws") {
    Rng r(9);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += r.uniform();
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("rng normal moments") {
    Rng r(13);
    double sum = 0.0, sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        sum += x;
        sq += x * x;
    }
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(std::abs(sq / n - 1.0) < 0.03);
}

TEST_CASE("rng derived streams differ and are reproducible") {
    CHECK(Rng::derive_seed(1, 2, 3, 4) == Rng::derive_seed(1, 2, 3, 4));
    CHECK(Rng::derive_seed(1, 2, 3, 4) != Rng::derive_seed(1, 2, 3, 5));
    CHECK(Rng::derive_seed(1, 2, 3, 4) != Rng::derive_seed(2, 2, 3, 4));
}

TEST_CASE("solve_spd solves a random SPD system") {
    Rng rng(31);
    const std::size_t n = 5;
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.uniform_range(-1.0, 1.0);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) a(i, j) += g(k, i) * g(k, j);
            if (i == j) a(i, j) += 0.5;
        }
    Matrix b(n, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < 2; ++j) b(i, j) = rng.uniform_range(-1.0, 1.0);

    Matrix x = solve_spd(a, b);
    for (std::size_t col = 0; col < 2; ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double ax = 0.0;
            for (std::size_t k = 0; k < n; ++k) ax += a(i, k) * x(k, col);
            CHECK(std::abs(ax - b(i, col)) <= 1e-10);
        }
    }
}

TEST_CASE("solve_spd rejects singular input") {
    Matrix a(2, 2, 1.0);  // rank 1
    Matrix b(2, 1, 1.0);
    CHECK_THROWS_AS(solve_spd(a, b), NumericError);
}
