#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hnnso {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit floats.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Vector row_vec(std::size_t i) const { return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Dense third-order tensor. Stored slice-major: slice k is a d1 x d2
/// row-major block, so (i, j, k) lives at data[(k*d1 + i)*d2 + j].
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(std::size_t d1, std::size_t d2, std::size_t d3, double fill = 0.0)
        : d1_(d1), d2_(d2), d3_(d3), data_(d1 * d2 * d3, fill) {}

    std::size_t d1() const { return d1_; }
    std::size_t d2() const { return d2_; }
    std::size_t d3() const { return d3_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(k * d1_ + i) * d2_ + j];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(k * d1_ + i) * d2_ + j];
    }

    std::span<double> slice(std::size_t k) { return {data_.data() + k * d1_ * d2_, d1_ * d2_}; }
    std::span<const double> slice(std::size_t k) const { return {data_.data() + k * d1_ * d2_, d1_ * d2_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool operator==(const Tensor3&) const = default;

private:
    std::size_t d1_ = 0, d2_ = 0, d3_ = 0;
    std::vector<double> data_;
};

/// Deterministic 64-bit PRNG (splitmix64). Identical seeds give identical
/// streams on every platform, which is what makes corruption masks and
/// parameter draws reproducible across runs and checkpoints.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform draw in [0, 1).
    double uniform();

    /// Uniform draw in [lo, hi); lo must be < hi.
    double uniform_range(double lo, double hi);

    /// Standard normal deviate via Box-Muller on the uniform stream.
    /// Consumes exactly two uniform draws per call.
    double normal(double mean = 0.0, double sigma = 1.0);

    /// Mixes (seed, a, b, c) into a fresh seed. Used to give every
    /// (stage, epoch, example) and every fold its own private stream.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                     std::uint64_t b = 0, std::uint64_t c = 0);
    static Rng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
        return Rng(derive_seed(seed, a, b, c));
    }

private:
    std::uint64_t state_;
};

/// out[i] = sum_j m(i,j) * v[j]
Vector matvec(const Matrix& m, const Vector& v);

/// out[j] = sum_i m(i,j) * v[i]  (transposed product, used by backward passes)
Vector matvec_t(const Matrix& m, const Vector& v);

/// out[k] = sum_{i,j} u[i] * t(i,j,k) * v[j]
Vector bilinear_slices(const Tensor3& t, const Vector& u, const Vector& v);

/// out[j] = sum_{i,k} u[i] * t(i,j,k) * h[k]  (contraction over modes 1 and 3)
Vector contract_13(const Tensor3& t, const Vector& u, const Vector& h);

/// Elementwise tanh.
Vector tanh_vec(const Vector& v);

struct SymmetricEigen {
    Vector eigenvalues;   // descending
    Matrix eigenvectors;  // orthonormal columns, column i pairs with eigenvalues[i]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Each
/// eigenvector's largest-magnitude entry is made non-negative so the
/// decomposition is stable across runs.
SymmetricEigen jacobi_eigensym(const Matrix& m);

/// Solves a * x = b for symmetric positive-definite a via Cholesky.
/// Throws NumericError if a is not positive definite.
Matrix solve_spd(const Matrix& a, const Matrix& b);

}  // namespace hnnso
