#include "hnnso/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hnnso/error.hpp"

namespace hnnso {

namespace {

std::string dims(std::size_t r, std::size_t c) {
    return std::to_string(r) + "x" + std::to_string(c);
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::uint64_t Rng::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_range(double lo, double hi) {
    if (!(lo < hi)) {
        throw ValidationError("uniform_range: lo (" + std::to_string(lo) +
                              ") must be < hi (" + std::to_string(hi) + ")");
    }
    return lo + (hi - lo) * uniform();
}

double Rng::normal(double mean, double sigma) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    return mean + sigma * z;
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                               std::uint64_t c) {
    std::uint64_t s = mix64(seed);
    s = mix64(s ^ mix64(a));
    s = mix64(s ^ mix64(b));
    s = mix64(s ^ mix64(c));
    return s;
}

Vector matvec(const Matrix& m, const Vector& v) {
    if (m.cols() != v.size()) {
        throw ShapeError("matvec: matrix is " + dims(m.rows(), m.cols()) +
                         " but vector has length " + std::to_string(v.size()));
    }
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* row = m.data() + i * m.cols();
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

Vector matvec_t(const Matrix& m, const Vector& v) {
    if (m.rows() != v.size()) {
        throw ShapeError("matvec_t: matrix is " + dims(m.rows(), m.cols()) +
                         " but vector has length " + std::to_string(v.size()));
    }
    Vector out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double vi = v[i];
        const double* row = m.data() + i * m.cols();
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += vi * row[j];
    }
    return out;
}

Vector bilinear_slices(const Tensor3& t, const Vector& u, const Vector& v) {
    if (t.d1() != u.size() || t.d2() != v.size()) {
        throw ShapeError("bilinear_slices: tensor slices are " + dims(t.d1(), t.d2()) +
                         " but vectors have lengths " + std::to_string(u.size()) + ", " +
                         std::to_string(v.size()));
    }
    Vector out(t.d3(), 0.0);
    const std::size_t d1 = t.d1(), d2 = t.d2();
    for (std::size_t k = 0; k < t.d3(); ++k) {
        const double* s = t.slice(k).data();
        double acc = 0.0;
        for (std::size_t i = 0; i < d1; ++i) {
            const double* row = s + i * d2;
            double rowacc = 0.0;
            for (std::size_t j = 0; j < d2; ++j) rowacc += row[j] * v[j];
            acc += u[i] * rowacc;
        }
        out[k] = acc;
    }
    return out;
}

Vector contract_13(const Tensor3& t, const Vector& u, const Vector& h) {
    if (t.d1() != u.size() || t.d3() != h.size()) {
        throw ShapeError("contract_13: tensor is " + dims(t.d1(), t.d2()) + "x" +
                         std::to_string(t.d3()) + " but vectors have lengths " +
                         std::to_string(u.size()) + ", " + std::to_string(h.size()));
    }
    Vector out(t.d2(), 0.0);
    const std::size_t d1 = t.d1(), d2 = t.d2();
    for (std::size_t k = 0; k < t.d3(); ++k) {
        const double hk = h[k];
        const double* s = t.slice(k).data();
        for (std::size_t i = 0; i < d1; ++i) {
            const double w = u[i] * hk;
            const double* row = s + i * d2;
            for (std::size_t j = 0; j < d2; ++j) out[j] += w * row[j];
        }
    }
    return out;
}

Vector tanh_vec(const Vector& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::tanh(v[i]);
    return out;
}

SymmetricEigen jacobi_eigensym(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ValidationError("jacobi_eigensym: matrix is " + dims(m.rows(), m.cols()) +
                              ", expected square");
    }
    const std::size_t n = m.rows();
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) max_abs = std::max(max_abs, std::abs(m.data()[i]));
    const double sym_tol = 1e-12 * std::max(1.0, max_abs);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > sym_tol) {
                throw ValidationError("jacobi_eigensym: matrix not symmetric at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }

    Matrix a = m;
    Matrix v = Matrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };

    const double tol = 1e-14 * std::max(1.0, max_abs) * n;
    bool converged = (n < 2) || off_norm() <= tol;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= tol / (n * n)) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double sign = theta >= 0.0 ? 1.0 : -1.0;
                const double tau =
                    sign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tau * tau + 1.0);
                const double s = tau * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
        converged = off_norm() <= tol;
    }
    if (!converged) {
        throw NumericError("jacobi_eigensym: no convergence in 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    SymmetricEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t col = 0; col < n; ++col) {
        const std::size_t src = order[col];
        out.eigenvalues[col] = a(src, src);
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(v(i, src)) > best) {
                best = std::abs(v(i, src));
                arg = i;
            }
        }
        const double flip = v(arg, src) < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, col) = flip * v(i, src);
    }
    return out;
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols()) {
        throw ValidationError("solve_spd: matrix is " + dims(a.rows(), a.cols()) +
                              ", expected square");
    }
    if (a.rows() != b.rows()) {
        throw ShapeError("solve_spd: lhs is " + dims(a.rows(), a.cols()) + " but rhs is " +
                         dims(b.rows(), b.cols()));
    }
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s)) {
                    throw NumericError("solve_spd: matrix not positive definite at pivot " +
                                       std::to_string(i));
                }
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    // L y = b, then L^T x = y, one rhs column at a time
    Matrix x(b.rows(), b.cols());
    Vector y(n);
    for (std::size_t col = 0; col < b.cols(); ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = b(i, col);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
            y[i] = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = y[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x(k, col);
            x(ii, col) = s / l(ii, ii);
        }
    }
    return x;
}

}  // namespace hnnso
