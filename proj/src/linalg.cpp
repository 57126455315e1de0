#include "igo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <type_traits>

namespace igo {
namespace {

template <typename T>
constexpr bool is_complex_v = !std::is_same_v<T, double>;

template <typename T>
T conj_of(const T& x) {
    if constexpr (is_complex_v<T>) {
        return std::conj(x);
    } else {
        return x;
    }
}

template <typename T>
double real_of(const T& x) {
    if constexpr (is_complex_v<T>) {
        return x.real();
    } else {
        return x;
    }
}

std::string shape(std::size_t r, std::size_t c) {
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

}  // namespace

template <typename T>
Matrix<T>::Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("matrix data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape(rows_, cols_));
    }
}

template <typename T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
}

template <typename T>
std::vector<T> Matrix<T>::column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

template <typename T>
void Matrix<T>::set_column(std::size_t c, std::span<const T> values) {
    if (values.size() != rows_) {
        throw DimensionError("column length " + std::to_string(values.size()) +
                             " does not match matrix rows " + std::to_string(rows_));
    }
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

template <typename T>
Matrix<T> adjoint(const Matrix<T>& a) {
    Matrix<T> out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = conj_of(a(r, c));
    return out;
}

template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("cannot multiply " + shape(a.rows(), a.cols()) + " by " +
                             shape(b.rows(), b.cols()));
    }
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto dst = out.row(r);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const T lhs = a(r, i);
            auto src = b.row(i);
            for (std::size_t c = 0; c < b.cols(); ++c) dst[c] += lhs * src[c];
        }
    }
    return out;
}

template <typename T>
double max_abs(const Matrix<T>& a) {
    double m = 0.0;
    for (const auto& x : a.data()) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
}

template <typename T>
double frobenius_norm(const Matrix<T>& a) {
    double s = 0.0;
    for (const auto& x : a.data()) s += std::norm(x);
    return std::sqrt(s);
}

template <typename T>
double max_abs_difference(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("shape mismatch " + shape(a.rows(), a.cols()) + " vs " +
                             shape(b.rows(), b.cols()));
    }
    double m = 0.0;
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i)
        m = std::max(m, static_cast<double>(std::abs(da[i] - db[i])));
    return m;
}

template <typename T>
Matrix<T> gram(const Matrix<T>& z, Execution mode) {
    const std::size_t n = z.cols();
    Matrix<T> t(n, n);
    // Row i of the upper triangle is owned by one worker; every entry is a
    // sum over rows of z in increasing order.
    parallel_for(n, mode, [&](std::size_t i) {
        auto acc = t.row(i);
        for (std::size_t r = 0; r < z.rows(); ++r) {
            auto zr = z.row(r);
            const T lhs = conj_of(zr[i]);
            for (std::size_t j = i; j < n; ++j) acc[j] += lhs * zr[j];
        }
        acc[i] = T{real_of(acc[i])};
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) t(j, i) = conj_of(t(i, j));
    return t;
}

template <typename T>
void canonicalize_columns(Matrix<T>& m) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
        std::size_t best = 0;
        double best_mag = -1.0;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            const double mag = std::abs(m(r, c));
            if (mag > best_mag) {
                best_mag = mag;
                best = r;
            }
        }
        if (best_mag <= 0.0) continue;
        const T phase = conj_of(m(best, c)) / best_mag;
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) *= phase;
        m(best, c) = T{best_mag};
    }
}

template <typename T>
EigenDecomposition<T> hermitian_eig(const Matrix<T>& m, double tol) {
    if (m.rows() != m.cols()) {
        throw DimensionError("hermitian_eig needs a square matrix, got " +
                             shape(m.rows(), m.cols()));
    }
    const std::size_t n = m.rows();
    const double scale = max_abs(m);
    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            asym = std::max(asym, static_cast<double>(std::abs(m(i, j) - conj_of(m(j, i)))));
    if (asym > 1e-9 * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian: max |M - M^H| = " << asym << " exceeds 1e-9 * "
           << scale;
        throw SymmetryError(os.str());
    }

    // Work on the exactly Hermitian part.
    Matrix<T> w(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        w(i, i) = T{real_of(m(i, i))};
        for (std::size_t j = i + 1; j < n; ++j) {
            w(i, j) = (m(i, j) + conj_of(m(j, i))) * 0.5;
            w(j, i) = conj_of(w(i, j));
        }
    }
    Matrix<T> v = Matrix<T>::identity(n);
    const double threshold = tol * frobenius_norm(w);

    auto off_diagonal = [&] {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                off = std::max(off, static_cast<double>(std::abs(w(i, j))));
        return off;
    };

    int sweep = 0;
    while (off_diagonal() > threshold) {
        if (sweep == kMaxJacobiSweeps) {
            throw ConvergenceError("Jacobi eigensolver did not converge in " +
                                   std::to_string(kMaxJacobiSweeps) + " sweeps (n = " +
                                   std::to_string(n) + ")");
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T c = w(p, q);
                const double mag = std::abs(c);
                if (mag == 0.0) continue;
                const double a = real_of(w(p, p));
                const double b = real_of(w(q, q));
                // Phase e makes the (p, q) entry real; then a real Jacobi rotation.
                const T e_conj = conj_of(c) / mag;
                const double theta = (b - a) / (2.0 * mag);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                const T g_pp{cs};
                const T g_pq{sn};
                const T g_qp = e_conj * (-sn);
                const T g_qq = e_conj * cs;

                for (std::size_t r = 0; r < n; ++r) {
                    const T wp = w(r, p);
                    const T wq = w(r, q);
                    w(r, p) = wp * g_pp + wq * g_qp;
                    w(r, q) = wp * g_pq + wq * g_qq;
                }
                for (std::size_t col = 0; col < n; ++col) {
                    const T wp = w(p, col);
                    const T wq = w(q, col);
                    w(p, col) = conj_of(g_pp) * wp + conj_of(g_qp) * wq;
                    w(q, col) = conj_of(g_pq) * wp + conj_of(g_qq) * wq;
                }
                w(p, q) = T{};
                w(q, p) = T{};
                w(p, p) = T{a - t * mag};
                w(q, q) = T{b + t * mag};
                for (std::size_t r = 0; r < n; ++r) {
                    const T vp = v(r, p);
                    const T vq = v(r, q);
                    v(r, p) = vp * g_pp + vq * g_qp;
                    v(r, q) = vp * g_pq + vq * g_qq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return real_of(w(x, x)) > real_of(w(y, y));
    });

    EigenDecomposition<T> out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix<T>(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = real_of(w(order[k], order[k]));
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    canonicalize_columns(out.eigenvectors);
    return out;
}

std::size_t numerical_rank(std::span<const double> eigenvalues, std::size_t n) {
    if (eigenvalues.empty()) return 0;
    const double lambda_max = *std::max_element(eigenvalues.begin(), eigenvalues.end());
    if (!(lambda_max > 0.0)) return 0;
    const double cutoff =
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * lambda_max;
    return static_cast<std::size_t>(std::count_if(
        eigenvalues.begin(), eigenvalues.end(), [&](double l) { return l > cutoff; }));
}

template <typename T>
PrincipalSubspace<T> snapshot_pca(const Matrix<T>& z, std::size_t k, Execution mode) {
    if (z.empty()) throw DimensionError("snapshot_pca needs a non-empty data matrix");
    const auto eig = hermitian_eig(gram(z, mode));
    const std::size_t rank = numerical_rank(eig.eigenvalues, z.cols());
    if (k == 0 || k > rank) {
        throw RankError("requested " + std::to_string(k) +
                            " components but the numerical rank is " + std::to_string(rank),
                        rank);
    }

    const std::size_t n = z.cols();
    std::vector<double> inv_sqrt(k);
    for (std::size_t j = 0; j < k; ++j) inv_sqrt[j] = 1.0 / std::sqrt(eig.eigenvalues[j]);

    PrincipalSubspace<T> out;
    out.eigenvalues.assign(eig.eigenvalues.begin(), eig.eigenvalues.begin() + k);
    out.basis = Matrix<T>(z.rows(), k);
    parallel_for(z.rows(), mode, [&](std::size_t r) {
        auto src = z.row(r);
        auto dst = out.basis.row(r);
        for (std::size_t j = 0; j < k; ++j) {
            T acc{};
            for (std::size_t i = 0; i < n; ++i) acc += src[i] * eig.eigenvectors(i, j);
            dst[j] = acc * inv_sqrt[j];
        }
    });
    canonicalize_columns(out.basis);
    return out;
}

template <typename T>
std::vector<double> gram_spectrum(const Matrix<T>& z, Execution mode) {
    return hermitian_eig(gram(z, mode)).eigenvalues;
}

#define IGO_INSTANTIATE(T)                                                                  \
    template class Matrix<T>;                                                               \
    template Matrix<T> adjoint(const Matrix<T>&);                                           \
    template Matrix<T> multiply(const Matrix<T>&, const Matrix<T>&);                        \
    template double max_abs(const Matrix<T>&);                                              \
    template double frobenius_norm(const Matrix<T>&);                                       \
    template double max_abs_difference(const Matrix<T>&, const Matrix<T>&);                 \
    template Matrix<T> gram(const Matrix<T>&, Execution);                                   \
    template void canonicalize_columns(Matrix<T>&);                                         \
    template EigenDecomposition<T> hermitian_eig(const Matrix<T>&, double);                 \
    template PrincipalSubspace<T> snapshot_pca(const Matrix<T>&, std::size_t, Execution);   \
    template std::vector<double> gram_spectrum(const Matrix<T>&, Execution);

IGO_INSTANTIATE(double)
IGO_INSTANTIATE(Complex)

#undef IGO_INSTANTIATE

}  // namespace igo
