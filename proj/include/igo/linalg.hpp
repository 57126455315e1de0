#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "igo/error.hpp"
#include "igo/parallel.hpp"

namespace igo {

using Complex = std::complex<double>;

/// Dense matrix, row-major storage. T is double or std::complex<double>.
template <typename T>
class Matrix {
public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    /// Takes ownership of row-major `data`; throws DimensionError if the
    /// length does not equal rows*cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<T> column(std::size_t c) const;
    void set_column(std::size_t c, std::span<const T> values);

    std::span<const T> data() const noexcept { return data_; }
    std::span<T> data() noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using ComplexMatrix = Matrix<Complex>;
using RealMatrix = Matrix<double>;

/// Eigenpairs of a Hermitian matrix. Eigenvalues are non-increasing and the
/// i-th eigenvector is column i of `eigenvectors`.
template <typename T>
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix<T> eigenvectors;
};

/// Leading eigenvectors of the outer-product matrix Z Z^H together with their
/// eigenvalues, computed from the small Gram matrix Z^H Z.
template <typename T>
struct PrincipalSubspace {
    Matrix<T> basis;  // p x k, orthonormal columns
    std::vector<double> eigenvalues;  // k, descending

    std::size_t dimension() const noexcept { return basis.rows(); }
    std::size_t components() const noexcept { return basis.cols(); }
};

inline constexpr double kDefaultEigTolerance = 1e-14;
inline constexpr int kMaxJacobiSweeps = 30;

template <typename T>
Matrix<T> adjoint(const Matrix<T>& a);

/// Naive product; the reference implementation used everywhere in the library.
template <typename T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b);

template <typename T>
double max_abs(const Matrix<T>& a);

template <typename T>
double frobenius_norm(const Matrix<T>& a);

/// max |a - b| entry-wise. Throws DimensionError on shape mismatch.
template <typename T>
double max_abs_difference(const Matrix<T>& a, const Matrix<T>& b);

/// Z^H Z. Every output entry sums over rows in increasing order regardless of
/// `mode`, so serial and parallel results are bit-identical.
template <typename T>
Matrix<T> gram(const Matrix<T>& z, Execution mode = Execution::serial);

/// All eigenpairs of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Iterates full sweeps until the largest off-diagonal magnitude is at most
/// `tol * ||M||_F`. Eigenvalues are sorted non-increasing (ties keep Jacobi
/// output order) and every eigenvector is rescaled by a unit-modulus phase so
/// that its largest-magnitude entry is real and positive.
///
/// Throws DimensionError for non-square input, SymmetryError when
/// ||M - M^H||_max > 1e-9 ||M||_max and ConvergenceError after
/// kMaxJacobiSweeps sweeps.
template <typename T>
EigenDecomposition<T> hermitian_eig(const Matrix<T>& m, double tol = kDefaultEigTolerance);

/// Number of eigenvalues above the cutoff n * eps * lambda_max.
std::size_t numerical_rank(std::span<const double> eigenvalues_descending, std::size_t n);

/// Rescales each column by a unit-modulus phase so that its largest-magnitude
/// entry (first one on ties) is real and non-negative.
template <typename T>
void canonicalize_columns(Matrix<T>& m);

/// Snapshot-method PCA: B_k = Z U_k Lambda_k^{-1/2} from the eigenpairs of
/// Z^H Z. Throws RankError when k is zero or exceeds the numerical rank.
template <typename T>
PrincipalSubspace<T> snapshot_pca(const Matrix<T>& z, std::size_t k,
                                  Execution mode = Execution::serial);

/// Full eigenvalue spectrum of Z^H Z, descending.
template <typename T>
std::vector<double> gram_spectrum(const Matrix<T>& z, Execution mode = Execution::serial);

}  // namespace igo
