#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace spinchaos {

/// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column(std::size_t c) const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }

    DenseMatrix transposed() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// C = op(A) * op(B) via BLAS dgemm.
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, bool transpose_a = false,
                     bool transpose_b = false);

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Dense real symmetric matrix. Only the builder and the linear-combination
/// helpers can produce one, and both write (n,m) and (m,n) together, so
/// exact symmetry holds by construction.
class RealSymmetricMatrix {
public:
    class Builder {
    public:
        explicit Builder(std::size_t order) : m_(order, order) {}
        /// Sets H[r][c] and H[c][r] to `value`.
        void set(std::size_t r, std::size_t c, double value);
        void add_diagonal(std::size_t r, double value) { m_(r, r) += value; }
        RealSymmetricMatrix build() &&;

    private:
        DenseMatrix m_;
    };

    RealSymmetricMatrix() = default;

    /// Takes ownership of a square matrix that must already be exactly
    /// symmetric; throws DomainError otherwise.
    static RealSymmetricMatrix from_dense(DenseMatrix m);
    /// Averages m with its transpose. Only for matrices produced by
    /// floating-point similarity transforms, never for assembled operators.
    static RealSymmetricMatrix symmetrized(const DenseMatrix& m);
    static RealSymmetricMatrix diagonal(std::span<const double> d);

    std::size_t order() const { return m_.rows(); }
    double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    std::span<const double> row(std::size_t r) const { return m_.row(r); }
    const DenseMatrix& dense() const { return m_; }

    std::vector<double> diagonal_values() const;
    double trace() const;
    double max_abs() const;
    /// max |H[n][m] - H[m][n]|.
    double asymmetry() const;
    bool all_finite() const;

    /// Read-only sparse view: entries with |value| > threshold.
    std::vector<Triplet> triplets(double threshold = 0.0) const;

    /// this + alpha * other.
    RealSymmetricMatrix plus_scaled(const RealSymmetricMatrix& other, double alpha) const;

    bool operator==(const RealSymmetricMatrix&) const = default;

private:
    explicit RealSymmetricMatrix(DenseMatrix m) : m_(std::move(m)) {}
    DenseMatrix m_;
};

/// Binary dump: magic "SHSPEC01", N as 8-byte little-endian unsigned, then
/// N*N little-endian doubles in row-major order.
void write_matrix_dump(std::ostream& out, const RealSymmetricMatrix& h);
void write_matrix_dump(const std::string& path, const RealSymmetricMatrix& h);
RealSymmetricMatrix read_matrix_dump(std::istream& in);
RealSymmetricMatrix read_matrix_dump(const std::string& path);

}  // namespace spinchaos
