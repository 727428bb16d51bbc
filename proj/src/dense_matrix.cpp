#include "spinchaos/dense_matrix.hpp"

#include <cblas.h>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "spinchaos/error.hpp"
#include "spinchaos/kernels.hpp"

namespace spinchaos {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

std::vector<double> DenseMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b, bool transpose_a, bool transpose_b) {
    const std::size_t m = transpose_a ? a.cols() : a.rows();
    const std::size_t k = transpose_a ? a.rows() : a.cols();
    const std::size_t kb = transpose_b ? b.cols() : b.rows();
    const std::size_t n = transpose_b ? b.rows() : b.cols();
    if (k != kb) throw DomainError("multiply: inner dimensions differ");
    DenseMatrix c(m, n);
    if (m == 0 || n == 0 || k == 0) return c;
    cblas_dgemm(CblasRowMajor, transpose_a ? CblasTrans : CblasNoTrans,
                transpose_b ? CblasTrans : CblasNoTrans, static_cast<int>(m), static_cast<int>(n),
                static_cast<int>(k), 1.0, a.data(), static_cast<int>(a.cols()), b.data(),
                static_cast<int>(b.cols()), 0.0, c.data(), static_cast<int>(n));
    return c;
}

void RealSymmetricMatrix::Builder::set(std::size_t r, std::size_t c, double value) {
    m_(r, c) = value;
    m_(c, r) = value;
}

RealSymmetricMatrix RealSymmetricMatrix::Builder::build() && {
    return RealSymmetricMatrix(std::move(m_));
}

RealSymmetricMatrix RealSymmetricMatrix::from_dense(DenseMatrix m) {
    if (m.rows() != m.cols()) throw DomainError("symmetric matrix must be square");
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = r + 1; c < m.cols(); ++c)
            if (m(r, c) != m(c, r)) throw DomainError("matrix is not exactly symmetric");
    return RealSymmetricMatrix(std::move(m));
}

RealSymmetricMatrix RealSymmetricMatrix::symmetrized(const DenseMatrix& m) {
    if (m.rows() != m.cols()) throw DomainError("symmetric matrix must be square");
    DenseMatrix s(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        s(r, r) = m(r, r);
        for (std::size_t c = r + 1; c < m.cols(); ++c) {
            const double v = 0.5 * (m(r, c) + m(c, r));
            s(r, c) = v;
            s(c, r) = v;
        }
    }
    return RealSymmetricMatrix(std::move(s));
}

RealSymmetricMatrix RealSymmetricMatrix::diagonal(std::span<const double> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return RealSymmetricMatrix(std::move(m));
}

std::vector<double> RealSymmetricMatrix::diagonal_values() const {
    std::vector<double> d(order());
    for (std::size_t i = 0; i < order(); ++i) d[i] = m_(i, i);
    return d;
}

double RealSymmetricMatrix::trace() const {
    double t = 0.0;
    for (std::size_t i = 0; i < order(); ++i) t += m_(i, i);
    return t;
}

double RealSymmetricMatrix::max_abs() const { return kernels::active().abs_max(m_.values()); }

double RealSymmetricMatrix::asymmetry() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < order(); ++r)
        for (std::size_t c = r + 1; c < order(); ++c)
            worst = std::max(worst, std::abs(m_(r, c) - m_(c, r)));
    return worst;
}

bool RealSymmetricMatrix::all_finite() const {
    for (double v : m_.values())
        if (!std::isfinite(v)) return false;
    return true;
}

std::vector<Triplet> RealSymmetricMatrix::triplets(double threshold) const {
    std::vector<Triplet> out;
    for (std::size_t r = 0; r < order(); ++r)
        for (std::size_t c = 0; c < order(); ++c)
            if (std::abs(m_(r, c)) > threshold) out.push_back({r, c, m_(r, c)});
    return out;
}

RealSymmetricMatrix RealSymmetricMatrix::plus_scaled(const RealSymmetricMatrix& other, double alpha) const {
    if (other.order() != order()) throw std::logic_error("plus_scaled: operator orders differ");
    DenseMatrix out = m_;
    // Elementwise a + alpha*b keeps exact symmetry: both triangles see
    // identical operands.
    kernels::active().scaled_add({out.data(), order() * order()}, other.m_.values(), alpha);
    return RealSymmetricMatrix(std::move(out));
}

namespace {

constexpr std::array<char, 8> kMagic{'S', 'H', 'S', 'P', 'E', 'C', '0', '1'};

void put_le64(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_le64(std::istream& in) {
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), 8);
    if (!in) throw DomainError("matrix dump truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

void write_matrix_dump(std::ostream& out, const RealSymmetricMatrix& h) {
    out.write(kMagic.data(), kMagic.size());
    const std::size_t n = h.order();
    put_le64(out, n);
    for (double v : h.dense().values()) put_le64(out, std::bit_cast<std::uint64_t>(v));
}

void write_matrix_dump(const std::string& path, const RealSymmetricMatrix& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    write_matrix_dump(out, h);
}

RealSymmetricMatrix read_matrix_dump(std::istream& in) {
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw DomainError("not a SHSPEC01 matrix dump");
    const std::uint64_t n = get_le64(in);
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n * n; ++i) m.data()[i] = std::bit_cast<double>(get_le64(in));
    return RealSymmetricMatrix::from_dense(std::move(m));
}

RealSymmetricMatrix read_matrix_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + path);
    return read_matrix_dump(in);
}

}  // namespace spinchaos
