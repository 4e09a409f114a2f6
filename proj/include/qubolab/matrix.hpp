#ifndef QUBOLAB_MATRIX_HPP
#define QUBOLAB_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace qubolab {

/// Row-major dense matrix of 64-bit floats. The only tensor type in the
/// numerical kernel; vectors are n x 1 or 1 x n matrices.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols);  // zero-filled

    static DenseMatrix filled(int rows, int cols, double value);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    void fill(double value);
    bool all_finite() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

// Plain (non-tape) kernels shared by the forward ops and value-only paths.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
void add_in_place(DenseMatrix& into, const DenseMatrix& from);
void add_scaled_in_place(DenseMatrix& into, const DenseMatrix& from, double scale);

}  // namespace qubolab

#endif
