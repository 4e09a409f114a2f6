#include "qubolab/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace qubolab {

DenseMatrix::DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("matrix dims must be positive");
    data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

DenseMatrix DenseMatrix::filled(int rows, int cols, double value) {
    DenseMatrix m(rows, cols);
    m.fill(value);
    return m;
}

void DenseMatrix::fill(double value) {
    for (auto& x : data_) x = value;
}

bool DenseMatrix::all_finite() const {
    for (double x : data_)
        if (!std::isfinite(x)) return false;
    return true;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    DenseMatrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a.at(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.data() + static_cast<std::size_t>(k) * b.cols();
            double* orow = out.data() + static_cast<std::size_t>(i) * out.cols();
            for (int j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("matmul_nt: shape mismatch");
    DenseMatrix out(a.rows(), b.rows());
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.data() + static_cast<std::size_t>(i) * a.cols();
        for (int j = 0; j < b.rows(); ++j) {
            const double* brow = b.data() + static_cast<std::size_t>(j) * b.cols();
            double acc = 0.0;
            for (int k = 0; k < a.cols(); ++k) acc += arow[k] * brow[k];
            out.at(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("matmul_tn: shape mismatch");
    DenseMatrix out(a.cols(), b.cols());
    for (int k = 0; k < a.rows(); ++k) {
        const double* arow = a.data() + static_cast<std::size_t>(k) * a.cols();
        const double* brow = b.data() + static_cast<std::size_t>(k) * b.cols();
        for (int i = 0; i < a.cols(); ++i) {
            double aki = arow[i];
            if (aki == 0.0) continue;
            double* orow = out.data() + static_cast<std::size_t>(i) * out.cols();
            for (int j = 0; j < b.cols(); ++j) orow[j] += aki * brow[j];
        }
    }
    return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("add: shape mismatch");
    DenseMatrix out = a;
    add_in_place(out, b);
    return out;
}

void add_in_place(DenseMatrix& into, const DenseMatrix& from) {
    if (!into.same_shape(from)) throw std::invalid_argument("add_in_place: shape mismatch");
    double* d = into.data();
    const double* s = from.data();
    for (std::size_t i = 0; i < into.size(); ++i) d[i] += s[i];
}

void add_scaled_in_place(DenseMatrix& into, const DenseMatrix& from, double scale) {
    if (!into.same_shape(from)) throw std::invalid_argument("add_scaled_in_place: shape mismatch");
    double* d = into.data();
    const double* s = from.data();
    for (std::size_t i = 0; i < into.size(); ++i) d[i] += scale * s[i];
}

}  // namespace qubolab
