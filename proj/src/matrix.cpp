#include "snf/matrix.hpp"

namespace snf {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("matmul: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    add_matmul(c, a, b);
    return c;
}

void add_matmul(Matrix& c, const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ShapeError("add_matmul: inner dimensions differ");
    if (c.rows() != a.rows() || c.cols() != b.cols()) throw ShapeError("add_matmul: output shape mismatch");
    const int n = a.rows(), k = a.cols(), m = b.cols();
    for (int i = 0; i < n; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (int p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b.row(p);
            for (int j = 0; j < m; ++j) ci[j] += aip * bp[j];
        }
    }
}

void add_matmul_tn(Matrix& c, const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw ShapeError("add_matmul_tn: row counts differ");
    if (c.rows() != a.cols() || c.cols() != b.cols()) throw ShapeError("add_matmul_tn: output shape mismatch");
    const int n = a.rows(), k = a.cols(), m = b.cols();
    for (int p = 0; p < n; ++p) {
        const double* ap = a.row(p);
        const double* bp = b.row(p);
        for (int i = 0; i < k; ++i) {
            const double api = ap[i];
            double* ci = c.row(i);
            for (int j = 0; j < m; ++j) ci[j] += api * bp[j];
        }
    }
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

}  // namespace snf
