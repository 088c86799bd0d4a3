#include "snf/loss.hpp"

#include "snf/errors.hpp"
#include "snf/matrix.hpp"

namespace snf {

static void check_shapes(const Matrix& pred, const Matrix& target) {
    if (!pred.same_shape(target)) throw ShapeError("loss: prediction/target shape mismatch");
}

double loss_full(const Matrix& pred, const Matrix& target) {
    check_shapes(pred, target);
    const int n = pred.rows(), c = pred.cols();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* p = pred.row(i);
        const double* t = target.row(i);
        for (int j = 0; j < c; ++j) {
            const double d = p[j] - t[j];
            sum += d * d;
        }
    }
    return sum / double(n);
}

double loss_masked(const Matrix& pred, const Matrix& target, const RegionMask& mask) {
    check_shapes(pred, target);
    if (mask.size() != size_t(pred.rows())) throw ShapeError("loss: mask length != sample count");
    const int n = pred.rows(), c = pred.cols();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* p = pred.row(i);
        const double* t = target.row(i);
        const bool in = mask.contains(i);
        for (int j = 0; j < c; ++j) {
            const double d = in ? p[j] - t[j] : p[j];
            sum += d * d;
        }
    }
    return sum / double(n);
}

double loss_value(const Matrix& pred, const Matrix& target, const LossSpec& spec) {
    if (spec.kind == LossSpec::Kind::full_mse) return loss_full(pred, target);
    if (!spec.mask) throw ArgumentError("masked loss requires a mask");
    return loss_masked(pred, target, *spec.mask);
}

Matrix loss_gradient(const Matrix& pred, const Matrix& target, const LossSpec& spec) {
    check_shapes(pred, target);
    const bool masked = spec.kind == LossSpec::Kind::masked_mse;
    if (masked && (!spec.mask || spec.mask->size() != size_t(pred.rows())))
        throw ShapeError("loss: mask length != sample count");
    const int n = pred.rows(), c = pred.cols();
    const double scale = 2.0 / double(n);
    Matrix g(n, c);
    for (int i = 0; i < n; ++i) {
        const double* p = pred.row(i);
        const double* t = target.row(i);
        double* gi = g.row(i);
        const bool in = !masked || spec.mask->contains(i);
        for (int j = 0; j < c; ++j) gi[j] = scale * (in ? p[j] - t[j] : p[j]);
    }
    return g;
}

}  // namespace snf
