#include "snf/net.hpp"

#include <cmath>
#include <string>

namespace snf {

void GradientSet::accumulate(const GradientSet& other) {
    for (const auto& [key, m] : other.blocks) {
        auto it = blocks.find(key);
        if (it == blocks.end()) {
            blocks.emplace(key, m);
        } else {
            if (!it->second.same_shape(m)) throw ShapeError("GradientSet: block shape mismatch");
            double* dst = it->second.data();
            const double* src = m.data();
            for (size_t i = 0; i < m.size(); ++i) dst[i] += src[i];
        }
    }
}

double siren_init_bound(int fan_in, bool first_layer) {
    if (fan_in < 1) throw ArgumentError("siren_init_bound: fan_in must be >= 1");
    return first_layer ? 1.0 / double(fan_in) : std::sqrt(6.0 / double(fan_in));
}

void fill_siren(Matrix& m, int fan_in, bool first_layer, Rng& rng) {
    const double b = siren_init_bound(fan_in, first_layer);
    double* d = m.data();
    for (size_t i = 0; i < m.size(); ++i) d[i] = rng.uniform(-b, b);
}

StreamableNet::StreamableNet(int in_dim, int out_dim, int depth, int first_width,
                             ActivationConfig activation, Rng& rng)
    : in_dim_(in_dim), out_dim_(out_dim), depth_(depth), activation_(activation) {
    if (in_dim < 1 || out_dim < 1 || depth < 1 || first_width < 1)
        throw ArgumentError("StreamableNet: all dimensions must be >= 1");
    if (!(activation.omega0 > 0)) throw ArgumentError("StreamableNet: omega0 must be > 0");
    hidden_weights_.resize(depth_ > 1 ? depth_ - 1 : 0);
    biases_.resize(depth_);
    append_stage_storage(first_width);
    // Stage 1 is fully sine-initialized; biases stay at zero. Draw order:
    // layer 0 weights, hidden layers in depth order, then the output block.
    fill_siren(first_weights_[0], in_dim_, true, rng);
    for (int l = 1; l < depth_; ++l) fill_siren(hidden_weights_[l - 1][0][0], first_width, false, rng);
    fill_siren(output_weights_[0], first_width, false, rng);
}

StreamableNet StreamableNet::empty_shell(int in_dim, int out_dim, int depth, ActivationConfig act) {
    if (in_dim < 1 || out_dim < 1 || depth < 1)
        throw ArgumentError("StreamableNet: all dimensions must be >= 1");
    StreamableNet net;
    net.in_dim_ = in_dim;
    net.out_dim_ = out_dim;
    net.depth_ = depth;
    net.activation_ = act;
    net.hidden_weights_.resize(depth > 1 ? depth - 1 : 0);
    net.biases_.resize(depth);
    return net;
}

void StreamableNet::append_stage_storage(int new_width) {
    const int prev = stage_widths_.empty() ? 0 : stage_widths_.back();
    if (new_width <= prev) throw ArgumentError("stage width must exceed the current width");
    const int d = new_width - prev;
    stage_widths_.push_back(new_width);
    const int s = num_stages();  // 1-based index of the new stage

    first_weights_.emplace_back(d, in_dim_);
    for (int l = 1; l < depth_; ++l) {
        auto& layer = hidden_weights_[l - 1];
        layer.emplace_back();
        auto& row = layer.back();
        for (int j = 1; j <= s; ++j) row.emplace_back(d, delta(j));
    }
    for (int l = 0; l < depth_; ++l) biases_[l].emplace_back(d, 1);
    output_weights_.emplace_back(out_dim_, d);
}

void StreamableNet::set_frozen_stages(int n) {
    if (n < 0 || n > num_stages()) throw ArgumentError("set_frozen_stages: out of range");
    frozen_stages_ = n;
}

void StreamableNet::grow(int new_width, Rng& rng, InitMode mode) {
    const int old_stages = num_stages();
    append_stage_storage(new_width);
    const int s = old_stages + 1;
    const bool siren_new = mode == InitMode::siren_new_blocks;

    // Draw order: layer 0 rows, then per hidden layer laterals in source
    // order followed by the new-to-new block, then the output block. Biases
    // are zero in both modes.
    fill_siren(first_weights_[s - 1], in_dim_, true, rng);
    for (int l = 1; l < depth_; ++l) {
        for (int j = 1; j < s; ++j) fill_siren(hidden_weights_[l - 1][s - 1][j - 1], new_width, false, rng);
        if (siren_new) fill_siren(hidden_weights_[l - 1][s - 1][s - 1], new_width, false, rng);
    }
    if (siren_new) fill_siren(output_weights_[s - 1], new_width, false, rng);

    frozen_stages_ = old_stages;
}

void StreamableNet::check_stage(int stage) const {
    if (stage < 1 || stage > num_stages())
        throw ArgumentError("stage " + std::to_string(stage) + " out of range 1.." +
                            std::to_string(num_stages()));
}

namespace {

Matrix broadcast_rows(const Matrix& col, int n) {
    Matrix m(n, col.rows());
    for (int i = 0; i < n; ++i) {
        double* r = m.row(i);
        for (int j = 0; j < col.rows(); ++j) r[j] = col(j, 0);
    }
    return m;
}

Matrix sine_of(const Matrix& pre, double scale) {
    Matrix a(pre.rows(), pre.cols());
    const double* p = pre.data();
    double* o = a.data();
    for (size_t i = 0; i < pre.size(); ++i) o[i] = std::sin(scale * p[i]);
    return a;
}

Matrix column_sums(const Matrix& m) {
    Matrix s(m.cols(), 1);
    for (int i = 0; i < m.rows(); ++i) {
        const double* r = m.row(i);
        for (int j = 0; j < m.cols(); ++j) s(j, 0) += r[j];
    }
    return s;
}

}  // namespace

ForwardTrace StreamableNet::forward_with_trace(const Matrix& coords, int stage) const {
    check_stage(stage);
    if (coords.cols() != in_dim_) throw ShapeError("forward: coords column count != in_dim");
    const int n = coords.rows();

    ForwardTrace t;
    t.pre.resize(depth_);
    t.act.resize(depth_);
    for (int l = 0; l < depth_; ++l) {
        t.pre[l].resize(stage);
        t.act[l].resize(stage);
    }

    for (int s = 1; s <= stage; ++s) {
        Matrix z = broadcast_rows(biases_[0][s - 1], n);
        add_matmul(z, coords, transpose(first_weights_[s - 1]));
        t.act[0][s - 1] = sine_of(z, activation_.omega0);
        t.pre[0][s - 1] = std::move(z);
    }
    for (int l = 1; l < depth_; ++l) {
        for (int s = 1; s <= stage; ++s) {
            Matrix z = broadcast_rows(biases_[l][s - 1], n);
            for (int j = 1; j <= s; ++j)
                add_matmul(z, t.act[l - 1][j - 1], transpose(hidden_weights_[l - 1][s - 1][j - 1]));
            t.act[l][s - 1] = sine_of(z, 1.0);
            t.pre[l][s - 1] = std::move(z);
        }
    }
    t.output = Matrix(n, out_dim_);
    for (int j = 1; j <= stage; ++j)
        add_matmul(t.output, t.act[depth_ - 1][j - 1], transpose(output_weights_[j - 1]));
    return t;
}

Matrix StreamableNet::forward(const Matrix& coords, int stage) const {
    return forward_with_trace(coords, stage).output;
}

Matrix StreamableNet::forward_residual(const Matrix& coords, int stage) const {
    if (stage < 2) throw ArgumentError("forward_residual: stage must be >= 2 (stage 1 has no residual)");
    check_stage(stage);
    ForwardTrace t = forward_with_trace(coords, stage);
    Matrix y(coords.rows(), out_dim_);
    add_matmul(y, t.act[depth_ - 1][stage - 1], transpose(output_weights_[stage - 1]));
    return y;
}

std::pair<double, GradientSet> StreamableNet::backward(const Matrix& coords, const Matrix& targets,
                                                       int stage, const LossSpec& loss) const {
    check_stage(stage);
    if (targets.rows() != coords.rows() || targets.cols() != out_dim_)
        throw ShapeError("backward: target shape mismatch");

    const ForwardTrace t = forward_with_trace(coords, stage);
    const double value = loss_value(t.output, targets, loss);
    const Matrix dy = loss_gradient(t.output, targets, loss);
    const int n = coords.rows();
    const int lo = std::min(frozen_stages_, stage);  // stages <= lo are constants

    GradientSet g;
    if (lo >= stage) return {value, g};

    // d(loss)/d(activation) per layer for the trainable stages only; frozen
    // stages never feed gradient back into anything trainable.
    std::vector<std::vector<Matrix>> dact(depth_);
    for (int l = 0; l < depth_; ++l) {
        dact[l].resize(stage);
        if (l < depth_ - 1)
            for (int s = lo + 1; s <= stage; ++s) dact[l][s - 1] = Matrix(n, delta(s));
    }
    for (int s = lo + 1; s <= stage; ++s) {
        Matrix go(out_dim_, delta(s));
        add_matmul_tn(go, dy, t.act[depth_ - 1][s - 1]);
        g.blocks.emplace(BlockKey{depth_, BlockKind::output, 0, s}, std::move(go));
        Matrix da(n, delta(s));
        add_matmul(da, dy, output_weights_[s - 1]);
        dact[depth_ - 1][s - 1] = std::move(da);
    }

    for (int l = depth_ - 1; l >= 0; --l) {
        const double scale = l == 0 ? activation_.omega0 : 1.0;
        for (int s = lo + 1; s <= stage; ++s) {
            // dz = dact * d/dz sin(scale * z)
            Matrix dz = std::move(dact[l][s - 1]);
            {
                double* d = dz.data();
                const double* p = t.pre[l][s - 1].data();
                for (size_t i = 0; i < dz.size(); ++i) d[i] *= scale * std::cos(scale * p[i]);
            }
            g.blocks.emplace(BlockKey{l, BlockKind::bias, s, 0}, column_sums(dz));
            if (l == 0) {
                Matrix gw(delta(s), in_dim_);
                add_matmul_tn(gw, dz, coords);
                g.blocks.emplace(BlockKey{0, BlockKind::weight, s, 0}, std::move(gw));
            } else {
                for (int j = 1; j <= s; ++j) {
                    Matrix gw(delta(s), delta(j));
                    add_matmul_tn(gw, dz, t.act[l - 1][j - 1]);
                    g.blocks.emplace(BlockKey{l, BlockKind::weight, s, j}, std::move(gw));
                    if (j > lo) add_matmul(dact[l - 1][j - 1], dz, hidden_weights_[l - 1][s - 1][j - 1]);
                }
            }
        }
    }
    return {value, g};
}

long StreamableNet::param_count(int stage) const {
    check_stage(stage);
    long total = 0;
    for (int s = 1; s <= stage; ++s) {
        total += long(first_weights_[s - 1].size());
        for (int l = 1; l < depth_; ++l)
            for (int j = 1; j <= s; ++j) total += long(hidden_weights_[l - 1][s - 1][j - 1].size());
        for (int l = 0; l < depth_; ++l) total += long(biases_[l][s - 1].size());
        total += long(output_weights_[s - 1].size());
    }
    return total;
}

Matrix& StreamableNet::param(const BlockKey& key) {
    return const_cast<Matrix&>(static_cast<const StreamableNet*>(this)->param(key));
}

const Matrix& StreamableNet::param(const BlockKey& key) const {
    const int k = num_stages();
    switch (key.kind) {
        case BlockKind::output:
            if (key.in_stage < 1 || key.in_stage > k) break;
            return output_weights_[key.in_stage - 1];
        case BlockKind::bias:
            if (key.layer < 0 || key.layer >= depth_ || key.out_stage < 1 || key.out_stage > k) break;
            return biases_[key.layer][key.out_stage - 1];
        case BlockKind::weight:
            if (key.out_stage < 1 || key.out_stage > k) break;
            if (key.layer == 0 && key.in_stage == 0) return first_weights_[key.out_stage - 1];
            if (key.layer >= 1 && key.layer < depth_ && key.in_stage >= 1 && key.in_stage <= key.out_stage)
                return hidden_weights_[key.layer - 1][key.out_stage - 1][key.in_stage - 1];
            break;
    }
    throw ArgumentError("param: invalid block key");
}

std::vector<BlockKey> StreamableNet::stage_keys(int stage) const {
    check_stage(stage);
    // Serialization order: per layer the lateral blocks in source order, the
    // new-to-new block, then the bias segment; the output block comes last.
    std::vector<BlockKey> keys;
    keys.push_back({0, BlockKind::weight, stage, 0});
    keys.push_back({0, BlockKind::bias, stage, 0});
    for (int l = 1; l < depth_; ++l) {
        for (int j = 1; j <= stage; ++j) keys.push_back({l, BlockKind::weight, stage, j});
        keys.push_back({l, BlockKind::bias, stage, 0});
    }
    keys.push_back({depth_, BlockKind::output, 0, stage});
    return keys;
}

}  // namespace snf
