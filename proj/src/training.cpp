#include "snf/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace snf {

void AdamState::apply(StreamableNet& net, const GradientSet& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, double(t_));
    const double bc2 = 1.0 - std::pow(beta2_, double(t_));
    for (const auto& [key, g] : grads.blocks) {
        if (net.frozen(key)) throw ArgumentError("adam: gradient addressed to a frozen block");
        Matrix& p = net.param(key);
        if (!p.same_shape(g)) throw ShapeError("adam: gradient shape mismatch");
        auto [mit, fresh] = m_.try_emplace(key, g.rows(), g.cols());
        if (fresh) v_.emplace(key, Matrix(g.rows(), g.cols()));
        Matrix& m = mit->second;
        Matrix& v = v_.find(key)->second;
        double* pd = p.data();
        double* md = m.data();
        double* vd = v.data();
        const double* gd = g.data();
        for (size_t i = 0; i < g.size(); ++i) {
            md[i] = beta1_ * md[i] + (1.0 - beta1_) * gd[i];
            vd[i] = beta2_ * vd[i] + (1.0 - beta2_) * gd[i] * gd[i];
            pd[i] -= lr_ * (md[i] / bc1) / (std::sqrt(vd[i] / bc2) + eps_);
        }
    }
}

namespace {

void check_diverged(double loss, double initial, long epoch) {
    if (!std::isfinite(loss) || (initial > 0.0 && loss > 1e6 * initial))
        throw DivergedError("training diverged at epoch " + std::to_string(epoch) +
                                " (loss " + std::to_string(loss) + ")",
                            int(epoch));
}

Matrix take_rows(const Matrix& m, int r0, int r1) {
    Matrix out(r1 - r0, m.cols());
    for (int r = r0; r < r1; ++r)
        for (int c = 0; c < m.cols(); ++c) out(r - r0, c) = m(r, c);
    return out;
}

LossSpec slice_loss(const LossSpec& loss, int r0, int r1) {
    if (loss.kind == LossSpec::Kind::full_mse) return loss;
    RegionMask sub;
    sub.member.assign(loss.mask->member.begin() + r0, loss.mask->member.begin() + r1);
    return LossSpec::masked(std::move(sub));
}

}  // namespace

MetricsReport train_stage(StreamableNet& net, const SampledSignal& signal, const LossSpec& loss,
                          const TrainConfig& cfg, long epoch_offset) {
    if (cfg.epochs < 1) throw ArgumentError("train_stage: epochs must be >= 1");
    if (loss.kind == LossSpec::Kind::masked_mse &&
        (!loss.mask || long(loss.mask->size()) != signal.samples()))
        throw ArgumentError("train_stage: mask does not cover the sample set");

    const int stage = net.num_stages();
    const int n = signal.samples();
    AdamState adam(cfg);
    MetricsReport report;
    double initial = -1.0;

    for (int e = 1; e <= cfg.epochs; ++e) {
        double epoch_loss = 0.0;
        if (cfg.batch_size <= 0 || cfg.batch_size >= n) {
            auto [value, grads] = net.backward(signal.coords, signal.values, stage, loss);
            adam.apply(net, grads);
            epoch_loss = value;
        } else {
            for (int r0 = 0; r0 < n; r0 += cfg.batch_size) {
                const int r1 = std::min(n, r0 + cfg.batch_size);
                auto [value, grads] = net.backward(take_rows(signal.coords, r0, r1),
                                                   take_rows(signal.values, r0, r1), stage,
                                                   slice_loss(loss, r0, r1));
                adam.apply(net, grads);
                epoch_loss += value * (r1 - r0);
            }
            epoch_loss /= n;
        }
        if (initial < 0.0) initial = epoch_loss;
        check_diverged(epoch_loss, initial, epoch_offset + e);
        if (e % cfg.log_interval == 0 || e == cfg.epochs)
            report.series.push_back({epoch_offset + e, stage, epoch_loss,
                                     psnr_from_norm_loss(epoch_loss, signal.channels())});
    }
    return report;
}

MetricsReport train_progressive(StreamableNet& net, const std::vector<SampledSignal>& signals,
                                const GrowthPlan& plan, const TrainConfig& cfg, Rng& rng) {
    if (plan.stages.empty()) throw ArgumentError("train_progressive: empty plan");
    MetricsReport report;
    long offset = 0;
    for (size_t i = 0; i < plan.stages.size(); ++i) {
        const StageSpec& spec = plan.stages[i];
        if (spec.signal_index < 0 || spec.signal_index >= int(signals.size()))
            throw ArgumentError("train_progressive: signal index out of range");
        if (i == 0 && net.num_stages() == 1 && spec.target_width == net.width(1)) {
            // First entry trains the freshly built stage; no growth.
        } else {
            net.grow(spec.target_width, rng, plan.init);
        }
        TrainConfig stage_cfg = cfg;
        stage_cfg.epochs = spec.epochs;
        MetricsReport stage_report =
            train_stage(net, signals[size_t(spec.signal_index)], spec.loss, stage_cfg, offset);
        report.series.insert(report.series.end(), stage_report.series.begin(),
                             stage_report.series.end());
        offset += spec.epochs;
    }
    return report;
}

MetricsReport train_slimmable(StreamableNet& net, const SampledSignal& signal,
                              const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw ArgumentError("train_slimmable: epochs must be >= 1");
    if (net.frozen_stages() != 0)
        throw ArgumentError("train_slimmable: all stages must be trainable");

    const int stages = net.num_stages();
    const LossSpec loss = LossSpec::full();
    AdamState adam(cfg);
    MetricsReport report;
    double initial = -1.0;

    for (int e = 1; e <= cfg.epochs; ++e) {
        GradientSet acc;
        double objective = 0.0, widest = 0.0;
        for (int s = 1; s <= stages; ++s) {
            auto [value, grads] = net.backward(signal.coords, signal.values, s, loss);
            objective += value;
            widest = value;
            acc.accumulate(grads);
        }
        adam.apply(net, acc);
        if (initial < 0.0) initial = objective;
        check_diverged(objective, initial, e);
        if (e % cfg.log_interval == 0 || e == cfg.epochs)
            report.series.push_back(
                {e, stages, objective, psnr_from_norm_loss(widest, signal.channels())});
    }
    return report;
}

std::pair<StreamableNet, MetricsReport> train_individual(const SampledSignal& signal, int depth,
                                                         int width, ActivationConfig activation,
                                                         const TrainConfig& cfg, Rng& rng) {
    StreamableNet net(signal.dims(), signal.channels(), depth, width, activation, rng);
    MetricsReport report = train_stage(net, signal, LossSpec::full(), cfg);
    return {std::move(net), std::move(report)};
}

}  // namespace snf
