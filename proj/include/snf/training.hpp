#pragma once

#include <map>
#include <utility>
#include <vector>

#include "snf/metrics.hpp"
#include "snf/net.hpp"
#include "snf/signal.hpp"

namespace snf {

struct TrainConfig {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int epochs = 1;
    int log_interval = 100;  // a log row every this many epochs, plus the last
    int batch_size = 0;      // 0 = full batch; otherwise consecutive sample slices
};

// Bias-corrected Adam over parameter blocks. Moments exist only for blocks
// that have received gradients; one apply() is one timestep. Updating a
// frozen block is refused, which enforces the freezing contract at the
// optimizer boundary too.
class AdamState {
public:
    explicit AdamState(const TrainConfig& cfg)
        : lr_(cfg.lr), beta1_(cfg.beta1), beta2_(cfg.beta2), eps_(cfg.eps) {}
    AdamState(double lr, double beta1, double beta2, double eps)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    void apply(StreamableNet& net, const GradientSet& grads);
    long step() const { return t_; }

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::map<BlockKey, Matrix> m_, v_;
};

// One stage of a progressive run. signal_index selects the stage's target
// from the signal list passed to train_progressive (spatial growing keeps one
// shared signal and varies the mask; temporal growing extends the target).
struct StageSpec {
    int target_width = 0;
    int epochs = 0;
    LossSpec loss = LossSpec::full();
    int signal_index = 0;
};

struct GrowthPlan {
    std::vector<StageSpec> stages;
    InitMode init = InitMode::zero_new_blocks;
};

// Full-batch (or sliced) Adam on the newest stage only; earlier stages stay
// bit-identical. Logged epochs are epoch_offset + 1-based local epoch.
// Throws DivergedError when the loss turns non-finite or exceeds 1e6x its
// initial value.
MetricsReport train_stage(StreamableNet& net, const SampledSignal& signal, const LossSpec& loss,
                          const TrainConfig& cfg, long epoch_offset = 0);

// Grow-then-train over the plan. The first entry must match the net's
// existing single stage (it is trained, not grown); later entries grow first.
// cfg.epochs is ignored in favor of the per-stage counts.
MetricsReport train_progressive(StreamableNet& net, const std::vector<SampledSignal>& signals,
                                const GrowthPlan& plan, const TrainConfig& cfg, Rng& rng);

// Joint width training: each epoch accumulates the loss gradient of every
// width prefix, then applies a single Adam step to all parameters. The net
// must be pre-built with all stages and nothing frozen. Logged loss is the
// summed multi-width objective; logged psnr tracks the full-width prefix.
MetricsReport train_slimmable(StreamableNet& net, const SampledSignal& signal,
                              const TrainConfig& cfg);

// Fixed-width baseline: a fresh single-stage net trained end-to-end.
std::pair<StreamableNet, MetricsReport> train_individual(const SampledSignal& signal, int depth,
                                                         int width, ActivationConfig activation,
                                                         const TrainConfig& cfg, Rng& rng);

}  // namespace snf
