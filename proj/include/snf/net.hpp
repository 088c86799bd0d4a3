#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "snf/loss.hpp"
#include "snf/matrix.hpp"
#include "snf/rng.hpp"

namespace snf {

struct ActivationConfig {
    double omega0 = 30.0;  // frequency factor on the first layer's pre-activation
};

// Initialization of the blocks added by a growth step. zero_new_blocks is the
// default scheme: lateral connections from old units keep the sine-net
// uniform init while everything that only touches new units starts at zero,
// so growth leaves the network function unchanged. siren_new_blocks applies
// the uniform init to those blocks as well (the ablation arm, and the natural
// choice when pre-building a net for joint width training).
enum class InitMode { zero_new_blocks, siren_new_blocks };

enum class BlockKind : uint8_t { weight, bias, output };

// Address of one parameter block. Hidden weight blocks are identified by the
// hidden layer index (0-based), the stage of the receiving units and the
// stage of the source units (1-based; in_stage 0 means the network input).
// Bias segments set in_stage = 0. Output blocks use kind = output with
// in_stage = source stage and out_stage = 0.
struct BlockKey {
    int layer = 0;
    BlockKind kind = BlockKind::weight;
    int out_stage = 0;
    int in_stage = 0;

    auto operator<=>(const BlockKey&) const = default;

    // The growth stage this block belongs to (1-based).
    int stage() const { return kind == BlockKind::output ? in_stage : out_stage; }
};

// Gradients for a subset of blocks, keyed like the net. Frozen blocks never
// appear here.
struct GradientSet {
    std::map<BlockKey, Matrix> blocks;

    bool empty() const { return blocks.empty(); }
    size_t count() const { return blocks.size(); }
    // Elementwise sum; keys missing on either side are treated as zero.
    void accumulate(const GradientSet& other);
};

// Uniform init half-width for sine layers: sqrt(6/n) for hidden and lateral
// weights, 1/n for the first layer (n = fan-in of the receiving unit).
double siren_init_bound(int fan_in, bool first_layer);
void fill_siren(Matrix& m, int fan_in, bool first_layer, Rng& rng);

// Per-layer, per-stage intermediate results of a forward pass.
struct ForwardTrace {
    std::vector<std::vector<Matrix>> pre;  // [layer][stage-1], N x delta, linear part
    std::vector<std::vector<Matrix>> act;  // sin(omega0 * pre) at layer 0, sin(pre) deeper
    Matrix output;                         // N x out_dim
};

// A sine-activated MLP whose hidden width is partitioned into stages. Units
// of stage s receive connections only from stages <= s, so evaluating the
// first k stages is a closed sub-network and the activations of stages < k
// never depend on stage-k parameters. The output layer is linear with no
// bias; each stage contributes through its own output block.
class StreamableNet {
public:
    StreamableNet() = default;
    // Builds the single-stage net. Every weight uses the sine-net uniform
    // init (first-layer rule on layer 0); biases start at zero.
    StreamableNet(int in_dim, int out_dim, int depth, int first_width,
                  ActivationConfig activation, Rng& rng);

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }
    int depth() const { return depth_; }
    const ActivationConfig& activation() const { return activation_; }
    double omega0() const { return activation_.omega0; }

    int num_stages() const { return int(stage_widths_.size()); }
    const std::vector<int>& stage_widths() const { return stage_widths_; }
    int width(int stage) const { return stage_widths_.at(stage - 1); }
    int delta(int stage) const {  // units added by `stage`
        return stage == 1 ? stage_widths_[0] : stage_widths_[stage - 1] - stage_widths_[stage - 2];
    }

    int frozen_stages() const { return frozen_stages_; }
    void set_frozen_stages(int n);
    bool frozen(const BlockKey& key) const { return key.stage() <= frozen_stages_; }

    // Appends one stage of width new_width - width(K). Lateral blocks from
    // old units are sine-initialized with fan-in equal to the full visible
    // width of the previous layer; layer-0 rows use the first-layer rule.
    // New-to-new blocks, new bias segments and the new output block follow
    // `mode`. All pre-existing stages are frozen. With the default mode the
    // network function at any stage is unchanged, exactly.
    void grow(int new_width, Rng& rng, InitMode mode = InitMode::zero_new_blocks);

    // Evaluates the sub-network of the first `stage` stages.
    Matrix forward(const Matrix& coords, int stage) const;
    ForwardTrace forward_with_trace(const Matrix& coords, int stage) const;

    // Contribution of stage `stage` alone to the output: hidden activations
    // run at width(stage) but only that stage's output block is applied.
    // Equals forward(x, stage) - forward(x, stage - 1). Requires stage >= 2.
    Matrix forward_residual(const Matrix& coords, int stage) const;

    // Loss and analytic gradients at the given evaluation stage. Gradients
    // are returned for every unfrozen block of stages <= stage; frozen
    // blocks receive none.
    std::pair<double, GradientSet> backward(const Matrix& coords, const Matrix& targets,
                                            int stage, const LossSpec& loss) const;

    // Parameters reachable by forward(., stage).
    long param_count(int stage) const;

    Matrix& param(const BlockKey& key);
    const Matrix& param(const BlockKey& key) const;
    // Keys of all blocks of one stage, in serialization order.
    std::vector<BlockKey> stage_keys(int stage) const;

    // Storage-level access used by the codec.
    Matrix& first_weight(int stage) { return first_weights_[stage - 1]; }
    Matrix& hidden_weight(int layer, int out_stage, int in_stage) {
        return hidden_weights_[layer - 1][out_stage - 1][in_stage - 1];
    }
    Matrix& bias(int layer, int stage) { return biases_[layer][stage - 1]; }
    Matrix& output_weight(int stage) { return output_weights_[stage - 1]; }
    const Matrix& first_weight(int stage) const { return first_weights_[stage - 1]; }
    const Matrix& hidden_weight(int layer, int out_stage, int in_stage) const {
        return hidden_weights_[layer - 1][out_stage - 1][in_stage - 1];
    }
    const Matrix& bias(int layer, int stage) const { return biases_[layer][stage - 1]; }
    const Matrix& output_weight(int stage) const { return output_weights_[stage - 1]; }

    // Allocates zeroed storage for one more stage of the given width; used by
    // the codec when rebuilding a net from chunks.
    void append_stage_storage(int new_width);
    static StreamableNet empty_shell(int in_dim, int out_dim, int depth, ActivationConfig act);

private:
    void check_stage(int stage) const;

    int in_dim_ = 0, out_dim_ = 0, depth_ = 0;
    std::vector<int> stage_widths_;  // cumulative, strictly increasing
    int frozen_stages_ = 0;
    ActivationConfig activation_;

    std::vector<Matrix> first_weights_;                            // [stage]: delta x in_dim
    std::vector<std::vector<std::vector<Matrix>>> hidden_weights_; // [layer-1][out][in]: delta_o x delta_i
    std::vector<std::vector<Matrix>> biases_;                      // [layer][stage]: delta x 1
    std::vector<Matrix> output_weights_;                           // [stage]: out_dim x delta
};

}  // namespace snf
