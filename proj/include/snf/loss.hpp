#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace snf {

// Membership flags for the partial-signal objective: samples with member[i]
// true carry a data term, the rest are pulled toward zero output.
struct RegionMask {
    std::vector<uint8_t> member;

    size_t size() const { return member.size(); }
    bool contains(size_t i) const { return member[i] != 0; }
    bool all() const {
        for (auto m : member)
            if (!m) return false;
        return true;
    }
};

struct LossSpec {
    enum class Kind { full_mse, masked_mse };
    Kind kind = Kind::full_mse;
    std::optional<RegionMask> mask;  // required for masked_mse

    static LossSpec full() { return {Kind::full_mse, std::nullopt}; }
    static LossSpec masked(RegionMask m) { return {Kind::masked_mse, std::move(m)}; }
};

class Matrix;

// Mean over samples of the squared error, summed over channels.
double loss_full(const Matrix& pred, const Matrix& target);

// Samples outside the mask are penalized toward zero output, samples inside
// carry the usual data term. With an all-true mask this runs the exact same
// arithmetic as loss_full.
double loss_masked(const Matrix& pred, const Matrix& target, const RegionMask& mask);

double loss_value(const Matrix& pred, const Matrix& target, const LossSpec& spec);
// dL/dpred, same shape as pred.
Matrix loss_gradient(const Matrix& pred, const Matrix& target, const LossSpec& spec);

}  // namespace snf
