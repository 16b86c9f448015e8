// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "tdmd/tensor.hpp"

#include <vector>

namespace tdmd {

/// Time-ordered CSI snapshots sampled every `period_ms` milliseconds.
struct ChannelSequence {
    std::vector<ChannelTensor> snapshots;
    double period_ms = 5.0;

    [[nodiscard]] std::size_t length() const noexcept { return snapshots.size(); }
    [[nodiscard]] const Shape3& dims() const;

    /// Throws if empty, if snapshot shapes differ, or if the period is not
    /// a positive finite number.
    void validate() const;

    /// The last `count` snapshots, in order.
    [[nodiscard]] ChannelSequence tail(std::size_t count) const;
};

}  // namespace tdmd
