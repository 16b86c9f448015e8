// SPDX-License-Identifier: Apache-2.0
#include "tdmd/sequence.hpp"

#include "tdmd/error.hpp"

#include <cmath>
#include <string>

namespace tdmd {

const Shape3& ChannelSequence::dims() const {
    if (snapshots.empty()) throw DimensionError("empty channel sequence");
    return snapshots.front().dims();
}

void ChannelSequence::validate() const {
    if (snapshots.empty()) throw DimensionError("empty channel sequence");
    if (!(period_ms > 0.0) || !std::isfinite(period_ms)) {
        throw UsageError("measurement period must be positive, got " + std::to_string(period_ms));
    }
    const Shape3& d = snapshots.front().dims();
    for (std::size_t t = 1; t < snapshots.size(); ++t) {
        if (snapshots[t].dims() != d) {
            throw DimensionError("snapshot " + std::to_string(t) + " has a different shape than snapshot 0");
        }
    }
}

ChannelSequence ChannelSequence::tail(std::size_t count) const {
    if (count > snapshots.size()) {
        throw UsageError("requested " + std::to_string(count) + " snapshots from a sequence of " +
                         std::to_string(snapshots.size()));
    }
    ChannelSequence out;
    out.period_ms = period_ms;
    out.snapshots.assign(snapshots.end() - static_cast<std::ptrdiff_t>(count), snapshots.end());
    return out;
}

}  // namespace tdmd
