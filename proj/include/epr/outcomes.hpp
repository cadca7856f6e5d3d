#pragma once

#include <array>
#include <cstdint>

namespace epr {

enum class SwitchOutcome : int { Plus = 0, Minus = 1, Undetected = 2 };

// Coincidence counts for one detector-pair setting. counts[o1][o2] has photon 1
// on rows, photon 2 on columns. emitted counts every generated pair; recorded
// only those passing the efficiency gate, so the nine cells sum to recorded.
struct CoincidenceTally {
    std::array<std::array<std::uint64_t, 3>, 3> counts{};
    std::uint64_t emitted = 0;
    std::uint64_t recorded = 0;

    std::uint64_t& cell(SwitchOutcome o1, SwitchOutcome o2) {
        return counts[static_cast<int>(o1)][static_cast<int>(o2)];
    }
    std::uint64_t cell(SwitchOutcome o1, SwitchOutcome o2) const {
        return counts[static_cast<int>(o1)][static_cast<int>(o2)];
    }
    std::uint64_t definite_sum() const {
        return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
    }
    std::uint64_t total() const {
        std::uint64_t sum = 0;
        for (const auto& row : counts)
            for (std::uint64_t c : row) sum += c;
        return sum;
    }
    CoincidenceTally& operator+=(const CoincidenceTally& other) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) counts[i][j] += other.counts[i][j];
        emitted += other.emitted;
        recorded += other.recorded;
        return *this;
    }
    friend bool operator==(const CoincidenceTally&, const CoincidenceTally&) = default;
};

}  // namespace epr
