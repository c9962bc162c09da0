// Counter-based random numbers.
//
// Every value is a pure function of (seed, stream, counter): Philox4x64-10
// (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC'11)
// keyed by (seed, stream). Results are identical across platforms and
// compilers, and independent replicas never share state.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

namespace vnrf {

using PhiloxBlock = std::array<std::uint64_t, 4>;

PhiloxBlock philox4x64_10(const PhiloxBlock& counter, std::array<std::uint64_t, 2> key);

// Uniform in [0, 1) with 53 random bits.
inline double to_unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stream hashing for (base seed, cell, replica) style derivations.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b);

class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t seed() const { return key_[0]; }
    std::uint64_t stream() const { return key_[1]; }

    // Sequential draws; the n-th call returns word n of the sequential domain.
    std::uint64_t next_u64();
    double uniform() { return to_unit_double(next_u64()); }
    bool bernoulli(double p) { return uniform() < p; }
    std::uint64_t draws() const { return position_; }

    // Addressed draws, disjoint from the sequential domain. Word `site` of
    // sweep `sweep`; consecutive sites share one Philox block.
    std::uint64_t word_at(std::uint64_t sweep, std::uint64_t site) const;
    PhiloxBlock block_at(std::uint64_t sweep, std::uint64_t block) const;
    // Blocks 0 .. out.size() - 1 of one sweep.
    void sweep_blocks(std::uint64_t sweep, std::span<PhiloxBlock> out) const;

private:
    std::array<std::uint64_t, 2> key_;
    std::uint64_t position_ = 0;
    PhiloxBlock buffer_{};
    std::uint64_t buffered_block_ = ~std::uint64_t{0};
};

} // namespace vnrf
