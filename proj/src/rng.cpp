#include "vnrf/rng.hpp"

namespace vnrf {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

// Counter word 1 tags the domain so sequential and addressed draws never meet.
constexpr std::uint64_t kSequentialDomain = 0;
constexpr std::uint64_t kAddressedDomain = 1;

__extension__ typedef unsigned __int128 u128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const u128 p = static_cast<u128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

} // namespace

PhiloxBlock philox4x64_10(const PhiloxBlock& counter, std::array<std::uint64_t, 2> key) {
    PhiloxBlock c = counter;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, c[0], hi0, lo0);
        mulhilo(kPhiloxM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ key[0], lo1, hi0 ^ c[3] ^ key[1], lo0};
    }
    return c;
}

std::uint64_t mix64(std::uint64_t x) {
    // SplitMix64 finalizer.
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b) { return mix64(mix64(a) ^ b); }

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

std::uint64_t RngStream::next_u64() {
    const std::uint64_t block = position_ >> 2;
    if (block != buffered_block_) {
        buffer_ = philox4x64_10({block, kSequentialDomain, 0, 0}, key_);
        buffered_block_ = block;
    }
    return buffer_[position_++ & 3];
}

PhiloxBlock RngStream::block_at(std::uint64_t sweep, std::uint64_t block) const {
    return philox4x64_10({block, kAddressedDomain, sweep, 0}, key_);
}

void RngStream::sweep_blocks(std::uint64_t sweep, std::span<PhiloxBlock> out) const {
    for (std::size_t b = 0; b < out.size(); ++b) out[b] = philox4x64_10({b, kAddressedDomain, sweep, 0}, key_);
}

std::uint64_t RngStream::word_at(std::uint64_t sweep, std::uint64_t site) const {
    return block_at(sweep, site >> 2)[site & 3];
}

} // namespace vnrf
