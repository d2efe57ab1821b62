// rng.hpp — counter-based RNG streams for reproducible Monte Carlo.
//
// Every draw is a pure function of (key, index), so results do not depend on
// thread count or evaluation order. Mixing function is SplitMix64.

#pragma once

#include <cstdint>

namespace kerrosc {

constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += kSplitMixGamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stateless stream: draw(i) is the i-th output of the stream identified by key.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t bits(std::uint64_t index) const noexcept {
        return splitmix64(key_ + index * kSplitMixGamma);
    }

    // uniform in [0, 1), 53-bit mantissa
    double uniform(std::uint64_t index) const noexcept {
        return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
    }

    // independent substream labelled by tag
    CounterRng derive(std::uint64_t tag) const noexcept {
        return CounterRng(splitmix64(key_ ^ splitmix64(tag + 0x632BE59BD9B4E019ULL)));
    }

    std::uint64_t key() const noexcept { return key_; }

  private:
    std::uint64_t key_;
};

// Fold an arbitrary double (e.g. a control-parameter value) into a stream tag
// via its bit pattern, so equal parameters give equal streams.
std::uint64_t stream_tag(double value) noexcept;

} // namespace kerrosc
