#include "kerrosc/rng.hpp"

#include <bit>

namespace kerrosc {

std::uint64_t stream_tag(double value) noexcept {
    return splitmix64(std::bit_cast<std::uint64_t>(value));
}

} // namespace kerrosc
