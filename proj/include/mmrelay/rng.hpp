#pragma once

#include <cstdint>
#include <random>

namespace mmrelay {

// Entity classes with independent random streams per drop. Adding a class at
// the end never perturbs existing streams.
enum class StreamClass : std::uint64_t {
    BaseStations = 0,
    Relays,
    Obstacles,
    Blockage,
    Gains,
    Fading,
    UserDrop,
    Pairs,
    Interferers,
};

// Room for context-offset stream families (direct link, relay hop, D2D link).
inline constexpr std::uint64_t kStreamStride = 16;

inline StreamClass offset_class(StreamClass cls, std::uint64_t context) {
    return static_cast<StreamClass>(static_cast<std::uint64_t>(cls) +
                                    kStreamStride * context);
}

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Deterministic stream for (seed, drop, class): identical regardless of
// thread count or evaluation order.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t drop,
                                   StreamClass cls) {
    std::uint64_t s = detail::splitmix64(seed);
    s = detail::splitmix64(s ^ (drop * 0xd1342543de82ef95ULL));
    s = detail::splitmix64(s ^ (static_cast<std::uint64_t>(cls) + 0x632be59bd9b4e019ULL));
    return std::mt19937_64(s);
}

}  // namespace mmrelay
