#pragma once

#include <cstdint>
#include <random>

namespace funcsel {

// splitmix64 finalizer; used to decorrelate derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic sub-stream seed from a base seed and up to two tags.
// Independent of evaluation order, so parallel grids stay reproducible.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(base ^ mix64(a)) ^ mix64(b + 0x6a09e667f3bcc909ULL));
}

using Rng = std::mt19937_64;

}  // namespace funcsel
