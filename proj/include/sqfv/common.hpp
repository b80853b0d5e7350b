#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sqfv {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Thrown when every residue class modulo p^2 is a root, i.e. the local
// condition "f takes a value not divisible by p^2" fails.  Maps to exit
// code 2 in the CLI.
struct SolubilityFailure : std::runtime_error {
    u64 prime;
    explicit SolubilityFailure(u64 p)
        : std::runtime_error("local solubility failure at p=" + std::to_string(p) +
                             ": every residue modulo p^2 is a root"),
          prime(p) {}
};

}  // namespace sqfv
