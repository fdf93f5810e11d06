#pragma once

// One root seed fans out to independent per-component streams:
// stream(name) = splitmix64(root ^ fnv1a64(name)). A component's numbers do
// not depend on which other components ran, or in what order.

#include <cstdint>
#include <random>
#include <string_view>

namespace realclock::cli {

std::uint64_t fnv1a64(std::string_view text) noexcept;
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t component_seed(std::uint64_t root, std::string_view component) noexcept;
std::mt19937_64 component_rng(std::uint64_t root, std::string_view component);

}  // namespace realclock::cli
