#pragma once

#include <cstddef>
#include <cstdint>

namespace pretopomd::detail {

// Dispatched at load time to the popcnt instruction where the CPU has it.
std::size_t count_bits(const std::uint64_t* a, std::size_t words) noexcept;
std::size_t common_bits(const std::uint64_t* a, const std::uint64_t* b,
                        std::size_t words) noexcept;

}  // namespace pretopomd::detail
