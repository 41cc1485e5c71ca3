#include "bits.hpp"

namespace pretopomd::detail {

#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
#define PRETOPOMD_POPCNT_CLONES __attribute__((target_clones("popcnt", "default")))
#else
#define PRETOPOMD_POPCNT_CLONES
#endif

PRETOPOMD_POPCNT_CLONES
std::size_t count_bits(const std::uint64_t* a, std::size_t words) noexcept {
  std::size_t count = 0;
  for (std::size_t k = 0; k < words; ++k) {
    count += static_cast<std::size_t>(__builtin_popcountll(a[k]));
  }
  return count;
}

PRETOPOMD_POPCNT_CLONES
std::size_t common_bits(const std::uint64_t* a, const std::uint64_t* b,
                        std::size_t words) noexcept {
  std::size_t count = 0;
  for (std::size_t k = 0; k < words; ++k) {
    count += static_cast<std::size_t>(__builtin_popcountll(a[k] & b[k]));
  }
  return count;
}

}  // namespace pretopomd::detail
