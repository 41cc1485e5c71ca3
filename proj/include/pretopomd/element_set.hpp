#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace pretopomd {

/// Subset of the universe {0, ..., n-1}, stored as packed 64-bit words.
/// Bits past the universe size are always zero, so word-wise comparison and
/// hashing are exact.
class ElementSet {
public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  ElementSet() = default;
  explicit ElementSet(std::size_t universe)
      : universe_(universe), words_((universe + kWordBits - 1) / kWordBits) {}
  ElementSet(std::size_t universe, std::initializer_list<std::size_t> members);
  ElementSet(std::size_t universe, std::span<const std::size_t> members);

  static ElementSet full(std::size_t universe);

  [[nodiscard]] std::size_t universe() const noexcept { return universe_; }
  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] bool empty() const noexcept;
  [[nodiscard]] bool contains(std::size_t x) const noexcept {
    return (words_[x / kWordBits] >> (x % kWordBits)) & 1U;
  }

  void insert(std::size_t x) noexcept {
    words_[x / kWordBits] |= Word{1} << (x % kWordBits);
  }
  void erase(std::size_t x) noexcept {
    words_[x / kWordBits] &= ~(Word{1} << (x % kWordBits));
  }

  [[nodiscard]] bool is_subset_of(const ElementSet& other) const noexcept;
  [[nodiscard]] bool intersects(const ElementSet& other) const noexcept;
  [[nodiscard]] std::size_t intersection_size(
      const ElementSet& other) const noexcept;

  ElementSet& operator|=(const ElementSet& other) noexcept;
  ElementSet& operator&=(const ElementSet& other) noexcept;
  /// Removes every member of `other`.
  ElementSet& subtract(const ElementSet& other) noexcept;
  friend ElementSet operator|(ElementSet a, const ElementSet& b) {
    return a |= b;
  }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) {
    return a &= b;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word word = words_[w];
      while (word != 0) {
        fn(w * kWordBits + static_cast<std::size_t>(std::countr_zero(word)));
        word &= word - 1;
      }
    }
  }

  /// Smallest member, or npos when empty.
  [[nodiscard]] std::size_t first() const noexcept;
  [[nodiscard]] std::vector<std::size_t> members() const;
  [[nodiscard]] std::span<const Word> words() const noexcept { return words_; }
  [[nodiscard]] std::size_t hash() const noexcept;

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

private:
  std::size_t universe_ = 0;
  std::vector<Word> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const noexcept { return s.hash(); }
};

}  // namespace pretopomd
