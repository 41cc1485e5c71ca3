#include "pretopomd/element_set.hpp"

#include <algorithm>

#include <boost/functional/hash.hpp>

#include "bits.hpp"

namespace pretopomd {

ElementSet::ElementSet(std::size_t universe,
                       std::initializer_list<std::size_t> members)
    : ElementSet(universe) {
  for (const auto x : members) insert(x);
}

ElementSet::ElementSet(std::size_t universe,
                       std::span<const std::size_t> members)
    : ElementSet(universe) {
  for (const auto x : members) insert(x);
}

ElementSet ElementSet::full(std::size_t universe) {
  ElementSet s(universe);
  std::fill(s.words_.begin(), s.words_.end(), ~Word{0});
  if (const auto tail = universe % kWordBits; tail != 0) {
    s.words_.back() = (Word{1} << tail) - 1;
  }
  return s;
}

std::size_t ElementSet::size() const noexcept {
  return detail::count_bits(words_.data(), words_.size());
}

bool ElementSet::empty() const noexcept {
  return std::all_of(words_.begin(), words_.end(),
                     [](Word w) { return w == 0; });
}

bool ElementSet::is_subset_of(const ElementSet& other) const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if ((words_[k] & ~other.words_[k]) != 0) return false;
  }
  return true;
}

bool ElementSet::intersects(const ElementSet& other) const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if ((words_[k] & other.words_[k]) != 0) return true;
  }
  return false;
}

std::size_t ElementSet::intersection_size(
    const ElementSet& other) const noexcept {
  return detail::common_bits(words_.data(), other.words_.data(), words_.size());
}

ElementSet& ElementSet::operator|=(const ElementSet& other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  return *this;
}

ElementSet& ElementSet::operator&=(const ElementSet& other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
  return *this;
}

ElementSet& ElementSet::subtract(const ElementSet& other) noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
  return *this;
}

std::size_t ElementSet::first() const noexcept {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] != 0) {
      return k * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[k]));
    }
  }
  return npos;
}

std::vector<std::size_t> ElementSet::members() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for_each([&](std::size_t x) { out.push_back(x); });
  return out;
}

std::size_t ElementSet::hash() const noexcept {
  std::size_t seed = universe_;
  boost::hash_range(seed, words_.begin(), words_.end());
  return seed;
}

}  // namespace pretopomd
