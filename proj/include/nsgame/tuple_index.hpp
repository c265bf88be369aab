#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nsgame {

/// Mixed-radix little-endian flattening: component 0 is the least
/// significant digit. Used for question tuples, answer tuples, and the
/// per-round digits inside a repeated player's alphabet.
class TupleIndexer {
 public:
  TupleIndexer() = default;
  explicit TupleIndexer(std::vector<std::size_t> radices);

  std::size_t size() const noexcept { return size_; }
  std::size_t arity() const noexcept { return radices_.size(); }
  const std::vector<std::size_t>& radices() const noexcept { return radices_; }
  std::size_t stride(std::size_t component) const { return strides_[component]; }

  std::size_t encode(std::span<const std::size_t> digits) const;
  std::vector<std::size_t> decode(std::size_t index) const;
  void decode_into(std::size_t index, std::span<std::size_t> out) const;

  std::size_t digit(std::size_t index, std::size_t component) const {
    return (index / strides_[component]) % radices_[component];
  }

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Product of sizes; throws Error(cap_exceeded) if it exceeds `cap`.
std::size_t checked_product(std::span<const std::size_t> sizes, std::size_t cap);

}  // namespace nsgame
