#include "nsgame/tuple_index.hpp"

#include <string>

#include "nsgame/error.hpp"

namespace nsgame {

TupleIndexer::TupleIndexer(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
  strides_.resize(radices_.size());
  size_ = 1;
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    if (radices_[i] == 0) throw Error(ErrorKind::shape_mismatch, "zero radix");
    strides_[i] = size_;
    size_ *= radices_[i];
  }
}

std::size_t TupleIndexer::encode(std::span<const std::size_t> digits) const {
  if (digits.size() != radices_.size())
    throw Error(ErrorKind::shape_mismatch, "tuple arity " + std::to_string(digits.size()) +
                                               " != " + std::to_string(radices_.size()));
  std::size_t index = 0;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= radices_[i])
      throw Error(ErrorKind::index_out_of_range,
                  "digit " + std::to_string(digits[i]) + " >= radix " + std::to_string(radices_[i]));
    index += digits[i] * strides_[i];
  }
  return index;
}

std::vector<std::size_t> TupleIndexer::decode(std::size_t index) const {
  std::vector<std::size_t> out(radices_.size());
  decode_into(index, out);
  return out;
}

void TupleIndexer::decode_into(std::size_t index, std::span<std::size_t> out) const {
  if (index >= size_) throw Error(ErrorKind::index_out_of_range, "flat index " + std::to_string(index));
  for (std::size_t i = 0; i < radices_.size(); ++i) {
    out[i] = index % radices_[i];
    index /= radices_[i];
  }
}

std::size_t checked_product(std::span<const std::size_t> sizes, std::size_t cap) {
  std::size_t p = 1;
  for (std::size_t s : sizes) {
    if (s != 0 && p > cap / s) throw Error(ErrorKind::cap_exceeded, "table size exceeds cap " + std::to_string(cap));
    p *= s;
  }
  if (p > cap) throw Error(ErrorKind::cap_exceeded, "table size exceeds cap " + std::to_string(cap));
  return p;
}

}  // namespace nsgame
