#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

#include "embalign/errors.hpp"

namespace embalign::detail {

// Files are little-endian; values are byte-swapped on big-endian hosts.
template <typename T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
  }
  return value;
}

template <typename T>
void append_le(std::string& out, T value) {
  value = to_little(value);
  out.append(reinterpret_cast<const char*>(&value), sizeof(T));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  template <typename T>
  T read() {
    if (data_.size() - pos_ < sizeof(T)) throw FormatError("unexpected end of data");
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return to_little(value);
  }

  std::string_view take(std::size_t n) {
    if (data_.size() - pos_ < n) throw FormatError("unexpected end of data");
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace embalign::detail
