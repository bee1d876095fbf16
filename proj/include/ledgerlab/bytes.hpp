#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <vector>

#include "ledgerlab/types.hpp"

namespace ledgerlab {

/// Canonical byte encoder: every field is length-prefixed (u32 big-endian
/// count) and integers are written big-endian, so two values serialize to the
/// same bytes iff they are equal field-for-field.
class ByteWriter {
 public:
  void u64(std::uint64_t v) {
    raw_u32(8);
    raw_be(v, 8);
  }

  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void bytes(std::span<const std::uint8_t> data) {
    raw_u32(static_cast<std::uint32_t>(data.size()));
    buf_.insert(buf_.end(), data.begin(), data.end());
  }

  void str(std::string_view s) {
    bytes({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  }

  void digest(const Digest& d) { bytes({d.data(), d.size()}); }

  std::span<const std::uint8_t> view() const { return buf_; }
  std::vector<std::uint8_t> take() && { return std::move(buf_); }

 private:
  void raw_u32(std::uint32_t v) { raw_be(v, 4); }

  void raw_be(std::uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i)
      buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> buf_;
};

}  // namespace ledgerlab
