#include "deltrace/bitstring.hpp"

#include <ostream>

#include "deltrace/error.hpp"

namespace deltrace {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    require(b <= 1, ErrorKind::InvalidParameter, "bit values must be 0 or 1");
  }
}

BitString::BitString(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) push_back(b);
}

BitString BitString::parse(std::string_view text) {
  BitString out;
  out.bits_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      fail(ErrorKind::Parse, "bit string may contain only '0' and '1', got '" + std::string(text) + "'");
    }
    out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
  return s;
}

void BitString::push_back(int bit) {
  require(bit == 0 || bit == 1, ErrorKind::InvalidParameter, "bit values must be 0 or 1");
  bits_.push_back(static_cast<std::uint8_t>(bit));
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::size_t BitString::count_ones() const noexcept {
  std::size_t ones = 0;
  for (auto b : bits_) ones += b;
  return ones;
}

BitString operator+(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

std::ostream& operator<<(std::ostream& os, const BitString& s) { return os << s.to_string(); }

BitString repeat(const BitString& pattern, std::size_t count) {
  BitString out;
  out.reserve(pattern.size() * count);
  for (std::size_t i = 0; i < count; ++i) out.append(pattern);
  return out;
}

StringPair build_xy(int n) {
  require(n >= 1, ErrorKind::InvalidParameter, "build_xy requires n >= 1");
  const BitString block{0, 1};
  const BitString defect{1, 0};
  const auto m = static_cast<std::size_t>(n);
  return {repeat(block, m - 1) + defect + repeat(block, m),
          repeat(block, m) + defect + repeat(block, m - 1), n};
}

StringPair build_xy_prime(int n) {
  require(n >= 1, ErrorKind::InvalidParameter, "build_xy_prime requires n >= 1");
  const BitString zero{0};
  const BitString one{1};
  const auto m = static_cast<std::size_t>(n);
  return {repeat(zero, m - 1) + one + repeat(zero, m), repeat(zero, m) + one + repeat(zero, m - 1), n};
}

BitString pair_encode(const BitString& s) {
  BitString out;
  out.reserve(2 * s.size());
  for (auto b : s) {
    out.push_back(b);
    out.push_back(1 - b);
  }
  return out;
}

}  // namespace deltrace

std::size_t std::hash<deltrace::BitString>::operator()(const deltrace::BitString& s) const noexcept {
  // FNV-1a over the symbols, length folded in.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ s.size();
  for (auto b : s) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}
