#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deltrace {

// A finite 0/1 sequence. Stored one symbol per byte; documentation and the
// statistics built on it use 1-based positions, storage is 0-based.
class BitString {
 public:
  using value_type = std::uint8_t;
  using const_iterator = std::vector<std::uint8_t>::const_iterator;

  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);
  BitString(std::initializer_list<int> bits);

  // Parses "0"/"1" characters with no separators. The empty string is valid.
  static BitString parse(std::string_view text);

  std::string to_string() const;

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const noexcept { return bits_[i]; }
  const_iterator begin() const noexcept { return bits_.begin(); }
  const_iterator end() const noexcept { return bits_.end(); }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  void push_back(int bit);
  void pop_back() { bits_.pop_back(); }
  void reserve(std::size_t n) { bits_.reserve(n); }
  void append(const BitString& other);

  std::size_t count_ones() const noexcept;

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString& a, const BitString& b) {
    return a.bits_ <=> b.bits_;
  }

 private:
  std::vector<std::uint8_t> bits_;
};

BitString operator+(const BitString& a, const BitString& b);
std::ostream& operator<<(std::ostream& os, const BitString& s);

struct StringPair {
  BitString left;
  BitString right;
  int n = 0;
};

// left = (01)^{n-1} 10 (01)^n, right = (01)^n 10 (01)^{n-1}; both length 4n.
StringPair build_xy(int n);

// left = 0^{n-1} 1 0^n, right = 0^n 1 0^{n-1}; both length 2n.
StringPair build_xy_prime(int n);

// Replaces every 0 by 01 and every 1 by 10. Maps build_xy_prime(n) onto build_xy(n).
BitString pair_encode(const BitString& s);

// `(pattern)^count` as a bit string.
BitString repeat(const BitString& pattern, std::size_t count);

}  // namespace deltrace

template <>
struct std::hash<deltrace::BitString> {
  std::size_t operator()(const deltrace::BitString& s) const noexcept;
};
