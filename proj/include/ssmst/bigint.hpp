#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <vector>

namespace ssmst {

// Unsigned arbitrary-precision integer, base 2^32 limbs, little-endian.
// Just enough arithmetic for the potential functions, whose values grow
// like (n+1)^(n+1) and overflow any machine word long before n = 30.
class BigUint {
public:
  BigUint() = default;
  BigUint(std::uint64_t v) {
    if (v) {
      limbs_.push_back(static_cast<std::uint32_t>(v));
      if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    }
  }

  static BigUint pow(std::uint64_t base, std::uint64_t exp) {
    BigUint r{1};
    for (std::uint64_t i = 0; i < exp; ++i) r.mul_small(base);
    return r;
  }

  void add(const BigUint& o) {
    if (o.limbs_.size() > limbs_.size()) limbs_.resize(o.limbs_.size(), 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      std::uint64_t s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
      limbs_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    if (carry) limbs_.push_back(static_cast<std::uint32_t>(carry));
  }

  void mul_small(std::uint64_t m) {
    if (m == 0 || limbs_.empty()) {
      limbs_.clear();
      return;
    }
    std::uint64_t lo = m & 0xffffffffULL, hi = m >> 32;
    std::vector<std::uint32_t> out(limbs_.size() + 2, 0);
    auto add_at = [&](std::size_t i, std::uint64_t v) {
      while (v) {
        if (i >= out.size()) out.push_back(0);
        std::uint64_t s = static_cast<std::uint64_t>(out[i]) + (v & 0xffffffffULL);
        out[i] = static_cast<std::uint32_t>(s);
        v = (v >> 32) + (s >> 32);
        ++i;
      }
    };
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
      add_at(i, limbs_[i] * lo);
      if (hi) add_at(i + 1, limbs_[i] * hi);
    }
    while (!out.empty() && out.back() == 0) out.pop_back();
    limbs_ = std::move(out);
  }

  bool is_zero() const { return limbs_.empty(); }

  friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() <=> b.limbs_.size();
    for (std::size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    return std::strong_ordering::equal;
  }
  friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }

  std::string to_string() const {
    if (limbs_.empty()) return "0";
    std::vector<std::uint32_t> work(limbs_);
    std::string digits;
    while (!work.empty()) {
      std::uint64_t rem = 0;
      for (std::size_t i = work.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | work[i];
        work[i] = static_cast<std::uint32_t>(cur / 10);
        rem = cur % 10;
      }
      digits.push_back(static_cast<char>('0' + rem));
      while (!work.empty() && work.back() == 0) work.pop_back();
    }
    return {digits.rbegin(), digits.rend()};
  }

private:
  std::vector<std::uint32_t> limbs_;
};

}  // namespace ssmst
