#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace psel {

// Fixed-width bitset over hypothesis indices 0..m-1. Stays in a single word
// for m <= 64; wider sets fall back to a word vector.
class HypoSet {
 public:
  HypoSet() = default;

  explicit HypoSet(int m) : m_(m) {
    if (m_ > 64) wide_.assign(word_count(), 0);
  }

  static HypoSet none(int m) { return HypoSet(m); }

  static HypoSet full(int m) {
    HypoSet s(m);
    if (m <= 64) {
      s.small_ = low_mask(m);
    } else {
      for (int w = 0; w < s.word_count(); ++w) {
        int bits = m - 64 * w;
        s.wide_[w] = bits >= 64 ? ~0ULL : low_mask(bits);
      }
    }
    return s;
  }

  int universe_size() const { return m_; }

  void set(int i) {
    if (m_ <= 64)
      small_ |= 1ULL << i;
    else
      wide_[i >> 6] |= 1ULL << (i & 63);
  }

  bool test(int i) const {
    if (m_ <= 64) return (small_ >> i) & 1ULL;
    return (wide_[i >> 6] >> (i & 63)) & 1ULL;
  }

  HypoSet& operator&=(const HypoSet& o) {
    if (m_ <= 64) {
      small_ &= o.small_;
    } else {
      for (std::size_t w = 0; w < wide_.size(); ++w) wide_[w] &= o.wide_[w];
    }
    return *this;
  }

  friend HypoSet operator&(HypoSet a, const HypoSet& b) {
    a &= b;
    return a;
  }

  bool operator==(const HypoSet& o) const = default;

  int count() const {
    if (m_ <= 64) return std::popcount(small_);
    int c = 0;
    for (std::uint64_t w : wide_) c += std::popcount(w);
    return c;
  }

  bool contains(const HypoSet& o) const {
    if (m_ <= 64) return (o.small_ & ~small_) == 0;
    for (std::size_t w = 0; w < wide_.size(); ++w)
      if (o.wide_[w] & ~wide_[w]) return false;
    return true;
  }

  // Visits members in ascending order.
  template <class F>
  void for_each(F&& f) const {
    if (m_ <= 64) {
      for (std::uint64_t bits = small_; bits;) {
        int i = std::countr_zero(bits);
        f(i);
        bits &= bits - 1;
      }
      return;
    }
    for (std::size_t w = 0; w < wide_.size(); ++w) {
      for (std::uint64_t bits = wide_[w]; bits;) {
        int i = static_cast<int>(w) * 64 + std::countr_zero(bits);
        f(i);
        bits &= bits - 1;
      }
    }
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(count());
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

 private:
  static constexpr std::uint64_t low_mask(int k) {
    return k >= 64 ? ~0ULL : (1ULL << k) - 1;
  }
  int word_count() const { return (m_ + 63) / 64; }

  int m_ = 0;
  std::uint64_t small_ = 0;
  std::vector<std::uint64_t> wide_;
};

}  // namespace psel
