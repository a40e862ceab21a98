#ifndef BSG_RNG_HPP
#define BSG_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace bsg {

/// Uniform draw from [0, bound). Rejection sampling on raw mt19937_64 output;
/// std::uniform_int_distribution is not bit-identical across standard
/// libraries, this is.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t reject = (0 - bound) % bound;  // 2^64 mod bound
  std::uint64_t r;
  do {
    r = gen();
  } while (r < reject);
  return r % bound;
}

/// FNV-1a, 64-bit.
class Fnv1a {
 public:
  Fnv1a& byte(std::uint8_t b) {
    h_ = (h_ ^ b) * 1099511628211ull;
    return *this;
  }
  Fnv1a& word(std::uint64_t w) {
    for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(w >> (8 * i)));
    return *this;
  }
  Fnv1a& text(std::string_view s) {
    for (char c : s) byte(static_cast<std::uint8_t>(c));
    return *this;
  }
  std::uint64_t digest() const { return h_; }

 private:
  std::uint64_t h_ = 14695981039346656037ull;
};

}  // namespace bsg

#endif
