#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <string_view>
#include <vector>

namespace longkey {

// splitmix64 finalizer; used for stateless hashing (token ids, frozen
// embeddings) so results do not depend on std library distribution details.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seeded generator with hand-rolled draws. mt19937_64 raw output is pinned
// by the standard; std::*_distribution is not, so uniforms/normals/shuffle
// are derived here to keep runs reproducible across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; one value per call, no caching so state stays stream-simple.
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Unbiased draw from [0, n).
  uint64_t below(uint64_t n) {
    if (n == 0) return 0;
    uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = eng_();
      if (r >= threshold) return r % n;
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Sample k distinct indices from [0, n), order-preserving (selection scan).
  std::vector<int> sample_indices(int n, int k);

  void save(std::ostream& os) const { os << eng_; }
  void load(std::istream& is) { is >> eng_; }

  friend bool operator==(const Rng& a, const Rng& b) { return a.eng_ == b.eng_; }

 private:
  std::mt19937_64 eng_;
};

inline std::vector<int> Rng::sample_indices(int n, int k) {
  std::vector<int> out;
  if (k <= 0 || n <= 0) return out;
  if (k >= n) {
    out.resize(n);
    for (int i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  // Floyd-style selection would reorder; a reservoir keeps it simple and the
  // cap (hundreds) keeps it cheap.
  out.reserve(k);
  int chosen = 0;
  for (int i = 0; i < n; ++i) {
    uint64_t remaining = static_cast<uint64_t>(n - i);
    uint64_t needed = static_cast<uint64_t>(k - chosen);
    if (below(remaining) < needed) {
      out.push_back(i);
      if (++chosen == k) break;
    }
  }
  return out;
}

}  // namespace longkey
