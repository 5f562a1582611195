#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nichols {

// exp(2*pi*i*num/den), stored reduced with 0 <= num < den.
class RootOfUnity {
 public:
  constexpr RootOfUnity() = default;

  // Normalizing constructor; throws std::invalid_argument when n == 0.
  static RootOfUnity from(int64_t k, int64_t n);

  static constexpr RootOfUnity one() { return RootOfUnity(); }
  static RootOfUnity minus_one() { return from(1, 2); }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity& operator*=(const RootOfUnity& o) { return *this = *this * o; }
  RootOfUnity pow(int64_t e) const;
  RootOfUnity inv() const;

  int64_t order() const { return den_; }
  bool is_one() const { return den_ == 1; }
  bool is_primitive(int64_t n) const { return den_ == n; }

  // Token form: "1", "-1" or "e{den}^{num}".
  std::string str() const;

  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
  friend auto operator<=>(const RootOfUnity& a, const RootOfUnity& b) {
    if (auto c = a.den_ <=> b.den_; c != 0) return c;
    return a.num_ <=> b.num_;
  }

 private:
  constexpr RootOfUnity(int64_t num, int64_t den, bool)
      : num_(static_cast<int32_t>(num)), den_(static_cast<int32_t>(den)) {}
  int32_t num_ = 0;
  int32_t den_ = 1;
};

inline RootOfUnity rou_from(int64_t k, int64_t n) { return RootOfUnity::from(k, n); }
inline RootOfUnity rou_mul(const RootOfUnity& a, const RootOfUnity& b) { return a * b; }
inline RootOfUnity rou_pow(const RootOfUnity& a, int64_t e) { return a.pow(e); }
inline RootOfUnity rou_inv(const RootOfUnity& a) { return a.inv(); }
inline int64_t rou_order(const RootOfUnity& a) { return a.order(); }
inline bool rou_is_primitive(const RootOfUnity& a, int64_t n) { return a.is_primitive(n); }

// Shorthand for exp(2*pi*i*k/n).
inline RootOfUnity e(int64_t n, int64_t k = 1) { return RootOfUnity::from(k, n); }

// G_f = (G_10 u G_12 u G_18) \ {1}.
bool gf_contains(const RootOfUnity& a);
// The 29 elements of G_f in a fixed order: C(10), then C(12), then C(18),
// with repeats dropped on first occurrence.
const std::vector<RootOfUnity>& gf_elements();

// Parses "1", "-1", "e12^5", "e12" (exponent 1), "e12^-1". Unreduced tokens
// are normalized. Throws std::invalid_argument on malformed input.
RootOfUnity parse_root(std::string_view token);

struct RootOfUnityHash {
  size_t operator()(const RootOfUnity& a) const noexcept {
    return std::hash<int64_t>()(a.num() * 1000003 + a.den());
  }
};

int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);
int64_t mod64(int64_t a, int64_t m);

}  // namespace nichols
