#include "nichols/cyclo.hpp"

#include <charconv>
#include <numeric>

namespace nichols {

int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }
int64_t lcm64(int64_t a, int64_t b) { return std::lcm(a, b); }
int64_t mod64(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

RootOfUnity RootOfUnity::from(int64_t k, int64_t n) {
  if (n <= 0) throw std::invalid_argument("root of unity denominator must be positive");
  int64_t r = mod64(k, n);
  if (r == 0) return RootOfUnity();
  int64_t g = std::gcd(r, n);
  return RootOfUnity(r / g, n / g, true);
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  if (den_ == 1) return o;
  if (o.den_ == 1) return *this;
  if (den_ == o.den_) return from(num_ + o.num_, den_);
  int64_t g = std::gcd(den_, o.den_);
  int64_t l = den_ / g * o.den_;
  return from(num_ * (l / den_) + o.num_ * (l / o.den_), l);
}

RootOfUnity RootOfUnity::pow(int64_t e) const {
  if (den_ == 1) return *this;
  return from(mod64(e, den_) * num_, den_);
}

RootOfUnity RootOfUnity::inv() const {
  if (den_ == 1) return *this;
  return RootOfUnity(den_ - num_, den_, true);
}

std::string RootOfUnity::str() const {
  if (den_ == 1) return "1";
  if (den_ == 2) return "-1";
  return "e" + std::to_string(den_) + "^" + std::to_string(num_);
}

bool gf_contains(const RootOfUnity& a) {
  if (a.is_one()) return false;
  int64_t n = a.order();
  return 10 % n == 0 || 12 % n == 0 || 18 % n == 0;
}

const std::vector<RootOfUnity>& gf_elements() {
  static const std::vector<RootOfUnity> elems = [] {
    std::vector<RootOfUnity> out;
    for (int64_t n : {10, 12, 18}) {
      for (int64_t k = 1; k <= n; ++k) {
        RootOfUnity z = e(n, k);
        if (z.is_one()) continue;
        bool seen = false;
        for (const auto& w : out) seen = seen || w == z;
        if (!seen) out.push_back(z);
      }
    }
    return out;
  }();
  return elems;
}

namespace {

bool parse_int(std::string_view s, int64_t& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

RootOfUnity parse_root(std::string_view token) {
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t')) token.remove_suffix(1);
  if (token == "1") return RootOfUnity::one();
  if (token == "-1") return RootOfUnity::minus_one();
  if (token.size() < 2 || token[0] != 'e')
    throw std::invalid_argument("bad root-of-unity token '" + std::string(token) + "'");
  std::string_view body = token.substr(1);
  int64_t n = 0, k = 1;
  auto caret = body.find('^');
  if (!parse_int(body.substr(0, caret), n) || n <= 0)
    throw std::invalid_argument("bad root-of-unity token '" + std::string(token) + "'");
  if (caret != std::string_view::npos && !parse_int(body.substr(caret + 1), k))
    throw std::invalid_argument("bad root-of-unity token '" + std::string(token) + "'");
  return RootOfUnity::from(k, n);
}

}  // namespace nichols
