#include "speechenc/bigint.hpp"

#include <array>
#include <cstdio>

namespace speechenc {

namespace {
constexpr std::uint64_t kBase = 1000000000ull;
}

BigUint::BigUint(std::uint64_t value) {
  do {
    limbs_.push_back(static_cast<std::uint32_t>(value % kBase));
    value /= kBase;
  } while (value != 0);
}

void BigUint::mul_small(std::uint64_t factor) {
  std::uint64_t carry = 0;
  for (std::uint32_t& limb : limbs_) {
    const std::uint64_t product = limb * factor + carry;
    limb = static_cast<std::uint32_t>(product % kBase);
    carry = product / kBase;
  }
  while (carry != 0) {
    limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
    carry /= kBase;
  }
}

std::string BigUint::to_string() const {
  std::string out = std::to_string(limbs_.back());
  std::array<char, 10> digits{};
  for (auto it = limbs_.rbegin() + 1; it != limbs_.rend(); ++it) {
    std::snprintf(digits.data(), digits.size(), "%09u", *it);
    out.append(digits.data(), 9);
  }
  return out;
}

BigUint BigUint::factorial(std::uint64_t n) {
  BigUint result(1);
  for (std::uint64_t k = 2; k <= n; ++k) result.mul_small(k);
  return result;
}

BigUint BigUint::pow2(std::uint64_t n) {
  BigUint result(1);
  while (n >= 30) {
    result.mul_small(1ull << 30);
    n -= 30;
  }
  if (n > 0) result.mul_small(1ull << n);
  return result;
}

}  // namespace speechenc
