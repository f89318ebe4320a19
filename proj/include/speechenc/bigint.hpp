#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace speechenc {

// Unsigned big integer over base-1e9 limbs; just enough arithmetic for the
// exact factorial and power-of-two counts in key-space reports.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(std::uint64_t value);

  void mul_small(std::uint64_t factor);  // factor < 2^31

  std::string to_string() const;

  bool operator==(const BigUint& other) const { return limbs_ == other.limbs_; }

  static BigUint factorial(std::uint64_t n);
  static BigUint pow2(std::uint64_t n);

 private:
  std::vector<std::uint32_t> limbs_;  // little-endian, each < 1e9
};

}  // namespace speechenc
