#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lorenzknot {

/// Arbitrary-precision signed integer, sign-magnitude over 32-bit limbs.
/// Supports exactly what fraction-free determinant elimination needs:
/// add, subtract, multiply, exact division, comparison.
class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v);

    bool is_zero() const { return limbs_.empty(); }
    int sign() const { return limbs_.empty() ? 0 : (negative_ ? -1 : 1); }

    BigInt operator-() const;
    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    /// Quotient of an exact division; throws std::logic_error on nonzero
    /// remainder (elimination pivots must divide exactly).
    BigInt div_exact(const BigInt& o) const;

    bool operator==(const BigInt& o) const {
        return negative_ == o.negative_ && limbs_ == o.limbs_;
    }
    bool operator!=(const BigInt& o) const { return !(*this == o); }
    bool operator<(const BigInt& o) const;

    std::string to_string() const;

    /// Value as long long; throws std::overflow_error if it does not fit.
    long long to_ll() const;

  private:
    bool negative_{false};
    std::vector<uint32_t> limbs_;  // little-endian, no trailing zeros

    static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t>& a,
                                         const std::vector<uint32_t>& b);  // a >= b
    void trim();
};

}  // namespace lorenzknot
