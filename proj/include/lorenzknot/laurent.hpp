#pragma once

#include <map>
#include <string>

#include "lorenzknot/bigint.hpp"

namespace lorenzknot {

/// Laurent polynomial with exact integer coefficients. The formal variable
/// is context-dependent: t for Alexander polynomials, the quarter power
/// t^(1/4) for the bracket/Jones family (exponents then count quarters).
class Laurent {
  public:
    Laurent() = default;
    explicit Laurent(long long c, int exponent = 0);
    static Laurent term(BigInt c, int exponent);

    bool is_zero() const { return coeffs_.empty(); }
    int min_exp() const;
    int max_exp() const;
    BigInt coeff(int exponent) const;
    const std::map<int, BigInt>& terms() const { return coeffs_; }

    Laurent operator+(const Laurent& o) const;
    Laurent operator-(const Laurent& o) const;
    Laurent operator*(const Laurent& o) const;
    Laurent operator-() const;
    bool operator==(const Laurent& o) const { return coeffs_ == o.coeffs_; }
    bool operator!=(const Laurent& o) const { return !(*this == o); }

    /// Multiplies by t^k.
    Laurent shifted(int k) const;

    /// Substitutes t -> t^-1.
    Laurent inverted() const;

    /// Exact division; throws std::logic_error if not divisible.
    Laurent div_exact(const Laurent& o) const;

    /// Evaluation at an integer point (e.g. t = 1 or t = -1); requires
    /// min_exp >= 0 after shifting, so callers evaluate |value| = 1 safely
    /// through the symmetric normal form.
    BigInt eval_at_one() const;
    BigInt eval_at_minus_one() const;

    /// Human-readable form like "t^-1 - 1 + t".
    std::string to_string(const std::string& var = "t") const;

  private:
    std::map<int, BigInt> coeffs_;  // exponent -> nonzero coefficient
    void put(int e, BigInt c);
};

/// Normal form for Alexander polynomials: multiplied by ±t^k so that the
/// exponents are symmetric about zero and the leading coefficient is
/// positive. Throws std::logic_error if the input is not palindromic up to
/// sign (every knot Alexander polynomial is).
Laurent alexander_normal_form(const Laurent& raw);

}  // namespace lorenzknot
