#include "lorenzknot/bigint.hpp"

#include <algorithm>
#include <stdexcept>

namespace lorenzknot {

BigInt::BigInt(long long v) {
    negative_ = v < 0;
    unsigned long long u = negative_ ? -static_cast<unsigned long long>(v)
                                     : static_cast<unsigned long long>(v);
    while (u) {
        limbs_.push_back(static_cast<uint32_t>(u));
        u >>= 32;
    }
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) negative_ = false;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r(std::max(a.size(), b.size()) + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        uint64_t s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        r[i] = static_cast<uint32_t>(s);
        carry = s >> 32;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t>& a,
                                      const std::vector<uint32_t>& b) {
    std::vector<uint32_t> r = a;
    int64_t borrow = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        int64_t s = static_cast<int64_t>(r[i]) - borrow - (i < b.size() ? b[i] : 0);
        borrow = s < 0;
        if (s < 0) s += (1LL << 32);
        r[i] = static_cast<uint32_t>(s);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    if (!r.limbs_.empty()) r.negative_ = !r.negative_;
    return r;
}

BigInt BigInt::operator+(const BigInt& o) const {
    BigInt r;
    if (negative_ == o.negative_) {
        r.negative_ = negative_;
        r.limbs_ = add_mag(limbs_, o.limbs_);
    } else {
        const int c = cmp_mag(limbs_, o.limbs_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.negative_ = negative_;
            r.limbs_ = sub_mag(limbs_, o.limbs_);
        } else {
            r.negative_ = o.negative_;
            r.limbs_ = sub_mag(o.limbs_, limbs_);
        }
    }
    r.trim();
    return r;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
    if (is_zero() || o.is_zero()) return BigInt();
    BigInt r;
    r.negative_ = negative_ != o.negative_;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < o.limbs_.size(); ++j) {
            uint64_t s = static_cast<uint64_t>(limbs_[i]) * o.limbs_[j] + r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<uint32_t>(s);
            carry = s >> 32;
        }
        size_t k = i + o.limbs_.size();
        while (carry) {
            uint64_t s = static_cast<uint64_t>(r.limbs_[k]) + carry;
            r.limbs_[k] = static_cast<uint32_t>(s);
            carry = s >> 32;
            ++k;
        }
    }
    r.trim();
    return r;
}

BigInt BigInt::div_exact(const BigInt& o) const {
    if (o.is_zero()) throw std::logic_error("BigInt: division by zero");
    if (is_zero()) return BigInt();
    // Schoolbook long division on magnitudes, most significant limb first.
    std::vector<uint32_t> rem;  // big-endian remainder window
    std::vector<uint32_t> quo(limbs_.size(), 0);
    const auto ge = [&](const std::vector<uint32_t>& a) {  // rem >= o (both trimmed)
        const size_t n = o.limbs_.size();
        if (a.size() != n) return a.size() > n;
        for (size_t i = 0; i < n; ++i) {
            const uint32_t x = a[i], y = o.limbs_[n - 1 - i];
            if (x != y) return x > y;
        }
        return true;
    };
    for (size_t pos = limbs_.size(); pos-- > 0;) {
        rem.push_back(limbs_[pos]);
        while (rem.size() > 1 && rem.front() == 0) rem.erase(rem.begin());
        // Binary search the quotient digit.
        uint64_t lo = 0, hi = 0xFFFFFFFFull;
        const auto fits = [&](uint64_t q) {
            // compare q*o with rem
            std::vector<uint32_t> prod(o.limbs_.size() + 2, 0);
            uint64_t carry = 0;
            for (size_t j = 0; j < o.limbs_.size(); ++j) {
                uint64_t s = q * o.limbs_[j] + carry;
                prod[j] = static_cast<uint32_t>(s);
                carry = s >> 32;
            }
            size_t k = o.limbs_.size();
            while (carry) {
                prod[k++] = static_cast<uint32_t>(carry);
                carry >>= 32;
            }
            while (!prod.empty() && prod.back() == 0) prod.pop_back();
            if (prod.size() != rem.size()) return prod.size() < rem.size();
            // prod is little-endian, rem big-endian: compare most significant first.
            for (size_t i = prod.size(); i-- > 0;) {
                const uint32_t x = prod[i], y = rem[rem.size() - 1 - i];
                if (x != y) return x < y;
            }
            return true;
        };
        (void)ge;
        while (lo < hi) {
            const uint64_t mid = (lo + hi + 1) / 2;
            if (fits(mid)) lo = mid;
            else hi = mid - 1;
        }
        quo[pos] = static_cast<uint32_t>(lo);
        if (lo) {
            // rem -= lo * o  (big-endian rem)
            std::vector<uint32_t> little(rem.rbegin(), rem.rend());
            BigInt tmp, div;
            tmp.limbs_ = little;
            tmp.trim();
            div.limbs_ = o.limbs_;
            BigInt prod = div * BigInt(static_cast<long long>(lo));
            BigInt left = tmp - prod;
            rem.assign(left.limbs_.rbegin(), left.limbs_.rend());
        }
        if (rem.size() == 1 && rem[0] == 0) rem.clear();
    }
    if (!rem.empty()) throw std::logic_error("BigInt: division is not exact");
    BigInt r;
    r.negative_ = negative_ != o.negative_;
    r.limbs_ = std::move(quo);
    r.trim();
    return r;
}

bool BigInt::operator<(const BigInt& o) const {
    if (negative_ != o.negative_) return negative_;
    const int c = cmp_mag(limbs_, o.limbs_);
    return negative_ ? c > 0 : c < 0;
}

std::string BigInt::to_string() const {
    if (is_zero()) return "0";
    std::vector<uint32_t> work = limbs_;
    std::string digits;
    while (!work.empty()) {
        uint64_t rem = 0;
        for (size_t i = work.size(); i-- > 0;) {
            const uint64_t cur = (rem << 32) | work[i];
            work[i] = static_cast<uint32_t>(cur / 10);
            rem = cur % 10;
        }
        digits.push_back(static_cast<char>('0' + rem));
        while (!work.empty() && work.back() == 0) work.pop_back();
    }
    if (negative_) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

long long BigInt::to_ll() const {
    if (limbs_.size() > 2) throw std::overflow_error("BigInt: does not fit in long long");
    unsigned long long u = 0;
    for (size_t i = limbs_.size(); i-- > 0;) u = (u << 32) | limbs_[i];
    if (u > static_cast<unsigned long long>(negative_ ? (1ull << 63) : (1ull << 63) - 1))
        throw std::overflow_error("BigInt: does not fit in long long");
    return negative_ ? -static_cast<long long>(u) : static_cast<long long>(u);
}

}  // namespace lorenzknot
