#include "lorenzknot/laurent.hpp"

#include <stdexcept>

namespace lorenzknot {

Laurent::Laurent(long long c, int exponent) {
    if (c != 0) coeffs_[exponent] = BigInt(c);
}

Laurent Laurent::term(BigInt c, int exponent) {
    Laurent r;
    if (!c.is_zero()) r.coeffs_[exponent] = std::move(c);
    return r;
}

void Laurent::put(int e, BigInt c) {
    if (c.is_zero()) coeffs_.erase(e);
    else coeffs_[e] = std::move(c);
}

int Laurent::min_exp() const {
    if (coeffs_.empty()) throw std::logic_error("Laurent: zero polynomial has no exponents");
    return coeffs_.begin()->first;
}

int Laurent::max_exp() const {
    if (coeffs_.empty()) throw std::logic_error("Laurent: zero polynomial has no exponents");
    return coeffs_.rbegin()->first;
}

BigInt Laurent::coeff(int exponent) const {
    const auto it = coeffs_.find(exponent);
    return it == coeffs_.end() ? BigInt() : it->second;
}

Laurent Laurent::operator+(const Laurent& o) const {
    Laurent r = *this;
    for (const auto& [e, c] : o.coeffs_) r.put(e, r.coeff(e) + c);
    return r;
}

Laurent Laurent::operator-(const Laurent& o) const {
    Laurent r = *this;
    for (const auto& [e, c] : o.coeffs_) r.put(e, r.coeff(e) - c);
    return r;
}

Laurent Laurent::operator-() const {
    Laurent r;
    for (const auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
    return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
    Laurent r;
    for (const auto& [ea, ca] : coeffs_)
        for (const auto& [eb, cb] : o.coeffs_) r.put(ea + eb, r.coeff(ea + eb) + ca * cb);
    return r;
}

Laurent Laurent::shifted(int k) const {
    Laurent r;
    for (const auto& [e, c] : coeffs_) r.coeffs_[e + k] = c;
    return r;
}

Laurent Laurent::inverted() const {
    Laurent r;
    for (const auto& [e, c] : coeffs_) r.coeffs_[-e] = c;
    return r;
}

Laurent Laurent::div_exact(const Laurent& o) const {
    if (o.is_zero()) throw std::logic_error("Laurent: division by zero");
    if (is_zero()) return Laurent();
    Laurent rem = *this;
    Laurent quo;
    const int eo = o.max_exp();
    const BigInt& co = o.coeffs_.rbegin()->second;
    while (!rem.is_zero()) {
        const int er = rem.max_exp();
        if (er - eo < rem.min_exp() - o.min_exp())
            throw std::logic_error("Laurent: division is not exact (degree)");
        const BigInt q = rem.coeffs_.rbegin()->second.div_exact(co);
        const Laurent t = Laurent::term(q, er - eo);
        quo = quo + t;
        rem = rem - t * o;
        if (!rem.is_zero() && rem.max_exp() >= er)
            throw std::logic_error("Laurent: division did not reduce degree");
    }
    return quo;
}

BigInt Laurent::eval_at_one() const {
    BigInt s;
    for (const auto& [e, c] : coeffs_) s += c;
    return s;
}

BigInt Laurent::eval_at_minus_one() const {
    BigInt s;
    for (const auto& [e, c] : coeffs_) {
        const int em = e % 2;
        s += (em == 0) ? c : -c;
    }
    return s;
}

std::string Laurent::to_string(const std::string& var) const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : coeffs_) {
        std::string mag = c.to_string();
        const bool neg = mag[0] == '-';
        if (neg) mag.erase(0, 1);
        if (out.empty()) out += neg ? "-" : "";
        else out += neg ? " - " : " + ";
        const bool unit_coeff = mag == "1" && e != 0;
        if (!unit_coeff) out += mag;
        if (e != 0) {
            out += var;
            if (e != 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

Laurent alexander_normal_form(const Laurent& raw) {
    if (raw.is_zero()) return raw;
    const int lo = raw.min_exp(), hi = raw.max_exp();
    const int span = hi - lo;
    if (span % 2 != 0)
        throw std::logic_error("alexander_normal_form: odd exponent span");
    Laurent centered = raw.shifted(-(lo + span / 2));
    // Palindromic up to overall sign, by Alexander duality.
    const Laurent flipped = centered.inverted();
    if (centered != flipped && centered != -flipped)
        throw std::logic_error("alexander_normal_form: polynomial is not symmetric");
    if (centered.coeff(centered.max_exp()).sign() < 0) return -centered;
    return centered;
}

}  // namespace lorenzknot
