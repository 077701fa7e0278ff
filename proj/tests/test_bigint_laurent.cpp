#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lorenzknot/laurent.hpp"

using namespace lorenzknot;

TEST_CASE("bigint arithmetic agrees with __int128 on random values") {
    std::mt19937_64 g(7);
    std::uniform_int_distribution<long long> u(-3'000'000'000LL, 3'000'000'000LL);
    for (int i = 0; i < 2000; ++i) {
        const long long a = u(g), b = u(g);
        CHECK((BigInt(a) + BigInt(b)).to_ll() == a + b);
        CHECK((BigInt(a) - BigInt(b)).to_ll() == a - b);
        const __int128 prod = static_cast<__int128>(a) * b;
        const BigInt p = BigInt(a) * BigInt(b);
        // compare via string to dodge the missing __int128 printer
        __int128 q = prod;
        std::string expect;
        const bool neg = q < 0;
        if (neg) q = -q;
        if (q == 0) expect = "0";
        while (q > 0) {
            expect.push_back(static_cast<char>('0' + static_cast<int>(q % 10)));
            q /= 10;
        }
        if (neg) expect.push_back('-');
        std::reverse(expect.begin(), expect.end());
        CHECK(p.to_string() == expect);
        if (b != 0) CHECK((BigInt(a) * BigInt(b)).div_exact(BigInt(b)).to_ll() == a);
    }
}

TEST_CASE("bigint exact division rejects a remainder") {
    CHECK_THROWS_AS(BigInt(7).div_exact(BigInt(2)), std::logic_error);
    CHECK_THROWS_AS(BigInt(1).div_exact(BigInt(0)), std::logic_error);
    CHECK(BigInt(0).div_exact(BigInt(5)).is_zero());
}

TEST_CASE("bigint handles multi-limb magnitudes") {
    BigInt big(1);
    for (int i = 0; i < 5; ++i) big *= BigInt(1'000'000'000'000'000LL);
    CHECK(big.to_string() == "1" + std::string(75, '0'));
    CHECK(big.div_exact(big).to_ll() == 1);
    CHECK((big - big).is_zero());
    CHECK((big * BigInt(-1) + big).is_zero());
}

TEST_CASE("laurent arithmetic and normal form") {
    const Laurent t(1, 1), one(1);
    const Laurent tref = t + Laurent(-1, 0) + Laurent(1, -1);
    CHECK(tref.to_string() == "t^-1 - 1 + t");
    CHECK((tref * one) == tref);
    CHECK(tref.inverted() == tref);
    CHECK(tref.eval_at_one().to_ll() == 1);

    // (t - 1)^2 = t^2 - 2t + 1, and exact division recovers a factor.
    const Laurent tm1 = t - one;
    const Laurent sq = tm1 * tm1;
    CHECK(sq.coeff(2).to_ll() == 1);
    CHECK(sq.coeff(1).to_ll() == -2);
    CHECK(sq.div_exact(tm1) == tm1);
    CHECK_THROWS_AS(sq.div_exact(t + one), std::logic_error);

    // Normal form centers, symmetrizes, and fixes the leading sign.
    const Laurent raw = Laurent(-1, 5) + Laurent(3, 4) + Laurent(-1, 3);
    const Laurent norm = alexander_normal_form(raw);
    CHECK(norm == (Laurent(1, 1) + Laurent(-3, 0) + Laurent(1, -1)));
}

TEST_CASE("laurent shifted and negation identities") {
    std::mt19937_64 g(13);
    std::uniform_int_distribution<int> ue(-6, 6);
    std::uniform_int_distribution<long long> uc(-9, 9);
    for (int i = 0; i < 200; ++i) {
        Laurent a, b;
        for (int k = 0; k < 4; ++k) {
            a = a + Laurent(uc(g), ue(g));
            b = b + Laurent(uc(g), ue(g));
        }
        CHECK((a + b) - b == a);
        CHECK((a * b) == (b * a));
        CHECK(a.shifted(3).shifted(-3) == a);
        CHECK((-(-a)) == a);
        if (!a.is_zero() && !b.is_zero()) CHECK((a * b).div_exact(b) == a);
    }
}
