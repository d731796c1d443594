/*
   Copyright 2026 The ffhybrid Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include <gtest/gtest.h>

#include <ffhybrid/arith.hpp>

using namespace ffh;

namespace {
Poly P(const FieldPtr& f, std::vector<Elem> c) { return Poly(f, std::move(c)); }

// Brute force: no monic divisor of degree in [1, deg f / 2].
bool irreducible_by_search(const Poly& f) {
    const auto& fld = f.field();
    for (int d = 1; d <= f.degree() / 2; ++d)
        for (std::uint64_t low = 0; low < ipow(fld->q(), unsigned(d)); ++low)
            if ((f % monic_of_degree(fld, d, low)).is_zero()) return false;
    return true;
}
}  // namespace

TEST(Irreducible, Examples) {
    auto f3 = FiniteField::make(3), f5 = FiniteField::make(5);
    EXPECT_TRUE(is_irreducible(P(f3, {1, 0, 1})));
    EXPECT_FALSE(is_irreducible(P(f5, {1, 0, 1})));
    for (unsigned q : {2u, 3u, 4u, 7u}) EXPECT_TRUE(is_irreducible(Poly::monomial(FiniteField::make(q), 1)));
    EXPECT_THROW(is_irreducible(Poly::one(f3)), PolyError);
    EXPECT_THROW(is_irreducible(Poly(f3)), PolyError);
}

TEST(Irreducible, MatchesDivisorSearch) {
    for (unsigned q : {2u, 3u, 4u}) {
        auto f = FiniteField::make(q);
        for (int n = 1; n <= 6; ++n) {
            if (q == 4 && n > 4) break;
            for (std::uint64_t low = 0; low < ipow(q, unsigned(n)); ++low) {
                Poly g = monic_of_degree(f, n, low);
                ASSERT_EQ(is_irreducible(g), irreducible_by_search(g)) << to_text(g);
            }
        }
    }
}

TEST(Primes, CountFormula) {
    EXPECT_EQ(prime_count(2, 2), 1u);
    EXPECT_EQ(prime_count(3, 2), 3u);
    EXPECT_EQ(prime_count(2, 4), 3u);
    EXPECT_THROW(prime_count(2, 0), std::invalid_argument);
    auto f2 = FiniteField::make(2);
    auto only = primes_of_degree(f2, 2);
    ASSERT_EQ(only.size(), 1u);
    EXPECT_EQ(only[0], P(f2, {1, 1, 1}));
}

TEST(Primes, SieveAgreesWithFormulaAndTest) {
    for (unsigned q : {2u, 3u, 5u}) {
        auto f = FiniteField::make(q);
        PrimeTable table(f, 6);
        for (unsigned n = 1; n <= 6; ++n) {
            EXPECT_EQ(table.of_degree(n).size(), prime_count(q, n)) << "q=" << q << " n=" << n;
            if (q == 5 && n > 4) {
                continue;
            }
            for (const auto& p : table.of_degree(n)) ASSERT_TRUE(is_irreducible(p));
        }
    }
}

TEST(Primes, VonMangoldtSum) {
    // sum over monic f of degree n of Lambda(f)/log q equals q^n.
    for (unsigned q : {2u, 3u}) {
        auto f = FiniteField::make(q);
        for (unsigned n = 1; n <= 8; ++n) {
            if (q == 3 && n > 7) break;
            std::uint64_t s = 0;
            for (std::uint64_t low = 0; low < ipow(q, n); ++low) s += von_mangoldt(monic_of_degree(f, int(n), low));
            EXPECT_EQ(s, ipow(q, n)) << "q=" << q << " n=" << n;
        }
    }
}

TEST(Factorize, Examples) {
    auto f3 = FiniteField::make(3), f2 = FiniteField::make(2);
    auto a = factorize(P(f3, {1, 2, 1}));
    ASSERT_EQ(a.factors.size(), 1u);
    EXPECT_EQ(a.factors[0].prime, P(f3, {1, 1}));
    EXPECT_EQ(a.factors[0].exponent, 2u);
    auto b = factorize(P(f2, {0, 1, 1}));
    ASSERT_EQ(b.factors.size(), 2u);
    EXPECT_EQ(b.factors[0].prime, P(f2, {0, 1}));
    EXPECT_EQ(b.factors[1].prime, P(f2, {1, 1}));
    auto c = factorize(P(f3, {1, 0, 1}));
    ASSERT_EQ(c.factors.size(), 1u);
    EXPECT_EQ(c.factors[0].exponent, 1u);
    EXPECT_THROW(factorize(Poly(f3)), PolyError);
    auto d = factorize(P(f3, {2, 0, 2}));
    EXPECT_EQ(d.unit, 2u);
    EXPECT_EQ(d.product(f3), P(f3, {2, 0, 2}));
}

TEST(Factorize, ReconstructsExhaustively) {
    for (unsigned q : {2u, 3u}) {
        auto f = FiniteField::make(q);
        for (int n = 1; n <= 6; ++n)
            for (std::uint64_t low = 0; low < ipow(q, unsigned(n)); ++low) {
                Poly g = monic_of_degree(f, n, low);
                auto fz = factorize(g);
                ASSERT_EQ(fz.product(f), g) << to_text(g);
                for (std::size_t i = 0; i < fz.factors.size(); ++i) {
                    ASSERT_TRUE(fz.factors[i].prime.is_monic());
                    ASSERT_TRUE(is_irreducible(fz.factors[i].prime));
                    ASSERT_GE(fz.factors[i].exponent, 1u);
                    if (i) {
                        ASSERT_TRUE(fz.factors[i - 1].prime < fz.factors[i].prime);
                    }
                }
            }
    }
}

TEST(Factorize, ExtensionFieldsAndHighPowers) {
    for (unsigned q : {4u, 8u, 9u, 25u}) {
        auto f = FiniteField::make(q);
        PrimeTable t(f, 2);
        Poly g = pow(t.of_degree(1)[1], q + 1) * t.of_degree(2)[0] * pow(t.of_degree(2).back(), 3);
        auto fz = factorize(g);
        EXPECT_EQ(fz.product(f), g);
        EXPECT_EQ(fz.factors.size(), 3u);
    }
}

TEST(ArithmeticFunctions, Values) {
    auto f3 = FiniteField::make(3);
    Poly t = P(f3, {0, 1}), t1 = P(f3, {1, 1}), t2 = P(f3, {2, 1});
    EXPECT_EQ(mobius(Poly::one(f3)), 1);
    EXPECT_EQ(mobius(t * t * t1), 0);
    EXPECT_EQ(mobius(t * t1), 1);
    EXPECT_EQ(mobius(t * t1 * t2), -1);
    EXPECT_EQ(euler_phi(t * t), 6u);
    EXPECT_EQ(divisor_k(t * t, 2), 3);
    EXPECT_EQ(divisor_k(t * t * t1, 3), 6 * 3);
    EXPECT_EQ(von_mangoldt(t * t * t), 1u);
    EXPECT_EQ(von_mangoldt(t * t1), 0u);
    EXPECT_EQ(omega(t * t * t1), 2u);
    EXPECT_EQ(radical(t * t * t1), t * t1);
    EXPECT_THROW(mobius(P(f3, {0, 2})), PolyError);
}

TEST(ArithmeticFunctions, PhiMatchesUnitCount) {
    for (unsigned q : {2u, 3u}) {
        auto f = FiniteField::make(q);
        for (int n = 1; n <= 4; ++n)
            for (std::uint64_t low = 0; low < ipow(q, unsigned(n)); ++low) {
                Poly r = monic_of_degree(f, n, low);
                std::uint64_t units = 0;
                for (std::uint64_t i = 0; i < ipow(q, unsigned(n)); ++i)
                    units += gcd(Poly::from_index(f, i), r).is_one();
                ASSERT_EQ(euler_phi(r), units) << to_text(r);
                ASSERT_EQ(std::int64_t(phi_star(r)), phi_star_divisor_sum(r));
            }
    }
}

TEST(ArithmeticFunctions, PhiMultiplicativeAndPrimePowers) {
    auto f = FiniteField::make(3);
    PrimeTable t(f, 2);
    for (const auto& a : t.up_to(2))
        for (const auto& b : t.up_to(2)) {
            if (a == b) continue;
            EXPECT_EQ(euler_phi(a * b), euler_phi(a) * euler_phi(b));
        }
    for (const auto& p : t.up_to(2))
        for (unsigned k = 1; k <= 2; ++k) {
            const std::uint64_t np = ipow(3, unsigned(p.degree()));
            EXPECT_EQ(euler_phi(pow(p, k)), ipow(np, k) - ipow(np, k - 1));
        }
}

TEST(ArithmeticFunctions, DivisorsAndPhiStar) {
    auto f = FiniteField::make(3);
    Poly t = P(f, {0, 1}), t1 = P(f, {1, 1});
    EXPECT_EQ(divisors(factorize(t * t * t1), f).size(), 6u);
    EXPECT_EQ(phi_star(t), 1u);
    EXPECT_EQ(phi_star(t * t1), 1u);
    EXPECT_EQ(phi_star(Poly(FiniteField::make(5), {0, 0, 1})), 16u);
    EXPECT_EQ(phi_star(Poly(FiniteField::make(2), {0, 1})), 0u);
}
