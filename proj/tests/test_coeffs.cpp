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

#include <ffhybrid/coeffs.hpp>
#include <ffhybrid/hybrid.hpp>

#include "oracles.hpp"

using namespace ffh;

namespace {
Poly P(const FieldPtr& f, std::vector<Elem> c) { return Poly(f, std::move(c)); }

bool is_smooth(const Factorization& fz, int x) {
    for (const auto& pp : fz.factors)
        if (pp.prime.degree() > x) return false;
    return true;
}
}  // namespace

TEST(CoefficientSystem, LocalValues) {
    auto a2 = CoefficientSystem::alpha(2, 4);
    EXPECT_EQ(a2.local(1, 1), 2);
    EXPECT_EQ(a2.local(4, 1), 2);
    EXPECT_EQ(a2.local(5, 1), 0);
    auto a1 = CoefficientSystem::alpha(1, 4);
    EXPECT_EQ(a1.local(3, 2), Rational(1, 2));
    EXPECT_EQ(a1.local(2, 2), 1);
    for (unsigned r = 0; r < 12; ++r) {
        Rational closed = Rational(2, 3) * (1 - rpow(Rational(-1, 2), r / 2 + 1));
        EXPECT_EQ(a1.local(3, r), closed) << r;
    }
    auto b = CoefficientSystem::beta(4);
    EXPECT_EQ(b.local(1, 1), -2);
    EXPECT_EQ(b.local(2, 2), 1);
    EXPECT_EQ(b.local(3, 2), 2);
    EXPECT_EQ(b.local(3, 3), 0);
    EXPECT_EQ(b.local(5, 1), 0);
    auto m = CoefficientSystem::alpha_minus1(5);
    EXPECT_EQ(m.local(2, 1), -1);
    EXPECT_EQ(m.local(2, 2), 0);
    EXPECT_EQ(m.local(3, 2), Rational(1, 2));
    EXPECT_EQ(m.local(3, 3), Rational(-1, 2));
    EXPECT_EQ(m.local(3, 4), 0);
    EXPECT_THROW(CoefficientSystem::beta(0), std::invalid_argument);
}

TEST(CoefficientSystem, AlphaMatchesEulerProductExpansion) {
    auto f = FiniteField::make(2);
    for (int x = 1; x <= 8; ++x)
        for (unsigned k = 0; k <= 3; ++k) {
            auto sys = CoefficientSystem::alpha(k, x);
            auto expect = oracle::euler_product_expansion(f, x, k, 6);
            for (int n = 0; n <= 6; ++n)
                for (std::uint64_t low = 0; low < ipow(2, unsigned(n)); ++low) {
                    Poly a = monic_of_degree(f, n, low);
                    auto it = expect.find(a.index());
                    const Rational want = it == expect.end() ? Rational(0) : it->second;
                    ASSERT_EQ(sys.coeff(a), want) << "X=" << x << " k=" << k << " A=" << to_text(a);
                }
        }
}

TEST(CoefficientSystem, AlphaBoundsAgainstDivisorFunction) {
    auto f = FiniteField::make(2);
    for (int x = 1; x <= 8; ++x)
        for (unsigned k = 1; k <= 3; ++k) {
            auto sys = CoefficientSystem::alpha(k, x);
            for (int n = 1; n <= 6; ++n)
                for (std::uint64_t low = 0; low < ipow(2, unsigned(n)); ++low) {
                    Poly a = monic_of_degree(f, n, low);
                    auto fz = factorize(a);
                    if (!is_smooth(fz, x)) {
                        ASSERT_EQ(sys.coeff(a), 0);
                        continue;
                    }
                    const Rational c = sys.coeff(a), d = Rational(divisor_k(fz, k));
                    ASSERT_GE(c, 0);
                    ASSERT_LE(c, d);
                    const bool prime = fz.factors.size() == 1 && fz.factors[0].exponent == 1;
                    const bool half_smooth = is_smooth(fz, x / 2);
                    if (prime || half_smooth) {
                        ASSERT_EQ(c, d) << to_text(a);
                    }
                }
        }
}

TEST(CoefficientSystem, MemoAndMultiplicativity) {
    auto f = FiniteField::make(3);
    auto sys = CoefficientSystem::beta(3);
    Poly t = P(f, {0, 1}), t1 = P(f, {1, 1}), q2 = P(f, {1, 0, 1});
    EXPECT_EQ(sys.coeff(t * t1), 4);
    EXPECT_EQ(sys.coeff(t * t * q2), -2);
    EXPECT_EQ(sys.coeff(t * t * t), 0);
    EXPECT_EQ(sys.coeff(t * t * t), 0);
    EXPECT_EQ(sys.coeff(Poly::one(f)), 1);
    EXPECT_THROW(sys.coeff(P(f, {0, 2})), PolyError);
}

TEST(PSeries, TruncationZeroIsOne) {
    auto f = FiniteField::make(3);
    UnitGroup g(P(f, {1, 0, 1}));
    PrimeTable primes(f, 4);
    auto chi = g.character(1);
    EXPECT_EQ(p_series_eval(CoefficientSystem::alpha(1, 2), g, chi, 0.5, 0, primes), std::complex<double>(1.0));
}

TEST(PSeries, MatchesExpansionAndConvergesToProduct) {
    auto f = FiniteField::make(2);
    Poly r = P(f, {1, 0, 1, 0, 0, 1});
    UnitGroup g(r);
    PrimeTable primes(f, 16);
    for (unsigned k = 1; k <= 2; ++k)
        for (int x : {2, 3}) {
            auto sys = CoefficientSystem::alpha(k, x);
            auto chi = g.character(7);
            // Exact Dirichlet series through degree 6.
            auto ex = oracle::euler_product_expansion(f, x, k, 6);
            std::complex<double> want = 0;
            for (const auto& [idx, c] : ex) {
                Poly a = Poly::from_index(f, idx);
                want += to_double(c) * g.evaluate(chi, a).value() * std::pow(2.0, -0.5 * a.degree());
            }
            EXPECT_NEAR(std::abs(p_series_eval(sys, g, chi, 0.5, 6, primes) - want), 0.0, 1e-12);
            // Tail shrinks toward the closed Euler product where it converges absolutely.
            const auto limit = p_series_product(sys, g, chi, 1.0, primes);
            double prev = 1e300;
            for (int n : {4, 8, 12, 16}) {
                const double err = std::abs(p_series_eval(sys, g, chi, 1.0, n, primes) - limit);
                EXPECT_LT(err, prev) << n;
                prev = err;
            }
            EXPECT_LT(prev, 1e-2);
        }
}

TEST(PSeries, SmoothTermsAgreeWithCoeff) {
    auto f = FiniteField::make(3);
    PrimeTable primes(f, 4);
    auto sys = CoefficientSystem::alpha_minus1(3);
    std::size_t nonzero = 0;
    for (int n = 0; n <= 4; ++n)
        for (std::uint64_t low = 0; low < ipow(3, unsigned(n)); ++low) nonzero += sys.coeff(monic_of_degree(f, n, low)) != 0;
    auto terms = smooth_terms(sys, primes, 4);
    EXPECT_EQ(terms.size(), nonzero);
    for (const auto& t : terms) EXPECT_EQ(t.coeff, sys.coeff(t.a));
}

TEST(PSeries, PolynomialFactorsEqualFullSeries) {
    // beta and alpha_-1 have finitely many terms, so a long enough truncation is exact.
    auto f = FiniteField::make(2);
    UnitGroup g(P(f, {1, 1, 0, 1}));
    PrimeTable primes(f, 3);
    auto chi = g.character(3);
    for (auto sys : {CoefficientSystem::beta(2), CoefficientSystem::alpha_minus1(3)}) {
        const auto full = p_series_eval(sys, g, chi, 0.5, 40, primes);
        EXPECT_NEAR(std::abs(full - p_series_product(sys, g, chi, 0.5, primes)), 0.0, 1e-12);
    }
}

TEST(PSeries, InverseSquareGapShrinksWithX) {
    auto f = FiniteField::make(2);
    Poly r = P(f, {1, 0, 1, 0, 0, 1});
    UnitGroup g(r);
    PrimeTable primes(f, 12);
    std::vector<double> gaps;
    for (int x = 4; x <= 12; ++x) {
        double gap = 0;
        for (const auto& chi : g.primitive_characters()) {
            const auto px = p_x_eval(g, chi, 0.5, x, primes);
            const auto pss = p_series_product(CoefficientSystem::beta(x), g, chi, 0.5, primes);
            gap += std::abs(1.0 / (px * px) / pss - 1.0);
        }
        gaps.push_back(gap / double(g.order() - 1));
    }
    EXPECT_LT(gaps.back(), 0.25 * gaps.front());
    for (std::size_t i = 2; i < gaps.size(); ++i) EXPECT_LT(gaps[i], gaps[i - 2]) << "X=" << i + 4;
}
