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


#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "rational.hpp"

namespace ffh {

/// G_i = (A_i, B_i) and V[i][j] for i != j, indices 0..2. A_i = G_i V_ij V_ik and
/// B_j = G_j V_ij V_kj. Diagonal entries of v are unused and hold 1.
struct TripleSplit {
    std::array<Poly, 3> g;
    std::array<std::array<Poly, 3>, 3> v;
};

inline bool coprime(const Poly& a, const Poly& b) { return gcd(a, b).is_one(); }

namespace detail {
inline Poly exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw std::logic_error("inexact division in triple decomposition");
    return q;
}
}  // namespace detail

/// The unique split of A1 A2 A3 = B1 B2 B3, with V_ij = (B^_j, B^_i B^_j / A^_k).
inline TripleSplit decompose_triple_product(const std::array<Poly, 3>& a, const std::array<Poly, 3>& b) {
    for (const auto& p : a)
        if (!p.is_monic()) throw PolyError("triple decomposition needs monic inputs");
    for (const auto& p : b)
        if (!p.is_monic()) throw PolyError("triple decomposition needs monic inputs");
    if (a[0] * a[1] * a[2] != b[0] * b[1] * b[2]) throw std::invalid_argument("A1 A2 A3 != B1 B2 B3");
    const auto& f = a[0].field();
    TripleSplit out;
    std::array<Poly, 3> ah{Poly(f), Poly(f), Poly(f)}, bh = ah;
    for (int i = 0; i < 3; ++i) {
        out.g[i] = gcd(a[i], b[i]);
        ah[i] = detail::exact_div(a[i], out.g[i]);
        bh[i] = detail::exact_div(b[i], out.g[i]);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) {
                out.v[i][j] = Poly::one(f);
                continue;
            }
            const int k = 3 - i - j;
            out.v[i][j] = gcd(bh[j], detail::exact_div(bh[i] * bh[j], ah[k]));
        }
    return out;
}

/// (V_ij, V_kl) = 1 whenever i != k and j != l.
inline bool split_is_valid(const TripleSplit& s) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    if (i == j || k == l || i == k || j == l) continue;
                    if (!coprime(s.v[i][j], s.v[k][l])) return false;
                }
    return true;
}

inline std::pair<std::array<Poly, 3>, std::array<Poly, 3>> compose_triple(const TripleSplit& s) {
    if (!split_is_valid(s)) throw std::invalid_argument("V blocks violate the coprimality conditions");
    std::array<Poly, 3> a = s.g, b = s.g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) {
                a[i] *= s.v[i][j];
                b[j] *= s.v[i][j];
            }
    return {a, b};
}

/// 2^(omega(V) - omega((V, V13 V23 V31 V32))).
inline std::uint64_t count_coprime_splittings(const Poly& v, const Poly& v13, const Poly& v23, const Poly& v31, const Poly& v32) {
    if (!coprime(v13, v31 * v32) || !coprime(v23, v31 * v32) || !coprime(v, gcd(v13 * v31, v23 * v32)))
        throw std::invalid_argument("coprimality hypotheses of the splitting count fail");
    const unsigned w = omega(v), shared = omega(gcd(v, v13 * v23 * v31 * v32));
    return std::uint64_t(1) << (w - shared);
}

/// Direct count of monic V12 V21 = V with (V12, V23 V31) = (V21, V13 V32) = (V12, V21) = 1.
inline std::uint64_t enumerate_coprime_splittings(const Poly& v, const Poly& v13, const Poly& v23, const Poly& v31, const Poly& v32) {
    const auto& f = v.field();
    std::uint64_t n = 0;
    for (const Poly& v12 : divisors(factorize(v), f)) {
        const Poly v21 = detail::exact_div(v, v12);
        if (coprime(v12, v23 * v31) && coprime(v21, v13 * v32) && coprime(v12, v21)) ++n;
    }
    return n;
}

/// gamma(A) = prod_{P | A} (1 + e_P(A) (1 - |P|^-1) / (1 + |P|^-1)).
inline Rational gamma_weight(const Factorization& fz, std::uint64_t q) {
    Rational out = 1;
    for (const auto& pp : fz.factors) {
        const Rational x = inv_power(q, unsigned(pp.prime.degree()));
        out *= 1 + Rational(pp.exponent) * (1 - x) / (1 + x);
    }
    return out;
}

inline Rational gamma_weight(const Poly& a) {
    if (!a.is_monic()) throw PolyError("gamma_weight needs a monic polynomial");
    return gamma_weight(factorize(a), a.field()->q());
}

struct GammaIdentity {
    Rational factorization_sum;
    Rational gamma;
};

/// Sum over ordered V13 V23 = B of prod_{P | B} (1-|P|^-1)/(1+|P|^-1) times
/// prod_{P | B, P not dividing (V13, V23)} 1/(1-|P|^-1), against gamma(B).
inline GammaIdentity gamma_identity_check(const Poly& b) {
    if (!b.is_monic()) throw PolyError("gamma identity needs a monic polynomial");
    const auto& f = b.field();
    const std::uint64_t q = f->q();
    const auto fz = factorize(b);
    Rational base = 1;
    for (const auto& pp : fz.factors) {
        const Rational x = inv_power(q, unsigned(pp.prime.degree()));
        base *= (1 - x) / (1 + x);
    }
    Rational sum = 0;
    for (const Poly& v13 : divisors(fz, f)) {
        const Poly v23 = b / v13;
        const Poly common = gcd(v13, v23);
        Rational term = base;
        for (const auto& pp : fz.factors)
            if (!(common % pp.prime).is_zero()) term /= 1 - inv_power(q, unsigned(pp.prime.degree()));
        sum += term;
    }
    return {sum, gamma_weight(fz, q)};
}

}  // namespace ffh
