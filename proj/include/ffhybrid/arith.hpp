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

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poly.hpp"
#include "rational.hpp"

namespace ffh {

/// Deterministic distinct-degree test: f is irreducible iff
/// gcd(T^(q^i) - T, f) = 1 for 1 <= i <= deg f / 2.
inline bool is_irreducible(const Poly& f) {
    if (f.is_zero() || f.degree() < 1) throw PolyError("irreducibility is defined for degree >= 1");
    const Poly g = f.monic();
    const int n = g.degree();
    if (n == 1) return true;
    const Poly t = Poly::monomial(g.field(), 1);
    Poly h = t;
    for (int i = 1; i <= n / 2; ++i) {
        h = powmod(h, g.field()->q(), g);
        if (!gcd(h - t, g).is_one()) return false;
    }
    return true;
}

inline std::int64_t mobius_int(std::uint64_t n) {
    std::int64_t m = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
    }
    return n > 1 ? -m : m;
}

/// |P_n| = (1/n) sum_{d | n} mu(d) q^(n/d).
inline std::uint64_t prime_count(std::uint64_t q, unsigned n) {
    if (n == 0) throw std::invalid_argument("prime_count requires n >= 1");
    std::int64_t s = 0;
    for (unsigned d = 1; d <= n; ++d)
        if (n % d == 0) s += mobius_int(d) * std::int64_t(ipow(q, n / d));
    return std::uint64_t(s / std::int64_t(n));
}

/// Monic primes by degree, from a sieve over residue indices.
/// Primes of each degree are listed in increasing index order.
class PrimeTable {
   public:
    PrimeTable(FieldPtr f, unsigned max_degree) : f_(std::move(f)), by_degree_(max_degree + 1) {
        const std::uint64_t q = f_->q();
        for (unsigned n = 1; n <= max_degree; ++n) {
            const std::uint64_t count = ipow(q, n);
            std::vector<bool> composite(count, false);
            for (unsigned d = 1; d <= n / 2; ++d) {
                const std::uint64_t cofactors = ipow(q, n - d);
                for (const Poly& p : by_degree_[d])
                    for (std::uint64_t b = 0; b < cofactors; ++b) {
                        Poly prod = p * monic_of_degree(f_, int(n - d), b);
                        composite[prod.index() - count] = true;
                    }
            }
            for (std::uint64_t low = 0; low < count; ++low)
                if (!composite[low]) by_degree_[n].push_back(monic_of_degree(f_, int(n), low));
        }
    }

    const FieldPtr& field() const noexcept { return f_; }
    unsigned max_degree() const noexcept { return unsigned(by_degree_.size()) - 1; }

    const std::vector<Poly>& of_degree(unsigned n) const {
        if (n == 0 || n > max_degree()) throw std::out_of_range("prime degree outside the table");
        return by_degree_[n];
    }

    /// All primes of degree <= n in degree-then-index order.
    std::vector<Poly> up_to(unsigned n) const {
        std::vector<Poly> out;
        for (unsigned d = 1; d <= n; ++d) out.insert(out.end(), by_degree_[d].begin(), by_degree_[d].end());
        return out;
    }

   private:
    FieldPtr f_;
    std::vector<std::vector<Poly>> by_degree_;
};

inline std::vector<Poly> primes_of_degree(const FieldPtr& f, unsigned n) {
    if (n == 0) throw std::invalid_argument("primes_of_degree requires n >= 1");
    return PrimeTable(f, n).of_degree(n);
}

struct PrimePower {
    Poly prime;
    unsigned exponent;
};

struct Factorization {
    Elem unit = 1;
    std::vector<PrimePower> factors;  ///< sorted in canonical order, primes distinct

    Poly product(const FieldPtr& f) const {
        Poly r = Poly::constant(f, unit);
        for (const auto& pp : factors) r *= pow(pp.prime, pp.exponent);
        return r;
    }
};

namespace detail {

// Multiplicity-tagged squarefree parts of a monic polynomial.
inline void squarefree_parts(const Poly& f, unsigned mult, std::vector<std::pair<Poly, unsigned>>& out) {
    if (f.degree() < 1) return;
    const auto& field = f.field();
    const Poly df = f.derivative();
    if (df.is_zero()) {
        // f = g^p: take p-th roots of the coefficients at exponents divisible by p.
        std::vector<Elem> c;
        for (std::size_t i = 0; i < f.coeffs().size(); i += field->p()) c.push_back(field->pth_root(f.coeffs()[i]));
        squarefree_parts(Poly(field, std::move(c)), mult * field->p(), out);
        return;
    }
    Poly c = gcd(f, df);
    Poly w = f / c;
    unsigned i = 1;
    while (!w.is_one()) {
        Poly y = gcd(w, c);
        Poly fac = w / y;
        if (fac.degree() > 0) out.push_back({fac.monic(), i * mult});
        w = y;
        c = c / y;
        ++i;
    }
    if (c.degree() > 0) {
        std::vector<Elem> r;
        for (std::size_t k = 0; k < c.coeffs().size(); k += field->p()) r.push_back(field->pth_root(c.coeffs()[k]));
        squarefree_parts(Poly(field, std::move(r)).monic(), mult * field->p(), out);
    }
}

// Splits a squarefree monic g whose irreducible factors all have degree d.
inline void equal_degree_split(const Poly& g, int d, std::vector<Poly>& out) {
    if (g.degree() == d) {
        out.push_back(g);
        return;
    }
    const auto& f = g.field();
    const std::uint64_t q = f->q();
    const std::uint64_t limit = ipow(q, unsigned(std::min(g.degree(), 12)));
    for (std::uint64_t idx = q; idx < limit; ++idx) {
        Poly a = Poly::from_index(f, idx);
        Poly b(f);
        if (f->p() == 2) {
            // Absolute trace a + a^2 + ... + a^(2^(e·d - 1)).
            Poly t = a % g;
            b = t;
            for (unsigned i = 1; i < f->e() * unsigned(d); ++i) {
                t = mulmod(t, t, g);
                b += t;
            }
        } else {
            // a^((q^d - 1)/2) = prod_i (a^((q-1)/2))^(q^i).
            Poly t = powmod(a, (q - 1) / 2, g);
            b = t;
            for (int i = 1; i < d; ++i) {
                t = powmod(t, q, g);
                b = mulmod(b, t, g);
            }
            b -= Poly::one(f);
        }
        Poly h = gcd(b, g);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            equal_degree_split(h, d, out);
            equal_degree_split(g / h, d, out);
            return;
        }
    }
    throw std::runtime_error("equal-degree factorization failed to split");
}

}  // namespace detail

inline Factorization factorize(const Poly& a) {
    if (a.is_zero()) throw PolyError("cannot factor the zero polynomial");
    Factorization out;
    out.unit = a.lead();
    const Poly f = a.monic();
    std::vector<std::pair<Poly, unsigned>> parts;
    detail::squarefree_parts(f, 1, parts);
    std::vector<PrimePower> found;
    for (auto& [part, mult] : parts) {
        Poly rest = part;
        const Poly t = Poly::monomial(f.field(), 1);
        Poly h = t;
        for (int d = 1; rest.degree() >= 2 * d; ++d) {
            h = powmod(h, f.field()->q(), rest);
            Poly g = gcd(h - t, rest);
            if (g.degree() > 0) {
                std::vector<Poly> split;
                detail::equal_degree_split(g, d, split);
                for (auto& p : split) found.push_back({p, mult});
                rest = rest / g;
                h = h % rest;
            }
        }
        if (rest.degree() > 0) found.push_back({rest.monic(), mult});
    }
    std::sort(found.begin(), found.end(), [](const PrimePower& x, const PrimePower& y) { return x.prime < y.prime; });
    for (auto& pp : found) {
        if (!out.factors.empty() && out.factors.back().prime == pp.prime)
            out.factors.back().exponent += pp.exponent;
        else
            out.factors.push_back(pp);
    }
    return out;
}

namespace detail {
inline void require_monic(const Poly& f) {
    if (!f.is_monic()) throw PolyError("arithmetic functions require a monic nonzero polynomial");
}
}  // namespace detail

inline int mobius(const Factorization& fz) {
    for (const auto& pp : fz.factors)
        if (pp.exponent > 1) return 0;
    return fz.factors.size() % 2 ? -1 : 1;
}

inline std::uint64_t euler_phi(const Factorization& fz, std::uint64_t q) {
    std::uint64_t r = 1;
    for (const auto& pp : fz.factors) {
        const std::uint64_t np = ipow(q, unsigned(pp.prime.degree()));
        r *= ipow(np, pp.exponent - 1) * (np - 1);
    }
    return r;
}

/// Lambda(f)/log q: deg P when f = P^j, else 0.
inline unsigned von_mangoldt(const Factorization& fz) {
    return fz.factors.size() == 1 ? unsigned(fz.factors[0].prime.degree()) : 0;
}

inline unsigned omega(const Factorization& fz) { return unsigned(fz.factors.size()); }

inline Poly radical(const Factorization& fz, const FieldPtr& f) {
    Poly r = Poly::one(f);
    for (const auto& pp : fz.factors) r *= pp.prime;
    return r;
}

/// d_k(P^m) = C(m+k-1, k-1).
inline BigInt divisor_k_local(unsigned k, unsigned m) {
    if (k == 0) return m == 0 ? 1 : 0;
    return binomial(m + k - 1, k - 1);
}

inline BigInt divisor_k(const Factorization& fz, unsigned k) {
    BigInt r = 1;
    for (const auto& pp : fz.factors) r *= divisor_k_local(k, pp.exponent);
    return r;
}

inline int mobius(const Poly& f) {
    detail::require_monic(f);
    return mobius(factorize(f));
}
inline std::uint64_t euler_phi(const Poly& f) {
    detail::require_monic(f);
    return euler_phi(factorize(f), f.field()->q());
}
inline unsigned von_mangoldt(const Poly& f) {
    detail::require_monic(f);
    return f.degree() == 0 ? 0 : von_mangoldt(factorize(f));
}
inline unsigned omega(const Poly& f) {
    detail::require_monic(f);
    return omega(factorize(f));
}
inline Poly radical(const Poly& f) {
    detail::require_monic(f);
    return radical(factorize(f), f.field());
}
inline BigInt divisor_k(const Poly& f, unsigned k) {
    detail::require_monic(f);
    return divisor_k(factorize(f), k);
}

/// All monic divisors of the factored polynomial.
inline std::vector<Poly> divisors(const Factorization& fz, const FieldPtr& f) {
    std::vector<Poly> out{Poly::one(f)};
    for (const auto& pp : fz.factors) {
        const std::size_t n = out.size();
        Poly pk = Poly::one(f);
        for (unsigned e = 1; e <= pp.exponent; ++e) {
            pk *= pp.prime;
            for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// phi*(R) = sum_{EF = R} mu(E) phi(F), which is multiplicative with local value
/// phi(P^e) - phi(P^(e-1)).
inline std::uint64_t phi_star(const Factorization& fz, std::uint64_t q) {
    std::uint64_t r = 1;
    for (const auto& pp : fz.factors) {
        const std::uint64_t np = ipow(q, unsigned(pp.prime.degree()));
        const std::uint64_t hi = ipow(np, pp.exponent - 1) * (np - 1);
        const std::uint64_t lo = pp.exponent >= 2 ? ipow(np, pp.exponent - 2) * (np - 1) : 1;
        r *= hi - lo;
    }
    return r;
}

/// phi*(R) by the literal divisor sum.
inline std::int64_t phi_star_divisor_sum(const Poly& r) {
    detail::require_monic(r);
    const auto fz = factorize(r);
    std::int64_t s = 0;
    for (const Poly& e : divisors(fz, r.field())) {
        const Poly fpart = r / e;
        s += std::int64_t(mobius(e)) * std::int64_t(euler_phi(fpart));
    }
    return s;
}

inline std::uint64_t phi_star(const Poly& r) {
    detail::require_monic(r);
    return phi_star(factorize(r), r.field()->q());
}

}  // namespace ffh
