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

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "chargroup.hpp"
#include "rational.hpp"

namespace ffh {

enum class CoeffKind { alpha_k, alpha_minus1, beta };

inline std::string to_string(CoeffKind k) {
    switch (k) {
        case CoeffKind::alpha_k: return "alpha_k";
        case CoeffKind::alpha_minus1: return "alpha_minus1";
        case CoeffKind::beta: return "beta";
    }
    return "?";
}

/// Multiplicative coefficients supported on X-smooth monic polynomials.
///
/// Local values depend only on (deg P, exponent). Three bands of deg P matter:
/// deg P <= X/2, X/2 < deg P <= X, and deg P > X (where every value with a
/// positive exponent is zero).
class CoefficientSystem {
   public:
    static CoefficientSystem alpha(unsigned k, int x_param) { return {CoeffKind::alpha_k, x_param, k}; }
    static CoefficientSystem alpha_minus1(int x_param) { return {CoeffKind::alpha_minus1, x_param, 0}; }
    static CoefficientSystem beta(int x_param) { return {CoeffKind::beta, x_param, 0}; }

    CoefficientSystem(CoeffKind kind, int x_param, unsigned k) : kind_(kind), x_(x_param), k_(k) {
        if (x_param < 1) throw std::invalid_argument("X must be a positive integer");
    }
    CoefficientSystem(const CoefficientSystem& o) : kind_(o.kind_), x_(o.x_), k_(o.k_) {}

    CoeffKind kind() const noexcept { return kind_; }
    int x_param() const noexcept { return x_; }
    unsigned k() const noexcept { return k_; }

    /// Value at P^r for a prime of degree d.
    Rational local(int d, unsigned r) const {
        if (r == 0) return 1;
        if (d > x_) return 0;
        const bool low = 2 * d <= x_;
        switch (kind_) {
            case CoeffKind::alpha_k:
                if (low) return Rational(divisor_k_local(k_, r));
                return high_alpha(r);
            case CoeffKind::alpha_minus1:
                if (r == 1) return -1;
                if (low) return 0;
                if (r == 2) return Rational(1, 2);
                if (r == 3) return Rational(-1, 2);
                return 0;
            case CoeffKind::beta:
                if (r == 1) return -2;
                if (r == 2) return low ? 1 : 2;
                return 0;
        }
        return 0;
    }

    Rational coeff(const Factorization& fz) const {
        Rational out = 1;
        for (const auto& pp : fz.factors) {
            out *= local(pp.prime.degree(), pp.exponent);
            if (out == 0) break;
        }
        return out;
    }

    /// coeff(A) for monic A, memoised by residue index.
    Rational coeff(const Poly& a) const {
        if (!a.is_monic()) throw PolyError("coefficient systems are defined on monic polynomials");
        const auto key = std::make_pair(a.field()->q(), a.index());
        {
            std::lock_guard<std::mutex> lock(mu_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        Rational v = a.degree() == 0 ? Rational(1) : coeff(factorize(a));
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(key, v);
        return v;
    }

    /// Closed form of the local Euler factor at y = chi(P)|P|^(-s), |y| < 1.
    std::complex<double> local_factor(int d, std::complex<double> y) const {
        if (d > x_) return 1.0;
        const bool low = 2 * d <= x_;
        switch (kind_) {
            case CoeffKind::alpha_k: {
                std::complex<double> f = 1.0 / (1.0 - y);
                if (!low) f /= 1.0 + y * y / 2.0;
                return std::pow(f, double(k_));
            }
            case CoeffKind::alpha_minus1:
                return low ? 1.0 - y : 1.0 - y + 0.5 * y * y - 0.5 * y * y * y;
            case CoeffKind::beta:
                return 1.0 - 2.0 * y + (low ? 1.0 : 2.0) * y * y;
        }
        return 1.0;
    }

   private:
    // x^r coefficient of (1-x)^-k (1+x^2/2)^-k.
    Rational high_alpha(unsigned r) const {
        Rational s = 0;
        for (unsigned j = 0; 2 * j <= r; ++j) {
            Rational t = Rational(divisor_k_local(k_, j)) * Rational(divisor_k_local(k_, r - 2 * j));
            t *= rpow(Rational(-1, 2), j);
            s += t;
        }
        return s;
    }

    CoeffKind kind_;
    int x_;
    unsigned k_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<std::uint64_t, std::uint64_t>, Rational> memo_;
};

struct SmoothTerm {
    Poly a;
    Rational coeff;
};

/// Every X-smooth monic A with deg A <= max_deg and nonzero coefficient, by
/// depth-first enumeration of prime-power products.
inline std::vector<SmoothTerm> smooth_terms(const CoefficientSystem& sys, const PrimeTable& primes, int max_deg) {
    const int top = std::min(sys.x_param(), max_deg);
    if (top > int(primes.max_degree())) throw std::invalid_argument("prime table too small");
    const auto& f = primes.field();
    const std::vector<Poly> ps = top >= 1 ? primes.up_to(unsigned(top)) : std::vector<Poly>{};
    std::vector<SmoothTerm> out;
    // Primes are in degree order, so the scan stops at the first one that overflows.
    auto rec = [&](auto&& self, std::size_t start, const Poly& a, const Rational& c) -> void {
        out.push_back({a, c});
        for (std::size_t i = start; i < ps.size(); ++i) {
            const int d = ps[i].degree();
            if (a.degree() + d > max_deg) break;
            Poly pa = a;
            for (unsigned r = 1; a.degree() + int(r) * d <= max_deg; ++r) {
                pa *= ps[i];
                const Rational l = sys.local(d, r);
                if (l != 0) self(self, i + 1, pa, c * l);
            }
        }
    };
    rec(rec, 0, Poly::one(f), Rational(1));
    return out;
}

/// sum over X-smooth monic A with deg A <= max_deg of coeff(A) chi(A) |A|^(-s).
inline std::complex<double> p_series_eval(const CoefficientSystem& sys, const UnitGroup& g, const DirichletCharacter& chi,
                                          std::complex<double> s, int max_deg, const PrimeTable& primes) {
    if (max_deg < 0) throw std::invalid_argument("max_deg must be non-negative");
    const int top = std::min(sys.x_param(), max_deg);
    if (top > int(primes.max_degree())) throw std::invalid_argument("prime table too small");
    const double lq = std::log(double(g.ring().field()->q()));
    struct Local {
        int d;
        std::complex<double> y;
    };
    std::vector<Local> ps;
    for (int d = 1; d <= top; ++d)
        for (const Poly& p : primes.of_degree(unsigned(d))) {
            const auto v = g.evaluate(chi, p);
            if (!v.zero) ps.push_back({d, v.value() * std::exp(-s * lq * double(d))});
        }
    std::vector<std::vector<double>> loc(top + 1);
    for (int d = 1; d <= top; ++d)
        for (int r = 0; r * d <= max_deg; ++r) loc[d].push_back(to_double(sys.local(d, unsigned(r))));
    std::complex<double> total = 0;
    auto rec = [&](auto&& self, std::size_t start, int deg, std::complex<double> v) -> void {
        total += v;
        for (std::size_t i = start; i < ps.size(); ++i) {
            const int d = ps[i].d;
            if (deg + d > max_deg) break;
            std::complex<double> yr = 1.0;
            for (int r = 1; deg + r * d <= max_deg; ++r) {
                yr *= ps[i].y;
                if (loc[d][r] != 0.0) self(self, i + 1, deg + r * d, v * yr * loc[d][r]);
            }
        }
    };
    rec(rec, 0, 0, 1.0);
    return total;
}

/// The full Euler product prod_{deg P <= X} local_factor(P), i.e. the series limit.
inline std::complex<double> p_series_product(const CoefficientSystem& sys, const UnitGroup& g, const DirichletCharacter& chi,
                                             std::complex<double> s, const PrimeTable& primes) {
    if (sys.x_param() > int(primes.max_degree())) throw std::invalid_argument("prime table too small");
    const double lq = std::log(double(g.ring().field()->q()));
    std::complex<double> out = 1.0;
    for (int d = 1; d <= sys.x_param(); ++d)
        for (const Poly& p : primes.of_degree(unsigned(d))) {
            const auto v = g.evaluate(chi, p);
            if (!v.zero) out *= sys.local_factor(d, v.value() * std::exp(-s * lq * double(d)));
        }
    return out;
}

}  // namespace ffh
