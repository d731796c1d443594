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

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "chargroup.hpp"
#include "hybrid.hpp"
#include "lfunc.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "special.hpp"

namespace ffh {

enum class MomentKind { L, P, Z, split };

inline std::string to_string(MomentKind k) {
    switch (k) {
        case MomentKind::L: return "L";
        case MomentKind::P: return "P";
        case MomentKind::Z: return "Z";
        case MomentKind::split: return "split";
    }
    return "?";
}

inline MomentKind parse_moment_kind(const std::string& s) {
    if (s == "L") return MomentKind::L;
    if (s == "P") return MomentKind::P;
    if (s == "Z") return MomentKind::Z;
    if (s == "split") return MomentKind::split;
    throw std::invalid_argument("unknown moment kind: " + s);
}

/// Values at s = 1/2 for one primitive character. P_X never vanishes.
struct CharacterValues {
    std::uint64_t index = 0;
    cplx l, p;
    cplx z() const { return l / p; }
};

/// L(1/2) and P_X(1/2) for every primitive character, in character-index order.
/// L comes from the all-characters Fourier transform; P_X needs primes up to X.
inline std::vector<CharacterValues> character_values(const UnitGroup& g, int x_param, const PrimeTable& primes, unsigned threads = 0) {
    if (phi_star(g.modulus_factorization(), g.ring().field()->q()) == 0)
        throw std::invalid_argument("modulus " + to_text(g.modulus()) + " has no primitive characters");
    const auto ls = l_coeffs_all_dft(g);
    const auto chars = g.primitive_characters();
    return parallel_map(
        chars.size(),
        [&](std::size_t i) {
            CharacterValues v;
            v.index = chars[i].index;
            v.l = ls[chars[i].index].eval(0.5);
            v.p = p_x_eval(g, chars[i], 0.5, x_param, primes);
            return v;
        },
        threads);
}

/// Average of |.|^(2k) over the list; zero values of L contribute zero.
inline double empirical_moment(const std::vector<CharacterValues>& vals, MomentKind kind, unsigned k) {
    if (vals.empty()) throw std::invalid_argument("no primitive characters to average over");
    if (kind == MomentKind::split) {
        const double l = empirical_moment(vals, MomentKind::L, k);
        const double p = empirical_moment(vals, MomentKind::P, k);
        const double z = empirical_moment(vals, MomentKind::Z, k);
        return l / (p * z);
    }
    std::vector<double> terms(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const cplx v = kind == MomentKind::L ? vals[i].l : kind == MomentKind::P ? vals[i].p : vals[i].z();
        terms[i] = std::pow(std::norm(v), double(k));
    }
    return pairwise_sum(terms) / double(vals.size());
}

/// f(k) = prod_{i<k} i! / (i+k)!.
inline Rational f_k(unsigned k) {
    Rational r = 1;
    for (unsigned i = 0; i < k; ++i) r *= Rational(factorial(i), factorial(i + k));
    return r;
}

/// Numerator N_k of sum_m d_k(P^m)^2 x^m = N_k(x) / (1-x)^(2k-1), k >= 1.
/// Obtained by multiplying the truncated series by (1-x)^(2k-1); the
/// coefficients past degree k-1 are checked to vanish.
inline std::vector<Rational> square_sum_numerator(unsigned k) {
    if (k == 0) throw std::invalid_argument("square_sum_numerator requires k >= 1");
    const unsigned len = 3 * k + 2;
    std::vector<Rational> s(len);
    for (unsigned m = 0; m < len; ++m) s[m] = Rational(divisor_k_local(k, m) * divisor_k_local(k, m));
    for (unsigned t = 0; t < 2 * k - 1; ++t)
        for (unsigned m = len; m-- > 1;) s[m] -= s[m - 1];
    for (unsigned m = k; m < len; ++m)
        if (s[m] != 0) throw std::logic_error("square-sum numerator did not terminate");
    s.resize(k);
    return s;
}

/// sum_{m >= 0} d_k(P^m)^2 x^m exactly, for a rational 0 <= x < 1.
inline Rational local_square_sum(unsigned k, const Rational& x) {
    if (k == 0) return 1;
    const auto num = square_sum_numerator(k);
    Rational n = 0, xp = 1;
    for (const auto& c : num) {
        n += c * xp;
        xp *= x;
    }
    return n / rpow(1 - x, 2 * k - 1);
}

struct AkValue {
    double value;
    double tail;  ///< bound on |log a(k) - log value| from degrees above the cutoff
    unsigned cutoff;
};

/// a(k) = prod_P (1-|P|^-1)^(k^2) sum_m d_k(P^m)^2 |P|^-m, truncated at the cutoff degree.
/// Each local factor is (1-x)^((k-1)^2) N_k(x).
inline AkValue a_k(std::uint64_t q, unsigned k, unsigned cutoff = 0) {
    if (q < 2) throw std::invalid_argument("a_k needs q >= 2");
    if (k <= 1) return {1.0, 0.0, cutoff};
    const auto num = square_sum_numerator(k);
    std::vector<double> nd;
    for (const auto& c : num) nd.push_back(to_double(c));
    auto log_local = [&](double x) {
        double s = 0, xp = x;
        for (std::size_t j = 1; j < nd.size(); ++j, xp *= x) s += nd[j] * xp;
        return double((k - 1) * (k - 1)) * std::log1p(-x) + std::log1p(s);
    };
    const double lq = std::log(double(q));
    if (cutoff == 0) {
        // Smallest cutoff whose tail bound is below 1e-12.
        cutoff = 1;
        while (cutoff < 60 && std::exp(-double(cutoff + 1) * lq) * double(k * k * k * k) / double(cutoff + 1) > 1e-13) ++cutoff;
    }
    double log_total = 0;
    for (unsigned d = 1; d <= cutoff; ++d) {
        const double x = std::exp(-double(d) * lq);
        const double count = d * lq < 40 ? double(prime_count(q, d)) : std::exp(double(d) * lq) / double(d);
        log_total += count * log_local(x);
    }
    // |P_d| <= q^d / d.
    double tail = 0;
    for (unsigned d = cutoff + 1; d < cutoff + 400; ++d) {
        const double x = std::exp(-double(d) * lq);
        const double term = std::exp(double(d) * lq) / double(d) * std::abs(log_local(x));
        tail += term;
        if (term < 1e-18 * std::max(tail, 1e-300)) break;
    }
    return {std::exp(log_total), tail, cutoff};
}

/// Exact prod_{deg P <= n} (1 - 1/|P|)^-1 and its ratio to e^gamma n.
struct MertensValue {
    Rational product;
    double value;
    double ratio;
};

inline MertensValue mertens_product(std::uint64_t q, unsigned n) {
    if (n == 0) throw std::invalid_argument("mertens_product requires n >= 1");
    BigInt num = 1, den = 1;
    for (unsigned d = 1; d <= n; ++d) {
        const BigInt qd = BigInt(ipow(q, d));
        const unsigned c = unsigned(prime_count(q, d));
        num *= boost::multiprecision::pow(qd, c);
        den *= boost::multiprecision::pow(qd - 1, c);
    }
    const Rational r(num, den);
    const double v = to_double(r);
    return {r, v, v / (kExpEulerGamma * double(n))};
}

struct HarmonicSum {
    Rational exact;
    Rational main_term;  ///< phi(R)/|R| * x
};

/// sum over monic A with deg A <= x and (A, R) = 1 of 1/|A|, by inclusion-exclusion
/// over the squarefree divisors of rad R.
inline HarmonicSum coprime_harmonic_sum(const Poly& r, unsigned x) {
    if (!r.is_monic()) throw PolyError("modulus must be monic");
    const auto& f = r.field();
    const std::uint64_t q = f->q();
    const auto fz = factorize(r);
    const std::size_t w = fz.factors.size();
    Rational total = 0;
    for (unsigned n = 0; n <= x; ++n) {
        BigInt count = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << w); ++mask) {
            int deg = 0, sign = 1;
            for (std::size_t i = 0; i < w; ++i)
                if (mask >> i & 1) {
                    deg += fz.factors[i].prime.degree();
                    sign = -sign;
                }
            if (deg <= int(n)) count += sign * BigInt(ipow(q, n - unsigned(deg)));
        }
        total += Rational(count, BigInt(ipow(q, n)));
    }
    Rational density = 1;
    for (const auto& pp : fz.factors) density *= 1 - inv_power(q, unsigned(pp.prime.degree()));
    return {total, density * x};
}

enum class Predictor { euler, hadamard, L, hadamard2, hadamard4 };

inline std::string to_string(Predictor p) {
    switch (p) {
        case Predictor::euler: return "euler";
        case Predictor::hadamard: return "hadamard";
        case Predictor::L: return "L";
        case Predictor::hadamard2: return "hadamard2";
        case Predictor::hadamard4: return "hadamard4";
    }
    return "?";
}

struct Prediction {
    double value;
    std::string regime;  ///< "asymptotic", "out-of-regime" or "conjectural"
};

/// Closed-form moment predictions; the products over P | R come from the factorization.
inline Prediction predicted_moment(const Factorization& fz, std::uint64_t q, int deg_r, unsigned k, int x_param, Predictor which) {
    const double dr = double(deg_r), xx = double(x_param);
    const double lq = std::log(double(q));
    const double log_range = std::log(dr) / lq;  // log_q deg R
    auto local_inv = [&](const PrimePower& pp) { return 1 / local_square_sum(k, inv_power(q, unsigned(pp.prime.degree()))); };
    switch (which) {
        case Predictor::euler: {
            Rational prod = 1;
            for (const auto& pp : fz.factors)
                if (pp.prime.degree() <= x_param) prod *= local_inv(pp);
            const double v = a_k(q, k).value * to_double(prod) * std::pow(kExpEulerGamma * xx, double(k * k));
            return {v, xx <= log_range ? "asymptotic" : "out-of-regime"};
        }
        case Predictor::hadamard:
            return {to_double(f_k(k)) * std::pow(dr / (kExpEulerGamma * xx), double(k * k)), k <= 1 ? (xx <= log_range ? "asymptotic" : "out-of-regime") : "conjectural"};
        case Predictor::L: {
            Rational prod = 1;
            for (const auto& pp : fz.factors) prod *= local_inv(pp);
            const double v = to_double(f_k(k)) * a_k(q, k).value * to_double(prod) * std::pow(dr, double(k * k));
            return {v, k <= 2 ? "asymptotic" : "conjectural"};
        }
        case Predictor::hadamard2: {
            Rational prod = 1;
            for (const auto& pp : fz.factors)
                if (pp.prime.degree() > x_param) prod *= 1 - inv_power(q, unsigned(pp.prime.degree()));
            return {dr / (kExpEulerGamma * xx) * to_double(prod), xx <= log_range ? "asymptotic" : "out-of-regime"};
        }
        case Predictor::hadamard4: {
            Rational prod = 1;
            for (const auto& pp : fz.factors)
                if (pp.prime.degree() > x_param) {
                    const Rational y = inv_power(q, unsigned(pp.prime.degree()));
                    prod *= rpow(1 - y, 3) / (1 + y);
                }
            const bool in = dr > 1 && xx <= std::log(std::log(dr)) / lq;
            return {std::pow(dr / (kExpEulerGamma * xx), 4) / 12.0 * to_double(prod), in ? "asymptotic" : "out-of-regime"};
        }
    }
    throw std::invalid_argument("unknown predictor");
}

/// The natural prediction for each moment kind.
inline Predictor default_predictor(MomentKind kind, unsigned k) {
    switch (kind) {
        case MomentKind::L: return Predictor::L;
        case MomentKind::P: return Predictor::euler;
        case MomentKind::Z: return k == 1 ? Predictor::hadamard2 : k == 2 ? Predictor::hadamard4 : Predictor::hadamard;
        case MomentKind::split: return Predictor::L;
    }
    return Predictor::L;
}

struct MomentReport {
    std::uint64_t q = 0;
    std::string modulus;
    int deg_r = 0;
    unsigned k = 0;
    int x = 0;
    MomentKind kind = MomentKind::L;
    std::string predictor;
    double empirical = 0;
    double predicted = 0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t phi_star = 0;
    std::string regime;
    double tolerance = std::numeric_limits<double>::quiet_NaN();  ///< gate applied by the caller, if any
    double seconds = 0;
};

/// One report from precomputed character values.
inline MomentReport moment_report(const UnitGroup& g, const std::vector<CharacterValues>& vals, unsigned k, int x_param, MomentKind kind) {
    const auto t0 = std::chrono::steady_clock::now();
    MomentReport rep;
    const auto& f = g.ring().field();
    rep.q = f->q();
    rep.modulus = to_text(g.modulus());
    rep.deg_r = g.modulus().degree();
    rep.k = k;
    rep.x = x_param;
    rep.kind = kind;
    rep.phi_star = vals.size();
    rep.empirical = empirical_moment(vals, kind, k);
    if (kind == MomentKind::split) {
        rep.predictor = "one";
        rep.predicted = 1.0;
        rep.regime = "diagnostic";
    } else {
        const Predictor p = default_predictor(kind, k);
        const auto pr = k == 0 ? Prediction{1.0, "asymptotic"} : predicted_moment(g.modulus_factorization(), rep.q, rep.deg_r, k, x_param, p);
        rep.predictor = to_string(p);
        rep.predicted = pr.value;
        rep.regime = pr.regime;
    }
    if (rep.predicted != 0) rep.ratio = rep.empirical / rep.predicted;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Average of |L|, |P_X| or |Z_X| to the 2k over primitive characters at s = 1/2.
inline MomentReport empirical_moment(const UnitGroup& g, unsigned k, MomentKind kind, int x_param, const PrimeTable& primes, unsigned threads = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto vals = character_values(g, x_param, primes, threads);
    auto rep = moment_report(g, vals, k, x_param, kind);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Empirical L-moment over (P-moment times Z-moment).
inline MomentReport splitting_ratio(const UnitGroup& g, unsigned k, int x_param, const PrimeTable& primes, unsigned threads = 0) {
    return empirical_moment(g, k, MomentKind::split, x_param, primes, threads);
}

struct PrimorialRecord {
    unsigned n = 0;
    Poly r;
    unsigned m = 0;
    unsigned rem = 0;
    double lemma_gap = 0;  ///< log_q log_q |R_n| - m_n
};

/// Product of the first n monic primes in degree-then-index order.
inline PrimorialRecord primorial(const FieldPtr& f, unsigned n) {
    if (n == 0) throw std::invalid_argument("primorial index must be >= 1");
    PrimorialRecord rec{n, Poly::one(f), 0, 0, 0};
    unsigned left = n;
    for (unsigned d = 1; left > 0; ++d) {
        const auto ps = primes_of_degree(f, d);
        const std::size_t take = std::min<std::size_t>(left, ps.size());
        for (std::size_t i = 0; i < take; ++i) rec.r *= ps[i];
        left -= unsigned(take);
        // A full degree d raises m_n; a partial one leaves r_n primes of degree m_n + 1.
        if (take == ps.size()) {
            rec.m = d;
            rec.rem = 0;
        } else {
            rec.rem = unsigned(take);
        }
    }
    rec.lemma_gap = std::log(double(rec.r.degree())) / std::log(double(f->q())) - double(rec.m);
    return rec;
}

}  // namespace ffh
