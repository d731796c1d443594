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
#include <array>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "arith.hpp"

namespace ffh {

/// F_q[T]/R with residues identified by their base-q digit index.
class ResidueRing {
   public:
    static constexpr int kMaxDegree = 40;
    static constexpr std::uint64_t kMaxSize = std::uint64_t(1) << 26;

    explicit ResidueRing(const Poly& r) : r_(r), f_(r.field()) {
        if (!r.is_monic() || r.degree() < 1) throw PolyError("modulus must be monic of degree >= 1");
        n_ = r.degree();
        if (n_ > kMaxDegree) throw PolyError("modulus degree too large");
        size_ = 1;
        for (int i = 0; i < n_; ++i) {
            size_ *= f_->q();
            if (size_ > kMaxSize) throw PolyError("residue ring too large for table-based character arithmetic");
        }
    }

    const Poly& modulus() const noexcept { return r_; }
    const FieldPtr& field() const noexcept { return f_; }
    int degree() const noexcept { return n_; }
    std::uint64_t size() const noexcept { return size_; }

    std::uint64_t index_of(const Poly& a) const { return (a % r_).index(); }
    Poly element(std::uint64_t idx) const { return Poly::from_index(f_, idx); }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept {
        std::array<Elem, kMaxDegree> x{}, y{};
        std::array<Elem, 2 * kMaxDegree> z{};
        const std::uint32_t q = f_->q();
        for (int i = 0; i < n_; ++i) {
            x[i] = Elem(a % q);
            a /= q;
            y[i] = Elem(b % q);
            b /= q;
        }
        for (int i = 0; i < n_; ++i) {
            if (!x[i]) continue;
            for (int j = 0; j < n_; ++j) z[i + j] = f_->add(z[i + j], f_->mul(x[i], y[j]));
        }
        const auto& rc = r_.coeffs();
        for (int k = 2 * n_ - 2; k >= n_; --k) {
            const Elem c = z[k];
            if (!c) continue;
            for (int j = 0; j < n_; ++j) z[k - n_ + j] = f_->sub(z[k - n_ + j], f_->mul(c, rc[j]));
        }
        std::uint64_t r = 0;
        for (int i = n_; i-- > 0;) r = r * q + z[i];
        return r;
    }

    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const noexcept {
        std::uint64_t r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    }

    /// Index of the residue 1 (the constant polynomial, or 0 when R = 1 is excluded).
    std::uint64_t one() const noexcept { return 1; }

   private:
    Poly r_;
    FieldPtr f_;
    int n_ = 0;
    std::uint64_t size_ = 1;
};

class UnitGroup;

/// A Dirichlet character, stored as an exponent vector against the cyclic
/// decomposition of its unit group. Values are rotations k meaning e^(2 pi i k / E),
/// E the group exponent.
struct DirichletCharacter {
    std::uint64_t index = 0;  ///< mixed-radix index of the exponent vector
    std::vector<std::uint64_t> exponents;
    bool primitive = false;
    bool even = false;
    bool trivial() const noexcept {
        return std::all_of(exponents.begin(), exponents.end(), [](std::uint64_t a) { return a == 0; });
    }
};

/// Exact character value: zero, or the root of unity e^(2 pi i rot / order).
struct RootOfUnity {
    bool zero = true;
    std::uint64_t rot = 0;
    std::uint64_t order = 1;

    std::complex<double> value() const {
        if (zero) return 0.0;
        const double t = 2.0 * M_PI * double(rot) / double(order);
        return {std::cos(t), std::sin(t)};
    }
    friend bool operator==(const RootOfUnity& a, const RootOfUnity& b) noexcept {
        if (a.zero || b.zero) return a.zero == b.zero;
        return a.rot * b.order == b.rot * a.order;
    }
};

/// (F_q[T]/R)^* as an explicit product of cyclic groups.
///
/// The decomposition is found per Sylow subgroup: repeatedly adjoin an element
/// whose order modulo the span so far is maximal and equal to its true order.
/// The resulting discrete-log table is checked to be a bijection onto the units.
class UnitGroup {
   public:
    static constexpr std::uint32_t kNotUnit = UINT32_MAX;

    explicit UnitGroup(const Poly& r) : ring_(r) {
        const std::uint64_t size = ring_.size();
        std::vector<std::uint64_t> units;
        is_unit_.assign(size, false);
        for (std::uint64_t i = 0; i < size; ++i) {
            if (gcd(ring_.element(i), r).is_one()) {
                is_unit_[i] = true;
                units.push_back(i);
            }
        }
        phi_ = units.size();
        build_basis(units);
        build_tables();
        factorization_ = factorize(r);
        build_primitivity_kernels();
    }

    const ResidueRing& ring() const noexcept { return ring_; }
    const Poly& modulus() const noexcept { return ring_.modulus(); }
    const Factorization& modulus_factorization() const noexcept { return factorization_; }
    std::uint64_t order() const noexcept { return phi_; }
    std::uint64_t exponent() const noexcept { return exponent_; }
    const std::vector<std::uint64_t>& generators() const noexcept { return gens_; }
    const std::vector<std::uint64_t>& orders() const noexcept { return orders_; }
    std::size_t rank() const noexcept { return orders_.size(); }

    bool is_unit(std::uint64_t idx) const noexcept { return is_unit_[idx]; }

    /// Flat mixed-radix discrete log, or kNotUnit.
    std::uint32_t dlog(std::uint64_t idx) const noexcept { return dlog_[idx]; }
    std::uint64_t element_of(std::uint64_t flat) const noexcept { return element_of_[flat]; }

    std::vector<std::uint64_t> coordinates(std::uint64_t flat) const {
        std::vector<std::uint64_t> x(orders_.size());
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            x[i] = flat % orders_[i];
            flat /= orders_[i];
        }
        return x;
    }

    /// Per-generator weights w_i = a_i (E / o_i) mod E.
    std::vector<std::uint64_t> weights(const std::vector<std::uint64_t>& exps) const {
        std::vector<std::uint64_t> w(orders_.size());
        for (std::size_t i = 0; i < orders_.size(); ++i) w[i] = (exps[i] % orders_[i]) * (exponent_ / orders_[i]) % exponent_;
        return w;
    }

    /// Rotation of chi at the unit with flat index `flat`.
    std::uint64_t rotation(const std::vector<std::uint64_t>& w, std::uint64_t flat) const noexcept {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            r += (flat % orders_[i]) * w[i];
            flat /= orders_[i];
        }
        return r % exponent_;
    }

    DirichletCharacter character(std::uint64_t index) const {
        if (index >= phi_) throw std::out_of_range("character index out of range");
        DirichletCharacter c;
        c.index = index;
        c.exponents = coordinates(index);
        const auto w = weights(c.exponents);
        c.even = check_even(w);
        c.primitive = check_primitive(w);
        return c;
    }

    std::vector<DirichletCharacter> all_characters() const {
        std::vector<DirichletCharacter> out;
        out.reserve(phi_);
        for (std::uint64_t i = 0; i < phi_; ++i) out.push_back(character(i));
        return out;
    }

    std::vector<DirichletCharacter> primitive_characters() const {
        std::vector<DirichletCharacter> out;
        for (std::uint64_t i = 0; i < phi_; ++i) {
            auto c = character(i);
            if (c.primitive) out.push_back(std::move(c));
        }
        return out;
    }

    RootOfUnity evaluate(const DirichletCharacter& chi, std::uint64_t residue) const {
        const std::uint32_t flat = dlog_[residue];
        if (flat == kNotUnit) return {};
        return {false, rotation(weights(chi.exponents), flat), exponent_};
    }

    RootOfUnity evaluate(const DirichletCharacter& chi, const Poly& a) const { return evaluate(chi, ring_.index_of(a)); }

    /// Rotation for every residue index; kNotUnit marks non-units.
    std::vector<std::uint32_t> rotation_table(const DirichletCharacter& chi) const {
        const auto w = weights(chi.exponents);
        std::vector<std::uint32_t> t(ring_.size(), kNotUnit);
        for (std::uint64_t i = 0; i < ring_.size(); ++i)
            if (dlog_[i] != kNotUnit) t[i] = std::uint32_t(rotation(w, dlog_[i]));
        return t;
    }

    /// Residue indices of the nonzero scalars.
    std::vector<std::uint64_t> scalars() const {
        std::vector<std::uint64_t> s;
        for (std::uint64_t a = 1; a < ring_.field()->q(); ++a) s.push_back(ring_.index_of(Poly::constant(ring_.field(), Elem(a))));
        return s;
    }

   private:
    bool check_even(const std::vector<std::uint64_t>& w) const {
        for (std::uint64_t s : scalar_flats_)
            if (rotation(w, s) != 0) return false;
        return true;
    }

    bool check_primitive(const std::vector<std::uint64_t>& w) const {
        for (const auto& kernel : kernels_) {
            bool nontrivial = false;
            for (std::uint64_t flat : kernel)
                if (rotation(w, flat) != 0) {
                    nontrivial = true;
                    break;
                }
            if (!nontrivial) return false;
        }
        return true;
    }

    static std::vector<std::pair<std::uint64_t, unsigned>> factor_int(std::uint64_t n) {
        std::vector<std::pair<std::uint64_t, unsigned>> out;
        for (std::uint64_t p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            unsigned a = 0;
            while (n % p == 0) {
                n /= p;
                ++a;
            }
            out.push_back({p, a});
        }
        if (n > 1) out.push_back({n, 1});
        return out;
    }

    void build_basis(const std::vector<std::uint64_t>& units) {
        for (auto [ell, a] : factor_int(phi_)) {
            const std::uint64_t cofactor = phi_ / ipow(ell, a);
            std::unordered_set<std::uint64_t> sylow_set;
            for (std::uint64_t g : units) sylow_set.insert(ring_.pow(g, cofactor));
            std::vector<std::uint64_t> sylow(sylow_set.begin(), sylow_set.end());
            std::sort(sylow.begin(), sylow.end());
            std::vector<bool> in_span(ring_.size(), false);
            std::vector<std::uint64_t> span{ring_.one()};
            in_span[ring_.one()] = true;
            while (span.size() < sylow.size()) {
                // Order of each element modulo the span, as a power of ell.
                unsigned best = 0;
                std::uint64_t pick = 0;
                bool found = false;
                for (std::uint64_t h : sylow) {
                    unsigned j = 0;
                    std::uint64_t x = h;
                    while (!in_span[x]) {
                        x = ring_.pow(x, ell);
                        ++j;
                    }
                    if (j < best || j == 0) continue;
                    // Need h^(ell^j) = 1 exactly so <h> meets the span trivially.
                    if (x != ring_.one()) {
                        if (j > best) {
                            best = j;
                            found = false;
                        }
                        continue;
                    }
                    if (j > best || !found) {
                        best = j;
                        pick = h;
                        found = true;
                    }
                }
                if (!found) throw std::logic_error("unit group decomposition failed");
                const std::uint64_t ord = ipow(ell, best);
                std::vector<std::uint64_t> next;
                next.reserve(span.size() * ord);
                std::uint64_t hp = ring_.one();
                for (std::uint64_t k = 0; k < ord; ++k) {
                    for (std::uint64_t s : span) next.push_back(ring_.mul(s, hp));
                    hp = ring_.mul(hp, pick);
                }
                for (std::uint64_t x : next) in_span[x] = true;
                span = std::move(next);
                gens_.push_back(pick);
                orders_.push_back(ord);
            }
        }
        exponent_ = 1;
        for (std::uint64_t o : orders_) exponent_ = std::lcm(exponent_, o);
    }

    void build_tables() {
        element_of_.assign(1, ring_.one());
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            std::vector<std::uint64_t> next;
            next.reserve(element_of_.size() * orders_[i]);
            std::uint64_t gp = ring_.one();
            for (std::uint64_t k = 0; k < orders_[i]; ++k) {
                for (std::uint64_t e : element_of_) next.push_back(ring_.mul(e, gp));
                gp = ring_.mul(gp, gens_[i]);
            }
            element_of_ = std::move(next);
        }
        if (element_of_.size() != phi_) throw std::logic_error("unit group orders do not multiply to phi(R)");
        dlog_.assign(ring_.size(), kNotUnit);
        for (std::uint64_t f = 0; f < phi_; ++f) {
            const std::uint64_t e = element_of_[f];
            if (!is_unit_[e] || dlog_[e] != kNotUnit) throw std::logic_error("discrete-log table is not a bijection");
            dlog_[e] = std::uint32_t(f);
        }
        for (std::uint64_t s : scalars()) scalar_flats_.push_back(dlog_[s]);
    }

    // K_P = {A unit : A = 1 mod R/P} for each prime P | R.
    void build_primitivity_kernels() {
        const Poly& r = ring_.modulus();
        const auto& f = ring_.field();
        for (const auto& pp : factorization_.factors) {
            const Poly cof = r / pp.prime;
            std::vector<std::uint64_t> kernel;
            const std::uint64_t count = ipow(f->q(), unsigned(pp.prime.degree()));
            for (std::uint64_t b = 0; b < count; ++b) {
                const Poly a = Poly::one(f) + cof * Poly::from_index(f, b);
                const std::uint64_t idx = ring_.index_of(a);
                if (dlog_[idx] != kNotUnit) kernel.push_back(dlog_[idx]);
            }
            kernels_.push_back(std::move(kernel));
        }
    }

    ResidueRing ring_;
    std::uint64_t phi_ = 0;
    std::uint64_t exponent_ = 1;
    std::vector<bool> is_unit_;
    std::vector<std::uint64_t> gens_, orders_;
    std::vector<std::uint64_t> element_of_;
    std::vector<std::uint32_t> dlog_;
    std::vector<std::uint64_t> scalar_flats_;
    std::vector<std::vector<std::uint64_t>> kernels_;
    Factorization factorization_;
};

/// Both sides of the primitive orthogonality relation.
struct OrthogonalitySides {
    std::complex<double> direct;
    double closed_form = 0.0;
};

namespace detail {

// sum_{EF = R, F | D} mu(E) phi(F).
inline std::int64_t divisor_orthogonality_sum(const UnitGroup& g, const Poly& d) {
    const Poly& r = g.modulus();
    std::int64_t s = 0;
    for (const Poly& e : divisors(g.modulus_factorization(), r.field())) {
        const Poly fpart = r / e;
        if (!(d % fpart).is_zero()) continue;
        s += std::int64_t(mobius(e)) * std::int64_t(euler_phi(fpart));
    }
    return s;
}

}  // namespace detail

/// sum* chi(A) conj chi(B) over primitive (optionally primitive even) characters,
/// by direct summation and by the divisor-sum closed form.
inline OrthogonalitySides orthogonality_sum(const UnitGroup& g, const Poly& a, const Poly& b, bool even_only) {
    OrthogonalitySides out;
    const std::uint64_t ia = g.ring().index_of(a), ib = g.ring().index_of(b);
    for (std::uint64_t i = 0; i < g.order(); ++i) {
        const auto chi = g.character(i);
        if (!chi.primitive || (even_only && !chi.even)) continue;
        out.direct += g.evaluate(chi, ia).value() * std::conj(g.evaluate(chi, ib).value());
    }
    if (!g.is_unit(ia) || !g.is_unit(ib)) return out;
    if (!even_only) {
        out.closed_form = double(detail::divisor_orthogonality_sum(g, a - b));
        return out;
    }
    const auto& f = g.ring().field();
    std::int64_t s = 0;
    for (Elem x = 1; x < f->q(); ++x) s += detail::divisor_orthogonality_sum(g, a - b.scaled(x));
    out.closed_form = double(s) / double(f->q() - 1);
    return out;
}

}  // namespace ffh
