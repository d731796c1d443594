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

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ffh {

/// Field elements are small integers. For prime fields the value is the
/// residue; for extension fields it is the base-p digit encoding of the
/// coordinates in the power basis of the defining modulus.
using Elem = std::uint32_t;

class FieldError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detail

/// The finite field F_q, q = p^e.
///
/// Prime fields use plain residue arithmetic. Prime-power fields are built
/// from the lexicographically least monic irreducible of degree e over F_p
/// and use log/antilog tables for multiplication, so q is limited to 2^12
/// in that case.
class FiniteField {
   public:
    static constexpr std::uint32_t kMaxExtensionOrder = 1u << 12;

    static std::shared_ptr<const FiniteField> make(std::uint32_t q) {
        return std::shared_ptr<const FiniteField>(new FiniteField(q));
    }

    std::uint32_t p() const noexcept { return p_; }
    std::uint32_t e() const noexcept { return e_; }
    std::uint32_t q() const noexcept { return q_; }
    bool is_prime_field() const noexcept { return e_ == 1; }

    /// Coefficients (lowest first, over F_p) of the modulus defining the
    /// extension; {0, 1} for prime fields.
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    Elem zero() const noexcept { return 0; }
    Elem one() const noexcept { return 1; }

    Elem add(Elem a, Elem b) const noexcept {
        if (e_ == 1) {
            std::uint64_t s = std::uint64_t(a) + b;
            return Elem(s >= p_ ? s - p_ : s);
        }
        if (!add_table_.empty()) return add_table_[std::size_t(a) * q_ + b];
        return digit_op(a, b, false);
    }

    Elem sub(Elem a, Elem b) const noexcept {
        if (e_ == 1) return Elem(a >= b ? a - b : std::uint64_t(a) + p_ - b);
        if (!sub_table_.empty()) return sub_table_[std::size_t(a) * q_ + b];
        return digit_op(a, b, true);
    }

    Elem neg(Elem a) const noexcept { return sub(0, a); }

    Elem mul(Elem a, Elem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        if (e_ == 1) return Elem((std::uint64_t(a) * b) % p_);
        std::uint32_t s = log_[a] + log_[b];
        if (s >= q_ - 1) s -= q_ - 1;
        return exp_[s];
    }

    Elem inv(Elem a) const {
        if (a == 0) throw FieldError("inverse of zero field element");
        if (e_ == 1) return pow(a, p_ - 2);
        std::uint32_t l = log_[a];
        return exp_[l == 0 ? 0 : q_ - 1 - l];
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, std::uint64_t n) const noexcept {
        Elem r = 1;
        while (n) {
            if (n & 1) r = mul(r, a);
            a = mul(a, a);
            n >>= 1;
        }
        return r;
    }

    /// Inverse Frobenius a -> a^{1/p}.
    Elem pth_root(Elem a) const noexcept { return e_ == 1 ? a : pow(a, q_ / p_); }

    bool contains(Elem a) const noexcept { return a < q_; }

    friend bool operator==(const FiniteField& a, const FiniteField& b) noexcept {
        return a.q_ == b.q_ && a.modulus_ == b.modulus_;
    }

   private:
    explicit FiniteField(std::uint32_t q) : q_(q) {
        if (q < 2) throw FieldError("field order must be at least 2");
        std::uint32_t p = 2;
        while (q % p != 0) ++p;
        std::uint32_t e = 0;
        for (std::uint32_t r = q; r > 1; r /= p) {
            if (r % p != 0) throw FieldError("field order " + std::to_string(q) + " is not a prime power");
            ++e;
        }
        p_ = p;
        e_ = e;
        if (e_ == 1) {
            modulus_ = {0, 1};
            return;
        }
        if (q_ > kMaxExtensionOrder)
            throw FieldError("extension fields are limited to q <= 4096");
        build_extension();
    }

    // Digit-wise addition or subtraction in F_p^e.
    Elem digit_op(Elem a, Elem b, bool subtract) const noexcept {
        Elem r = 0, place = 1;
        for (std::uint32_t i = 0; i < e_; ++i) {
            std::uint32_t x = a % p_, y = b % p_;
            a /= p_;
            b /= p_;
            std::uint32_t z = subtract ? (x + p_ - y) % p_ : (x + y) % p_;
            r += z * place;
            place *= p_;
        }
        return r;
    }

    // Multiplication of encoded elements by schoolbook reduction; used only
    // while building the tables.
    Elem slow_mul(Elem a, Elem b) const {
        std::vector<std::uint32_t> x(e_), y(e_), z(2 * e_, 0);
        for (std::uint32_t i = 0; i < e_; ++i) {
            x[i] = a % p_;
            a /= p_;
            y[i] = b % p_;
            b /= p_;
        }
        for (std::uint32_t i = 0; i < e_; ++i)
            for (std::uint32_t j = 0; j < e_; ++j) z[i + j] = (z[i + j] + x[i] * y[j]) % p_;
        for (std::uint32_t k = 2 * e_ - 1; k >= e_; --k) {
            std::uint32_t c = z[k];
            if (c == 0) continue;
            for (std::uint32_t j = 0; j <= e_; ++j)
                z[k - e_ + j] = (z[k - e_ + j] + (p_ - c) * modulus_[j]) % p_;
        }
        Elem r = 0, place = 1;
        for (std::uint32_t i = 0; i < e_; ++i) {
            r += z[i] * place;
            place *= p_;
        }
        return r;
    }

    bool modulus_is_irreducible(const std::vector<std::uint32_t>& m) const {
        // Brute-force root/factor test over F_p: no monic factor of degree <= e/2.
        const std::uint32_t n = e_;
        for (std::uint32_t d = 1; d <= n / 2; ++d) {
            std::uint64_t count = 1;
            for (std::uint32_t i = 0; i < d; ++i) count *= p_;
            for (std::uint64_t idx = 0; idx < count; ++idx) {
                std::vector<std::uint32_t> f(d + 1);
                std::uint64_t t = idx;
                for (std::uint32_t i = 0; i < d; ++i) {
                    f[i] = std::uint32_t(t % p_);
                    t /= p_;
                }
                f[d] = 1;
                std::vector<std::uint32_t> r = m;
                for (std::uint32_t k = n; k >= d; --k) {
                    std::uint32_t c = r[k];
                    if (c) {
                        for (std::uint32_t j = 0; j <= d; ++j)
                            r[k - d + j] = (r[k - d + j] + (p_ - c) * f[j]) % p_;
                    }
                    if (k == d) break;
                }
                bool zero = true;
                for (std::uint32_t i = 0; i < d; ++i) zero = zero && r[i] == 0;
                if (zero) return false;
            }
        }
        return true;
    }

    void build_extension() {
        std::uint64_t count = q_;  // p^e candidates for the low coefficients
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<std::uint32_t> m(e_ + 1);
            std::uint64_t t = idx;
            for (std::uint32_t i = 0; i < e_; ++i) {
                m[i] = std::uint32_t(t % p_);
                t /= p_;
            }
            m[e_] = 1;
            if (m[0] != 0 && modulus_is_irreducible(m)) {
                modulus_ = std::move(m);
                break;
            }
        }
        // Smallest encoded element of order q - 1.
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        for (Elem g = 2; g < q_ || g == 2; ++g) {
            Elem x = 1;
            std::uint32_t k = 0;
            std::vector<bool> seen(q_, false);
            bool ok = true;
            for (; k < q_ - 1; ++k) {
                if (seen[x]) {
                    ok = false;
                    break;
                }
                seen[x] = true;
                exp_[k] = x;
                log_[x] = k;
                x = slow_mul(x, g);
            }
            if (ok && x == 1) break;
        }
        if (q_ <= 256) {
            add_table_.resize(std::size_t(q_) * q_);
            sub_table_.resize(std::size_t(q_) * q_);
            for (Elem a = 0; a < q_; ++a)
                for (Elem b = 0; b < q_; ++b) {
                    add_table_[std::size_t(a) * q_ + b] = digit_op(a, b, false);
                    sub_table_[std::size_t(a) * q_ + b] = digit_op(a, b, true);
                }
        }
    }

    std::uint32_t q_ = 0, p_ = 0, e_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<Elem> add_table_, sub_table_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

}  // namespace ffh
