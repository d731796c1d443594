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
#include <climits>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace ffh {

class PolyError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Element of F_q[T], dense, lowest coefficient first, no trailing zeros.
class Poly {
   public:
    static constexpr int kZeroDegree = INT_MIN;

    Poly() = default;
    explicit Poly(FieldPtr f) : f_(std::move(f)) {}
    Poly(FieldPtr f, std::vector<Elem> c) : f_(std::move(f)), c_(std::move(c)) {
        for (Elem x : c_)
            if (!f_->contains(x)) throw PolyError("coefficient outside the field");
        trim();
    }

    static Poly constant(const FieldPtr& f, Elem a) { return Poly(f, {a}); }
    static Poly one(const FieldPtr& f) { return Poly(f, {1}); }
    static Poly monomial(const FieldPtr& f, int n, Elem a = 1) {
        std::vector<Elem> c(std::size_t(n) + 1, 0);
        c[std::size_t(n)] = a;
        return Poly(f, std::move(c));
    }
    /// Polynomial whose coefficients are the base-q digits of idx.
    static Poly from_index(const FieldPtr& f, std::uint64_t idx) {
        std::vector<Elem> c;
        while (idx) {
            c.push_back(Elem(idx % f->q()));
            idx /= f->q();
        }
        return Poly(f, std::move(c));
    }

    const FieldPtr& field() const noexcept { return f_; }
    const std::vector<Elem>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    int degree() const noexcept { return c_.empty() ? kZeroDegree : int(c_.size()) - 1; }
    Elem lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    bool is_monic() const noexcept { return !c_.empty() && c_.back() == 1; }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    Elem operator[](std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }

    /// |A| = q^deg A, |0| = 0.
    double norm() const noexcept { return c_.empty() ? 0.0 : std::pow(double(f_->q()), degree()); }

    /// Base-q digit encoding; for deg A < n this is the residue index mod any R of degree n.
    std::uint64_t index() const noexcept {
        std::uint64_t r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * f_->q() + c_[i];
        return r;
    }

    Poly monic() const {
        if (c_.empty()) throw PolyError("zero polynomial has no monic associate");
        return scaled(f_->inv(lead()));
    }

    Poly scaled(Elem a) const {
        std::vector<Elem> c(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) c[i] = f_->mul(c_[i], a);
        return Poly(f_, std::move(c));
    }

    Poly derivative() const {
        std::vector<Elem> c;
        for (std::size_t i = 1; i < c_.size(); ++i) {
            Elem k = Elem(i % f_->p());
            // i·c_i in characteristic p: repeated addition of c_i, k < p times.
            Elem v = 0;
            for (Elem j = 0; j < k; ++j) v = f_->add(v, c_[i]);
            c.push_back(v);
        }
        return Poly(f_, std::move(c));
    }

    Elem eval(Elem x) const noexcept {
        Elem r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = f_->add(f_->mul(r, x), c_[i]);
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) noexcept {
        return a.c_ == b.c_ && (a.f_ == b.f_ || (a.f_ && b.f_ && *a.f_ == *b.f_));
    }
    friend bool operator!=(const Poly& a, const Poly& b) noexcept { return !(a == b); }

    /// Degree first, then residue index; the canonical enumeration order.
    friend bool operator<(const Poly& a, const Poly& b) noexcept {
        if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        check_same(a, b);
        const auto& f = *a.f_;
        std::vector<Elem> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.add(a[i], b[i]);
        return Poly(a.f_, std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        check_same(a, b);
        const auto& f = *a.f_;
        std::vector<Elem> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = f.sub(a[i], b[i]);
        return Poly(a.f_, std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        check_same(a, b);
        if (a.is_zero() || b.is_zero()) return Poly(a.f_);
        const auto& f = *a.f_;
        std::vector<Elem> c(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = f.add(c[i + j], f.mul(a.c_[i], b.c_[j]));
        }
        return Poly(a.f_, std::move(c));
    }
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    static void check_same(const Poly& a, const Poly& b) {
        if (!a.f_ || !b.f_) throw PolyError("polynomial without a field");
        if (a.f_ != b.f_ && !(*a.f_ == *b.f_)) throw PolyError("field mismatch");
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    FieldPtr f_;
    std::vector<Elem> c_;
};

/// a = quot·b + rem with deg rem < deg b.
inline std::pair<Poly, Poly> divrem(const Poly& a, const Poly& b) {
    Poly::check_same(a, b);
    if (b.is_zero()) throw PolyError("division by the zero polynomial");
    const auto& f = *a.field();
    if (a.degree() < b.degree()) return {Poly(a.field()), a};
    std::vector<Elem> r = a.coeffs();
    const auto& bc = b.coeffs();
    const std::size_t db = bc.size() - 1;
    std::vector<Elem> qt(r.size() - db, 0);
    const Elem binv = f.inv(b.lead());
    for (std::size_t k = r.size(); k-- > db;) {
        Elem c = f.mul(r[k], binv);
        qt[k - db] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) r[k - db + j] = f.sub(r[k - db + j], f.mul(c, bc[j]));
    }
    r.resize(db);
    return {Poly(a.field(), std::move(qt)), Poly(a.field(), std::move(r))};
}

inline Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).second; }
inline Poly operator/(const Poly& a, const Poly& b) { return divrem(a, b).first; }

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
    Poly::check_same(a, b);
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.is_zero() ? a : a.monic();
}

inline Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.field());
    return ((a * b) / gcd(a, b)).monic();
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

/// base^e mod m; e is an arbitrary unsigned 64-bit exponent.
inline Poly powmod(Poly base, std::uint64_t e, const Poly& m) {
    Poly r = Poly::one(m.field()) % m;
    base = base % m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        e >>= 1;
        if (e) base = mulmod(base, base, m);
    }
    return r;
}

/// base^(q^k) mod m by k applications of the q-power map.
inline Poly frobenius_pow(Poly base, unsigned k, const Poly& m) {
    for (unsigned i = 0; i < k; ++i) base = powmod(base, m.field()->q(), m);
    return base;
}

inline Poly pow(const Poly& a, unsigned e) {
    Poly r = Poly::one(a.field());
    for (unsigned i = 0; i < e; ++i) r *= a;
    return r;
}

/// Inverse of a modulo m; throws if not a unit.
inline Poly invmod(const Poly& a, const Poly& m) {
    Poly r0 = m, r1 = a % m;
    Poly s0(m.field()), s1 = Poly::one(m.field());
    while (!r1.is_zero()) {
        auto [qt, r] = divrem(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s = s0 - qt * s1;
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (r0.degree() != 0) throw PolyError("element is not invertible modulo the given polynomial");
    return (s0.scaled(m.field()->inv(r0.lead()))) % m;
}

/// Canonical text form, e.g. "q=3:[1,2,1]" for T^2+2T+1.
inline std::string to_text(const Poly& a) {
    std::ostringstream os;
    os << "q=" << a.field()->q() << ":[";
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) os << (i ? "," : "") << a.coeffs()[i];
    os << "]";
    return os.str();
}

/// Parses the canonical text form; the q= prefix must match the field.
inline Poly parse_poly(const std::string& text, const FieldPtr& f) {
    auto fail = [&](const std::string& why) { return PolyError("cannot parse polynomial '" + text + "': " + why); };
    auto colon = text.find(':');
    if (text.rfind("q=", 0) != 0 || colon == std::string::npos) throw fail("expected q=<order>:[c0,c1,...]");
    unsigned long q = 0;
    try {
        q = std::stoul(text.substr(2, colon - 2));
    } catch (const std::exception&) {
        throw fail("bad field order");
    }
    if (q != f->q()) throw fail("field order does not match q=" + std::to_string(f->q()));
    std::string body = text.substr(colon + 1);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') throw fail("missing brackets");
    body = body.substr(1, body.size() - 2);
    std::vector<Elem> c;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.find_first_not_of(" ") == std::string::npos) throw fail("empty coefficient");
        long v = 0;
        try {
            v = std::stol(tok);
        } catch (const std::exception&) {
            throw fail("bad coefficient '" + tok + "'");
        }
        if (v < 0 || std::uint64_t(v) >= f->q()) throw fail("coefficient out of range");
        c.push_back(Elem(v));
    }
    return Poly(f, std::move(c));
}

/// Monic polynomial of degree n whose low coefficients are the base-q digits of low (< q^n).
inline Poly monic_of_degree(const FieldPtr& f, int n, std::uint64_t low) {
    std::vector<Elem> c(std::size_t(n) + 1, 0);
    for (int i = 0; i < n; ++i) {
        c[std::size_t(i)] = Elem(low % f->q());
        low /= f->q();
    }
    c[std::size_t(n)] = 1;
    return Poly(f, std::move(c));
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

}  // namespace ffh
