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
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lfunc.hpp"
#include "special.hpp"

namespace ffh {

enum class BumpShape {
    symmetric,  ///< exp(-1/(t(1-t)))
    skewed,     ///< exp(-1/t - 2/(1-t))
};

/// Smooth weight u(x) supported on [e, e^(1+q^-X)] with unit mass, carried as
/// Gauss-Legendre rules at levels 64 * 2^j over the support.
class BumpProfile {
   public:
    static constexpr unsigned kMaxLevel = 7;

    struct Level {
        std::vector<double> y;  ///< log x at the nodes
        std::vector<double> w;  ///< quadrature weight times u(x)
    };

    BumpProfile(std::uint64_t q, int x_param, BumpShape shape = BumpShape::symmetric, unsigned base_level = 0)
        : q_(q), x_(x_param), shape_(shape), base_level_(base_level) {
        if (x_param < 1) throw std::invalid_argument("X must be a positive integer");
        if (base_level > kMaxLevel) throw std::invalid_argument("bump quadrature level too large");
        h_ = std::pow(double(q), -double(x_param));
        a_ = std::exp(1.0);
        width_ = a_ * std::expm1(h_);
        // Normalise on the finest rule, then record the base-level mass error.
        const auto& fine = gauss_legendre_level(3);
        double mass = 0;
        for (std::size_t i = 0; i < fine.size(); ++i) mass += fine.weights[i] * profile(fine.nodes[i]);
        scale_ = 1.0 / (mass * width_);
        levels_.resize(kMaxLevel + 1);
        for (unsigned j = 0; j <= kMaxLevel; ++j) {
            const auto& rule = gauss_legendre_level(j);
            Level lv;
            for (std::size_t i = 0; i < rule.size(); ++i) {
                const double t = rule.nodes[i];
                lv.y.push_back(1.0 + std::log1p(std::expm1(h_) * t));
                lv.w.push_back(rule.weights[i] * width_ * scale_ * profile(t));
            }
            levels_[j] = std::move(lv);
        }
        double base_mass = 0;
        for (double w : levels_[base_level_].w) base_mass += w;
        mass_error_ = std::abs(base_mass - 1.0);
    }

    std::uint64_t q() const noexcept { return q_; }
    int x_param() const noexcept { return x_; }
    BumpShape shape() const noexcept { return shape_; }
    double h() const noexcept { return h_; }
    double lower() const noexcept { return a_; }
    double upper() const noexcept { return a_ + width_; }
    unsigned base_level() const noexcept { return base_level_; }
    std::size_t base_nodes() const noexcept { return std::size_t(64) << base_level_; }
    /// | int u dx - 1 | on the base rule.
    double mass_error() const noexcept { return mass_error_; }

    double u(double x) const {
        if (x <= a_ || x >= a_ + width_) return 0.0;
        return scale_ * profile((x - a_) / width_);
    }

    const Level& level(unsigned j) const { return levels_.at(std::min(j, kMaxLevel)); }

    /// Level resolving `phase_span` radians of oscillation across the support.
    unsigned level_for(double phase_span) const {
        const double cycles = phase_span / (2 * M_PI);
        unsigned j = base_level_;
        while (j < kMaxLevel && double(std::size_t(64) << j) < 64.0 + 12.0 * cycles) ++j;
        return j;
    }

    /// Level j moved by `delta`, clamped to [base level, max level].
    unsigned shifted_level(unsigned j, int delta) const {
        const int k = std::clamp(int(j) + delta, int(base_level_), int(kMaxLevel));
        return unsigned(k);
    }

    /// Unit-interval profile before normalisation.
    double profile(double t) const {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        if (shape_ == BumpShape::symmetric) return std::exp(-1.0 / (t * (1.0 - t)));
        return std::exp(-1.0 / t - 2.0 / (1.0 - t));
    }

    /// Mass of u on [e, e^y] for y in [1, 1 + h].
    double cumulative(double y) const {
        const double t_end = std::expm1(y - 1.0) / std::expm1(h_);
        if (t_end <= 0) return 0.0;
        if (t_end >= 1) return 1.0;
        const auto& rule = gauss_legendre_level(1);
        double s = 0;
        for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * profile(t_end * rule.nodes[i]);
        return s * t_end * width_ * scale_;
    }

   private:
    std::uint64_t q_;
    int x_;
    BumpShape shape_;
    unsigned base_level_;
    double h_ = 0, a_ = 0, width_ = 0, scale_ = 0, mass_error_ = 0;
    std::vector<Level> levels_;
};

struct QuadratureValue {
    cplx value;
    cplx refined;         ///< same integral on the next finer rule
    std::size_t nodes = 0;
    double refinement_delta() const { return std::abs(refined - value); }
};

/// U(z) = int u(x) E1(z log x) dx by direct quadrature of the integrand.
inline QuadratureValue u_cap(cplx z, const BumpProfile& bump, int extra_levels = 0) {
    const unsigned j = bump.shifted_level(bump.level_for(std::abs(z.imag()) * bump.h()), extra_levels);
    auto at = [&](unsigned lv) {
        const auto& L = bump.level(lv);
        cplx s = 0;
        for (std::size_t i = 0; i < L.y.size(); ++i) s += L.w[i] * e1(z * L.y[i]);
        return s;
    };
    QuadratureValue out;
    out.value = at(j);
    out.refined = j < BumpProfile::kMaxLevel ? at(j + 1) : out.value;
    out.nodes = bump.level(j).y.size();
    return out;
}

/// Mellin transform u~(s) = int x^(s-1) u(x) dx.
inline QuadratureValue u_mellin(cplx s, const BumpProfile& bump, int extra_levels = 0) {
    const unsigned j = bump.shifted_level(bump.level_for(std::abs(s.imag()) * bump.h()), extra_levels);
    auto at = [&](unsigned lv) {
        const auto& L = bump.level(lv);
        cplx acc = 0;
        for (std::size_t i = 0; i < L.y.size(); ++i) acc += L.w[i] * std::exp((s - 1.0) * L.y[i]);
        return acc;
    };
    QuadratureValue out;
    out.value = at(j);
    out.refined = j < BumpProfile::kMaxLevel ? at(j + 1) : out.value;
    out.nodes = bump.level(j).y.size();
    return out;
}

/// U along an arithmetic progression z0 - i k m, |m| <= M.
///
/// Uses dE1(zy)/dy = -e^(-zy)/y and the cumulative mass F of u in log-space:
///   U(z) = E1(z (1+h)) + int_1^(1+h) e^(-zt) F(t) / t dt,
/// so each shift costs one E1 call and one phase rotation per node.
class PeriodicUSum {
   public:
    PeriodicUSum(const BumpProfile& bump, double max_imag) : bump_(bump) {
        const unsigned j = bump.level_for(max_imag * bump.h());
        const auto& rule = gauss_legendre_level(j);
        const double h = bump.h();
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double t = 1.0 + h * rule.nodes[i];
            t_.push_back(t);
            c_.push_back(h * rule.weights[i] * bump.cumulative(t) / t);
        }
    }

    std::size_t nodes() const noexcept { return t_.size(); }

    cplx value(cplx z) const {
        cplx s = e1(z * (1.0 + bump_.h()));
        for (std::size_t i = 0; i < t_.size(); ++i) s += c_[i] * std::exp(-z * t_[i]);
        return s;
    }

    /// sum_{|m| <= M} U(z0 - i k m), accumulated as U(z0) then (m, -m) pairs.
    cplx progression(cplx z0, double k, int m_max) const {
        const std::size_t n = t_.size();
        std::vector<cplx> pos(n), neg(n), rot(n);
        for (std::size_t i = 0; i < n; ++i) {
            pos[i] = neg[i] = c_[i] * std::exp(-z0 * t_[i]);
            rot[i] = std::polar(1.0, k * t_[i]);
        }
        const double top = 1.0 + bump_.h();
        cplx sum0 = e1(z0 * top);
        for (std::size_t i = 0; i < n; ++i) sum0 += pos[i];
        cplx total = sum0;
        for (int m = 1; m <= m_max; ++m) {
            const cplx zp = z0 - cplx(0, k * m), zn = z0 + cplx(0, k * m);
            cplx sp = e1(zp * top), sn = e1(zn * top);
            for (std::size_t i = 0; i < n; ++i) {
                pos[i] *= rot[i];
                neg[i] *= std::conj(rot[i]);
                sp += pos[i];
                sn += neg[i];
            }
            total += sp + sn;
        }
        return total;
    }

   private:
    const BumpProfile& bump_;
    std::vector<double> t_;
    std::vector<double> c_;
};

/// P_X(s, chi) = exp(sum_{j deg P <= X} chi(P)^j / (j |P|^(js))).
inline cplx p_x_eval(const UnitGroup& g, const DirichletCharacter& chi, cplx s, int x_param, const PrimeTable& primes) {
    if (x_param < 1) throw std::invalid_argument("X must be a positive integer");
    if (unsigned(x_param) > primes.max_degree()) throw std::invalid_argument("prime table too small for X");
    const double lq = std::log(double(g.ring().field()->q()));
    cplx acc = 0;
    for (int d = 1; d <= x_param; ++d)
        for (const Poly& p : primes.of_degree(unsigned(d))) {
            const cplx v = g.evaluate(chi, p).value();
            if (v == 0.0) continue;
            cplx vj = v;
            for (int j = 1; j * d <= x_param; ++j, vj *= v) acc += vj * std::exp(-s * lq * double(j * d)) / double(j);
        }
    return std::exp(acc);
}

/// Z_X by the quotient L / P_X.
inline cplx z_x_quotient(const LPolynomial& l, cplx p_x, cplx s) { return l.eval(s) / p_x; }

struct ZxFromZeros {
    cplx value;
    cplx exponent;          ///< sum of U over zeros and shifts
    bool perturbed = false; ///< s was moved off a branch cut by 1e-8 i
    std::size_t zeros = 0;
};

/// Z_X(s) = exp(-sum_rho sum_{|m| <= M} U((s - rho - 2 pi i m / log q) (log q) X)) over every root.
inline ZxFromZeros z_x_from_zeros(const ZeroSet& zs, std::uint64_t q, cplx s, const BumpProfile& bump, int m_max) {
    const double lq = std::log(double(q));
    const double x = double(bump.x_param());
    const double k = 2.0 * M_PI * x;
    ZxFromZeros out;
    out.zeros = zs.zeros.size();
    auto on_cut = [&](cplx sv) {
        for (const auto& z : zs.zeros) {
            const cplx z0 = (sv - z.rho) * lq * x;
            const double mr = std::round(z0.imag() / k);
            if (std::abs(mr) <= m_max && std::abs(z0.imag() - k * mr) < 1e-12 * std::max(1.0, k * std::abs(mr))) {
                if (std::abs(z0.real()) < 1e-14) throw LFunctionError("Z_X evaluated at a zero of L");
                if (z0.real() < 0) return true;
            }
        }
        return false;
    };
    if (on_cut(s)) {
        s += cplx(0, 1e-8);
        out.perturbed = true;
    }
    double max_imag = 0;
    for (const auto& z : zs.zeros) max_imag = std::max(max_imag, std::abs(((s - z.rho) * lq * x).imag()) + k * m_max);
    PeriodicUSum kernel(bump, max_imag);
    for (const auto& z : zs.zeros) out.exponent += kernel.progression((s - z.rho) * lq * x, k, m_max);
    out.value = std::exp(-out.exponent);
    return out;
}

/// Reference version of z_x_from_zeros evaluating every U by direct quadrature.
inline ZxFromZeros z_x_from_zeros_direct(const ZeroSet& zs, std::uint64_t q, cplx s, const BumpProfile& bump, int m_max) {
    const double lq = std::log(double(q));
    const double x = double(bump.x_param());
    ZxFromZeros out;
    out.zeros = zs.zeros.size();
    for (const auto& z : zs.zeros) {
        const cplx z0 = (s - z.rho) * lq * x;
        cplx acc = u_cap(z0, bump).value;
        for (int m = 1; m <= m_max; ++m)
            acc += u_cap(z0 - cplx(0, 2 * M_PI * x * m), bump).value + u_cap(z0 + cplx(0, 2 * M_PI * x * m), bump).value;
        out.exponent += acc;
    }
    out.value = std::exp(-out.exponent);
    return out;
}

struct ExplicitFormulaSides {
    cplx lhs;          ///< -L'/L(s)
    cplx prime_sum;    ///< sum_{deg A <= X} chi(A) Lambda(A) |A|^-s
    cplx zero_sum;     ///< sum_rho u~(1 + (rho - s)(log q) X) / (rho - s)
    cplx rhs() const { return prime_sum + zero_sum; }
};

inline ExplicitFormulaSides explicit_formula_sides(const LPolynomial& l, const ZeroSet& zs, const UnitGroup& g, const DirichletCharacter& chi,
                                                  const PrimeTable& primes, cplx s, const BumpProfile& bump, int m_max, int extra_levels = 0) {
    const double lq = l.log_q();
    const double x = double(bump.x_param());
    ExplicitFormulaSides out;
    out.lhs = l_log_deriv(l, s);
    const auto b = von_mangoldt_coeffs_direct(g, chi, primes, bump.x_param());
    const cplx u = std::exp(-s * lq);
    cplx un = 1.0;
    for (std::size_t n = 1; n < b.size(); ++n) {
        un *= u;
        out.prime_sum += lq * b[n] * un;
    }
    for (const auto& z : zs.zeros) {
        auto term = [&](int m) {
            const cplx d = z.rho + cplx(0, 2 * M_PI * m / lq) - s;
            return u_mellin(1.0 + d * lq * x, bump, extra_levels).value / d;
        };
        cplx acc = term(0);
        for (int m = 1; m <= m_max; ++m) acc += term(m) + term(-m);
        out.zero_sum += acc;
    }
    return out;
}

}  // namespace ffh
