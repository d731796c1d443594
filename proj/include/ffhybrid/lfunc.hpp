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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "chargroup.hpp"

namespace ffh {

using cplx = std::complex<double>;

/// L(s, chi) = sum_n c_n u^n with u = q^(-s).
struct LPolynomial {
    std::uint64_t q = 0;
    std::vector<cplx> c;  ///< c_0 .. c_(deg R - 1)

    /// max n with |c_n| above tol; the leading coefficient has modulus >= 1 in practice.
    int degree(double tol = 1e-6) const {
        for (int n = int(c.size()) - 1; n >= 0; --n)
            if (std::abs(c[std::size_t(n)]) > tol) return n;
        return -1;
    }

    double log_q() const { return std::log(double(q)); }
    cplx u_of(cplx s) const { return std::exp(-s * log_q()); }

    cplx eval_u(cplx u) const {
        cplx r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * u + c[i];
        return r;
    }
    cplx eval(cplx s) const { return eval_u(u_of(s)); }

    /// dL/du.
    cplx deriv_u(cplx u) const {
        cplx r = 0;
        for (std::size_t i = c.size(); i-- > 1;) r = r * u + double(i) * c[i];
        return r;
    }

    LPolynomial conj() const {
        LPolynomial o = *this;
        for (auto& x : o.c) x = std::conj(x);
        return o;
    }
};

class LFunctionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// c_n by summing exact rotations over the monic residues of each degree.
inline LPolynomial l_coeffs(const UnitGroup& g, const DirichletCharacter& chi) {
    if (chi.trivial()) throw LFunctionError("the trivial character has no L-polynomial (pole at s = 1)");
    const auto& f = g.ring().field();
    const std::uint64_t e = g.exponent();
    const auto w = g.weights(chi.exponents);
    std::vector<cplx> roots(e);
    for (std::uint64_t k = 0; k < e; ++k) roots[k] = std::polar(1.0, 2.0 * M_PI * double(k) / double(e));
    LPolynomial out;
    out.q = f->q();
    std::vector<std::uint64_t> hist(e);
    std::uint64_t base = 1;
    for (int n = 0; n < g.modulus().degree(); ++n, base *= f->q()) {
        std::fill(hist.begin(), hist.end(), 0);
        for (std::uint64_t idx = base; idx < 2 * base; ++idx) {
            const std::uint32_t flat = g.dlog(idx);
            if (flat != UnitGroup::kNotUnit) ++hist[g.rotation(w, flat)];
        }
        cplx s = 0;
        for (std::uint64_t k = 0; k < e; ++k)
            if (hist[k]) s += double(hist[k]) * roots[k];
        out.c.push_back(s);
    }
    return out;
}

/// Coefficients of every character at once, by a Fourier transform over the
/// unit group applied axis by axis to the per-degree discrete-log histograms.
/// Entry i belongs to character index i; the trivial character's entry holds
/// its coprime counts and is not an L-polynomial.
inline std::vector<LPolynomial> l_coeffs_all_dft(const UnitGroup& g) {
    const auto& f = g.ring().field();
    const std::uint64_t n_units = g.order();
    const int deg = g.modulus().degree();
    std::vector<LPolynomial> out(n_units);
    for (auto& l : out) {
        l.q = f->q();
        l.c.assign(std::size_t(deg), 0.0);
    }
    std::vector<cplx> buf(n_units), tmp;
    std::uint64_t base = 1;
    for (int n = 0; n < deg; ++n, base *= f->q()) {
        std::fill(buf.begin(), buf.end(), 0.0);
        for (std::uint64_t idx = base; idx < 2 * base; ++idx) {
            const std::uint32_t flat = g.dlog(idx);
            if (flat != UnitGroup::kNotUnit) buf[flat] += 1.0;
        }
        std::uint64_t stride = 1;
        for (std::size_t ax = 0; ax < g.rank(); ++ax) {
            const std::uint64_t o = g.orders()[ax];
            std::vector<cplx> tw(o);
            for (std::uint64_t k = 0; k < o; ++k) tw[k] = std::polar(1.0, 2.0 * M_PI * double(k) / double(o));
            tmp.assign(o, 0.0);
            const std::uint64_t block = stride * o;
            for (std::uint64_t hi = 0; hi < n_units; hi += block)
                for (std::uint64_t lo = 0; lo < stride; ++lo) {
                    for (std::uint64_t a = 0; a < o; ++a) {
                        cplx s = 0;
                        for (std::uint64_t x = 0; x < o; ++x) s += buf[hi + lo + x * stride] * tw[(a * x) % o];
                        tmp[a] = s;
                    }
                    for (std::uint64_t a = 0; a < o; ++a) buf[hi + lo + a * stride] = tmp[a];
                }
            stride = block;
        }
        for (std::uint64_t i = 0; i < n_units; ++i) out[i].c[std::size_t(n)] = buf[i];
    }
    return out;
}

/// L(s, chi_0) = prod_{P | R}(1 - |P|^-s) / (1 - q^(1-s)).
inline cplx l_eval_trivial(const UnitGroup& g, cplx s) {
    const double lq = std::log(double(g.ring().field()->q()));
    const cplx den = 1.0 - std::exp((1.0 - s) * lq);
    if (std::abs(den) < 1e-14) throw LFunctionError("pole of the trivial L-function at s = 1 + 2 pi i m / log q");
    cplx num = 1.0;
    for (const auto& pp : g.modulus_factorization().factors) num *= 1.0 - std::exp(-s * lq * double(pp.prime.degree()));
    return num / den;
}

/// zeta_A(s) = 1 / (1 - q^(1-s)).
inline cplx zeta_a(std::uint64_t q, cplx s) {
    const cplx den = 1.0 - std::exp((1.0 - s) * std::log(double(q)));
    if (std::abs(den) < 1e-14) throw LFunctionError("pole of zeta_A");
    return 1.0 / den;
}

enum class RootClass { critical, unit, other };

struct LZero {
    cplx u;           ///< root of sum c_n u^n
    cplx rho;         ///< s-plane representative, Im in (-pi/log q, pi/log q]
    RootClass kind = RootClass::other;
    double residual = 0.0;
};

struct ZeroSet {
    std::vector<LZero> zeros;
    bool converged = true;
    std::size_t count(RootClass k) const {
        return std::size_t(std::count_if(zeros.begin(), zeros.end(), [k](const LZero& z) { return z.kind == k; }));
    }
};

namespace detail {

// Parlett-Reinsch diagonal balancing, radix 2.
inline void balance(Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0, r = 0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0 || r == 0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2) {
                c *= 2;
                r /= 2;
                f *= 2;
            }
            while (c >= r * 2) {
                c /= 2;
                r *= 2;
                f /= 2;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

}  // namespace detail

/// Roots of the L-polynomial: balanced companion eigenvalues, Newton-polished.
inline ZeroSet l_zeros(const LPolynomial& l, double class_tol = 1e-6) {
    ZeroSet out;
    const int d = l.degree();
    if (d <= 0) return out;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    const cplx lead = l.c[std::size_t(d)];
    for (int i = 0; i < d; ++i) comp(0, i) = -l.c[std::size_t(d - 1 - i)] / lead;
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    detail::balance(comp);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) {
        out.converged = false;
        return out;
    }
    LPolynomial trimmed = l;
    trimmed.c.resize(std::size_t(d) + 1);
    double cmax = 0;
    for (const auto& x : trimmed.c) cmax = std::max(cmax, std::abs(x));
    const double lq = l.log_q();
    const double crit = std::pow(double(l.q), -0.5);
    for (int i = 0; i < d; ++i) {
        cplx u = es.eigenvalues()(i);
        for (int it = 0; it < 60; ++it) {
            const cplx v = trimmed.eval_u(u), dv = trimmed.deriv_u(u);
            if (dv == 0.0) break;
            const cplx step = v / dv;
            u -= step;
            if (std::abs(step) <= 1e-17 * std::max(1.0, std::abs(u))) break;
        }
        LZero z;
        z.u = u;
        z.residual = std::abs(trimmed.eval_u(u));
        if (!(z.residual <= 1e-12 * cmax)) out.converged = false;
        const double m = std::abs(u);
        z.kind = std::abs(m - crit) < class_tol ? RootClass::critical : std::abs(m - 1.0) < class_tol ? RootClass::unit : RootClass::other;
        double gamma = -std::arg(u) / lq;
        if (gamma <= -M_PI / lq) gamma += 2 * M_PI / lq;
        z.rho = cplx(-std::log(m) / lq, gamma);
        out.zeros.push_back(z);
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const LZero& a, const LZero& b) { return a.rho.imag() < b.rho.imag(); });
    return out;
}

struct RhReport {
    std::size_t critical = 0, unit = 0, other = 0;
    double max_critical_distance = 0.0;  ///< max ||u| - q^(-1/2)| over critical roots
    bool converged = true;
};

inline RhReport rh_report(const LPolynomial& l, double tol = 1e-6) {
    RhReport r;
    const ZeroSet zs = l_zeros(l, tol);
    r.converged = zs.converged;
    const double crit = std::pow(double(l.q), -0.5);
    for (const auto& z : zs.zeros) {
        switch (z.kind) {
            case RootClass::critical:
                ++r.critical;
                r.max_critical_distance = std::max(r.max_critical_distance, std::abs(std::abs(z.u) - crit));
                break;
            case RootClass::unit: ++r.unit; break;
            case RootClass::other: ++r.other; break;
        }
    }
    return r;
}

/// Both sides of |L(1/2, chi)|^2 = 2 sum_{deg AB < deg R} chi(A) conj chi(B) |AB|^(-1/2) + c(chi).
struct ShortSumSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline ShortSumSides short_sum_sides(const LPolynomial& l, const DirichletCharacter& chi, int deg_r) {
    if (!chi.primitive) throw LFunctionError("the short-sum identity requires a primitive character");
    const double q = double(l.q), rq = std::sqrt(q);
    auto coef = [&](int n) { return n >= 0 && n < int(l.c.size()) ? l.c[std::size_t(n)] : cplx(0.0); };
    // T_m = sum_{a + b = m} c_a conj(c_b) q^(-m/2).
    auto diag = [&](int m) {
        cplx s = 0;
        for (int a = 0; a <= m; ++a) s += coef(a) * std::conj(coef(m - a));
        return s * std::pow(q, -0.5 * m);
    };
    ShortSumSides out;
    out.lhs = std::norm(l.eval(0.5));
    cplx rhs = 0;
    for (int m = 0; m < deg_r; ++m) rhs += 2.0 * diag(m);
    if (!chi.even) {
        rhs -= diag(deg_r - 1);
    } else {
        rhs += -q / ((rq - 1) * (rq - 1)) * diag(deg_r - 2) - 2 * rq / (rq - 1) * diag(deg_r - 1) + 1.0 / ((rq - 1) * (rq - 1)) * diag(deg_r);
    }
    out.rhs = rhs.real();
    return out;
}

/// -L'/L(s) = log q * u L_u(u) / L(u).
inline cplx l_log_deriv(const LPolynomial& l, cplx s) {
    const cplx u = l.u_of(s);
    const cplx v = l.eval_u(u);
    if (std::abs(v) < 1e-300) throw LFunctionError("logarithmic derivative evaluated at a zero");
    return l.log_q() * u * l.deriv_u(u) / v;
}

/// b_n = sum_{deg A = n} chi(A) Lambda(A) / log q, from u L_u / L = sum b_n u^n.
inline std::vector<cplx> von_mangoldt_coeffs(const LPolynomial& l, int n_max) {
    std::vector<cplx> b(std::size_t(n_max) + 1, 0.0);
    auto coef = [&](int n) { return n < int(l.c.size()) ? l.c[std::size_t(n)] : cplx(0.0); };
    for (int n = 1; n <= n_max; ++n) {
        cplx s = double(n) * coef(n);
        for (int k = 1; k < n; ++k) s -= coef(k) * b[std::size_t(n - k)];
        b[std::size_t(n)] = s;
    }
    return b;
}

/// The same coefficients summed directly over prime powers P^j with j deg P = n.
inline std::vector<cplx> von_mangoldt_coeffs_direct(const UnitGroup& g, const DirichletCharacter& chi, const PrimeTable& primes, int n_max) {
    std::vector<cplx> b(std::size_t(n_max) + 1, 0.0);
    for (int d = 1; d <= n_max; ++d)
        for (const Poly& p : primes.of_degree(unsigned(d))) {
            const cplx v = g.evaluate(chi, p).value();
            cplx vj = v;
            for (int j = 1; j * d <= n_max; ++j, vj *= v) b[std::size_t(j * d)] += double(d) * vj;
        }
    return b;
}

/// sum_{n <= N} b_n log q q^(-ns), with a bound on the omitted tail.
struct SeriesValue {
    cplx value;
    double tail_bound = 0.0;
};

inline SeriesValue log_deriv_series(const std::vector<cplx>& b, std::uint64_t q, cplx s, int l_degree) {
    const double lq = std::log(double(q));
    const cplx u = std::exp(-s * lq);
    SeriesValue out;
    cplx un = 1.0;
    for (std::size_t n = 1; n < b.size(); ++n) {
        un *= u;
        out.value += b[n] * un;
    }
    out.value *= lq;
    // |b_n| <= deg L * q^(n/2) under the Riemann hypothesis.
    const double r = std::pow(double(q), 0.5 - s.real());
    const int n0 = int(b.size());
    out.tail_bound = r < 1 ? lq * std::max(l_degree, 1) * std::pow(r, n0) / (1 - r) : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace ffh
