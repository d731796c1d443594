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

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace ffh {

/// Euler-Mascheroni constant and e^gamma to 20 digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kExpEulerGamma = 1.78107241799019798524;

class SpecialFunctionError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Principal-branch exponential integral E1(z) = int_z^(z+inf) e^-w / w dw.
/// Power series for |z| <= 4, modified Lentz continued fraction otherwise.
inline std::complex<double> e1(std::complex<double> z) {
    using C = std::complex<double>;
    if (z == 0.0) throw SpecialFunctionError("E1 is singular at 0");
    if (z.imag() == 0.0 && z.real() < 0.0) throw SpecialFunctionError("E1 evaluated on its branch cut");
    if (std::abs(z) <= 4.0) {
        C sum = 0, term = 1;
        for (int n = 1; n < 200; ++n) {
            term *= -z / double(n);
            const C add = term / double(n);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return -kEulerGamma - std::log(z) - sum;
    }
    // e^z E1(z) = 1/(z+1- 1^2/(z+3- 2^2/(z+5- ...))).
    const double tiny = 1e-300;
    C b = z + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -double(i) * double(i);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const C del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-z);
    }
    throw SpecialFunctionError("E1 continued fraction did not converge");
}

/// Cosine integral Ci(y) = -int_y^inf cos t / t dt for y > 0.
/// Series for y <= 4; for y > 4 the complex continued fraction of e^(iy) E1(iy).
inline double ci(double y) {
    if (!(y > 0.0)) throw SpecialFunctionError("Ci requires a positive argument");
    if (y <= 4.0) {
        const double y2 = y * y;
        double sum = 0, term = 1;
        for (int k = 1; k < 100; ++k) {
            term *= -y2 / ((2.0 * k - 1) * (2.0 * k));
            const double add = term / (2.0 * k);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return kEulerGamma + std::log(y) + sum;
    }
    // h = 1/(1+iy - 1/(3+iy - 4/(5+iy - ...))) = e^(iy) E1(iy).
    using C = std::complex<double>;
    const double tiny = 1e-300;
    C b(1.0, y), c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 2; i < 100000; ++i) {
        const double a = -double(i - 1) * double(i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const C del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) {
            // E1(iy) = (cos y - i sin y) h and Ci = -Re E1(iy).
            return -(std::cos(y) * h.real() + std::sin(y) * h.imag());
        }
    }
    throw SpecialFunctionError("Ci continued fraction did not converge");
}

/// Gauss-Legendre rule on [0, 1].
struct QuadratureRule {
    std::vector<double> nodes, weights;
    std::size_t size() const noexcept { return nodes.size(); }
};

inline QuadratureRule gauss_legendre_unit(std::size_t n) {
    QuadratureRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (double(i) + 0.75) / (double(n) + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * double(k) - 1) * x * p1 - (double(k) - 1) * p0) / double(k);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1, p1 = x;
            dp = double(n) * (x * p1 - p0) / (x * x - 1);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1 - x * x) * dp * dp);
        r.nodes[i] = 0.5 * (1 - x);
        r.nodes[n - 1 - i] = 0.5 * (1 + x);
        r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
    }
    return r;
}

/// Shared Gauss-Legendre rules at levels 64 * 2^j.
inline const QuadratureRule& gauss_legendre_level(unsigned j) {
    static std::mutex mu;
    static std::map<unsigned, std::unique_ptr<QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[j];
    if (!slot) slot = std::make_unique<QuadratureRule>(gauss_legendre_unit(std::size_t(64) << j));
    return *slot;
}

}  // namespace ffh
