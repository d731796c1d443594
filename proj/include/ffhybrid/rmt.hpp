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
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hybrid.hpp"
#include "moments.hpp"
#include "parallel.hpp"
#include "special.hpp"

namespace ffh {

/// Philox4x32 with 10 rounds.
class Philox4x32 {
   public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Block apply(Block ctr, Key key) {
        for (int r = 0; r < 10; ++r) {
            if (r) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * ctr[0];
            const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * ctr[2];
            ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1), std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
        }
        return ctr;
    }
};

/// One reproducible stream: key = (seed, stream), counter = block number.
class RandomStream {
   public:
    RandomStream(std::uint32_t seed, std::uint32_t stream) : key_{seed, stream} {}

    std::uint32_t seed() const noexcept { return key_[0]; }
    std::uint32_t stream() const noexcept { return key_[1]; }

    std::uint32_t next_u32() {
        if (used_ == 4) {
            buf_ = Philox4x32::apply({std::uint32_t(block_), std::uint32_t(block_ >> 32), 0, 0}, key_);
            ++block_;
            used_ = 0;
        }
        return buf_[used_++];
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    double uniform() {
        const std::uint64_t hi = next_u32(), lo = next_u32();
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return (double(bits) + 0.5) * 0x1p-53;
    }

    /// Standard normal by Box-Muller, both outputs used.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * M_PI * uniform();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

   private:
    Philox4x32::Key key_;
    Philox4x32::Block buf_{};
    std::uint64_t block_ = 0;
    unsigned used_ = 4;
    double spare_ = 0;
    bool has_spare_ = false;
};

class RmtError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct UnitarySample {
    int n = 0;
    std::vector<double> phases;  ///< sorted, in (-pi, pi]
    double unitarity_residual = 0;
    std::uint32_t stream = 0;
};

/// Haar unitary via QR of a complex Ginibre matrix, R's diagonal phases folded into Q.
inline Eigen::MatrixXcd haar_unitary(int n, RandomStream& rng) {
    if (n < 1) throw std::invalid_argument("matrix size must be >= 1");
    Eigen::MatrixXcd z(n, n);
    const double s = std::sqrt(0.5);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double re = rng.normal(), im = rng.normal();
            z(i, j) = std::complex<double>(re * s, im * s);
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd& r = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const std::complex<double> d = r(j, j);
        const double a = std::abs(d);
        if (a > 0) q.col(j) *= d / a;
    }
    return q;
}

inline UnitarySample sample_haar_unitary(int n, RandomStream& rng) {
    for (int attempt = 0; attempt < 4; ++attempt) {
        const Eigen::MatrixXcd u = haar_unitary(n, rng);
        UnitarySample out;
        out.n = n;
        out.stream = rng.stream();
        out.unitarity_residual = (u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
        if (out.unitarity_residual >= 1e-12) continue;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, false);
        if (es.info() != Eigen::Success) continue;
        for (int i = 0; i < n; ++i) out.phases.push_back(std::arg(es.eigenvalues()(i)));
        std::sort(out.phases.begin(), out.phases.end());
        return out;
    }
    throw RmtError("Haar sampling failed repeatedly");
}

struct MonteCarloValue {
    double mean = 0;
    double stderr_ = 0;
    std::size_t samples = 0;
};

namespace detail {
inline MonteCarloValue summarize(const std::vector<double>& v) {
    MonteCarloValue out;
    out.samples = v.size();
    if (v.empty()) return out;
    out.mean = pairwise_sum(v) / double(v.size());
    if (v.size() > 1) {
        std::vector<double> dev(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - out.mean) * (v[i] - out.mean);
        out.stderr_ = std::sqrt(pairwise_sum(dev) / double(v.size() - 1) / double(v.size()));
    }
    return out;
}

/// Samples are split into fixed blocks of streams so the result does not depend on the thread count.
template <class F>
std::vector<double> per_sample(std::size_t samples, std::uint32_t seed, F&& fn, unsigned threads) {
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (samples + kBlock - 1) / kBlock;
    auto parts = parallel_map(
        blocks,
        [&](std::size_t b) {
            RandomStream rng(seed, std::uint32_t(b));
            std::vector<double> out;
            for (std::size_t i = b * kBlock; i < std::min(samples, (b + 1) * kBlock); ++i) out.push_back(fn(rng));
            return out;
        },
        threads);
    std::vector<double> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}
}  // namespace detail

/// |prod_n (1 - e^(i(theta_n - theta)))|^(2k).
inline double char_poly_power(const std::vector<double>& phases, double theta, unsigned k) {
    double log_abs = 0;
    for (double t : phases) log_abs += std::log(std::abs(2.0 * std::sin(0.5 * (t - theta))));
    return std::exp(2.0 * double(k) * log_abs);
}

/// Monte Carlo E|Z(U, theta)|^(2k) over Haar U(N).
inline MonteCarloValue char_poly_moment(int n, unsigned k, double theta, std::size_t samples, std::uint32_t seed, unsigned threads = 0) {
    if (k == 0) return {1.0, 0.0, samples};
    auto v = detail::per_sample(samples, seed, [&](RandomStream& rng) { return char_poly_power(sample_haar_unitary(n, rng).phases, theta, k); }, threads);
    return detail::summarize(v);
}

/// E|Z|^(2k) for N <= 3 by the trapezoid rule on [0, 2pi)^N with the CUE joint density
/// (2pi)^-N / N! prod_{j<l} |e^(i t_j) - e^(i t_l)|^2. The integrand is a trigonometric
/// polynomial, so the rule is exact once the grid exceeds its degree.
inline double cue_moment_by_integration(int n, unsigned k, int grid = 48) {
    if (n < 1 || n > 3) throw std::invalid_argument("integration oracle supports 1 <= N <= 3");
    std::vector<double> ang(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) ang[std::size_t(i)] = 2.0 * M_PI * i / grid;
    double total = 0;
    std::vector<int> idx(std::size_t(n), 0);
    double norm = 1;
    for (int i = 1; i <= n; ++i) norm *= i;
    while (true) {
        double vdm = 1, z = 1;
        for (int a = 0; a < n; ++a) {
            const double ta = ang[std::size_t(idx[std::size_t(a)])];
            z *= std::pow(2.0 * std::abs(std::sin(0.5 * ta)), 2.0 * double(k));
            for (int b = a + 1; b < n; ++b) {
                const double d = 2.0 * std::sin(0.5 * (ta - ang[std::size_t(idx[std::size_t(b)])]));
                vdm *= d * d;
            }
        }
        total += vdm * z;
        int p = 0;
        while (p < n && ++idx[std::size_t(p)] == grid) idx[std::size_t(p++)] = 0;
        if (p == n) break;
    }
    return total / std::pow(double(grid), n) / norm;
}

/// int u(x) Ci(|theta + 2 pi m| (log q) X log x) dx summed over phases and |m| <= M,
/// through int u(x) Ci(a log x) dx = -Re U(i a).
inline double hadamard_phase_sum(const std::vector<double>& phases, const PeriodicUSum& kernel, double log_q, int x_param, int m_max) {
    const double scale = log_q * double(x_param);
    double s = 0;
    for (double t : phases) {
        if (t == 0.0) t = 1e-12;
        s -= kernel.progression(cplx(0, t * scale), 2.0 * M_PI * scale, m_max).real();
    }
    return s;
}

struct RmtComparison {
    MonteCarloValue average;
    double surrogate = 0;  ///< f(k) (N / (log q e^gamma X))^(k^2)
    double ratio = 0;
};

/// Monte Carlo average of exp(2k * hadamard_phase_sum) over Haar U(N).
inline RmtComparison hadamard_rmt_average(int n, std::uint64_t q, const BumpProfile& bump, unsigned k, int m_max, std::size_t samples,
                                          std::uint32_t seed, unsigned threads = 0) {
    if (m_max < 0) throw std::invalid_argument("period truncation must be >= 0");
    const double lq = std::log(double(q));
    const int x = bump.x_param();
    RmtComparison out;
    out.surrogate = to_double(f_k(k)) * std::pow(double(n) / (lq * kExpEulerGamma * double(x)), double(k * k));
    if (k == 0) {
        out.average = {1.0, 0.0, samples};
        out.ratio = 1.0 / out.surrogate;
        return out;
    }
    const double scale = lq * double(x);
    PeriodicUSum kernel(bump, scale * (M_PI + 2.0 * M_PI * m_max));
    auto v = detail::per_sample(
        samples, seed,
        [&](RandomStream& rng) {
            const auto u = sample_haar_unitary(n, rng);
            return std::exp(2.0 * double(k) * hadamard_phase_sum(u.phases, kernel, lq, x, m_max));
        },
        threads);
    out.average = detail::summarize(v);
    out.ratio = out.average.mean / out.surrogate;
    return out;
}

}  // namespace ffh
