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

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace ffh {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational rpow(const Rational& r, unsigned e) {
    Rational out = 1;
    for (unsigned i = 0; i < e; ++i) out *= r;
    return out;
}

/// 1/b^e as an exact rational.
inline Rational inv_power(std::uint64_t b, unsigned e) {
    BigInt d = 1;
    for (unsigned i = 0; i < e; ++i) d *= b;
    return Rational(BigInt(1), d);
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    BigInt r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline std::string to_string(const Rational& r) { return r.str(); }

}  // namespace ffh
