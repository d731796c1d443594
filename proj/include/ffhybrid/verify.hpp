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
#include <limits>
#include <vector>

#include "hybrid.hpp"
#include "lfunc.hpp"

namespace ffh {

struct IdentityOptions {
    int x = 1;
    int m = 200;              ///< period truncation for Z_X
    double s_explicit = 2.0;  ///< real point for the explicit formula
    int m_explicit = 400;
    double tol_hybrid = 1e-3;
    double tol_explicit = 1e-4;
    double tol_short = 1e-8;
    double zero_cut = 1e-10;  ///< |L(1/2)| below this skips the hybrid comparison
};

/// Per-character residuals of the exact identities. NaN marks a skipped check.
struct IdentityRow {
    std::uint64_t index = 0;
    bool even = false;
    double l_half = 0;           ///< |L(1/2)|
    double hybrid_rel = std::numeric_limits<double>::quiet_NaN();
    double hybrid_rel_half = std::numeric_limits<double>::quiet_NaN();  ///< same with M/2
    bool perturbed = false;
    double explicit_rel = std::numeric_limits<double>::quiet_NaN();
    double short_rel = std::numeric_limits<double>::quiet_NaN();
    std::size_t critical = 0, unit = 0, other = 0;

    bool passes(const IdentityOptions& o) const {
        auto ok = [](double v, double tol) { return std::isnan(v) || v <= tol; };
        return ok(hybrid_rel, o.tol_hybrid) && ok(explicit_rel, o.tol_explicit) && ok(short_rel, o.tol_short) && other == 0;
    }
};

/// L = P_X Z_X at s = 1/2 (zero sum against quotient), the explicit formula at
/// s_explicit, and the short-sum identity, for one primitive character.
/// The prime table must reach X.
inline IdentityRow verify_character(const UnitGroup& g, const DirichletCharacter& chi, const PrimeTable& primes, const BumpProfile& bump,
                                    const IdentityOptions& o) {
    if (!chi.primitive) throw LFunctionError("identity checks need a primitive character");
    const std::uint64_t q = g.ring().field()->q();
    IdentityRow row;
    row.index = chi.index;
    row.even = chi.even;
    const auto l = l_coeffs(g, chi);
    const auto zs = l_zeros(l);
    for (const auto& z : zs.zeros) (z.kind == RootClass::critical ? row.critical : z.kind == RootClass::unit ? row.unit : row.other)++;
    const cplx lh = l.eval(0.5);
    row.l_half = std::abs(lh);
    if (row.l_half > o.zero_cut) {
        const cplx quot = z_x_quotient(l, p_x_eval(g, chi, 0.5, o.x, primes), 0.5);
        const auto full = z_x_from_zeros(zs, q, 0.5, bump, o.m);
        const auto half = z_x_from_zeros(zs, q, 0.5, bump, o.m / 2);
        row.hybrid_rel = std::abs(full.value - quot) / std::abs(quot);
        row.hybrid_rel_half = std::abs(half.value - quot) / std::abs(quot);
        row.perturbed = full.perturbed;
    }
    const auto ef = explicit_formula_sides(l, zs, g, chi, primes, o.s_explicit, bump, o.m_explicit);
    row.explicit_rel = std::abs(ef.lhs - ef.rhs()) / std::max(std::abs(ef.lhs), 1e-300);
    const auto ss = short_sum_sides(l, chi, g.modulus().degree());
    row.short_rel = std::abs(ss.lhs - ss.rhs) / std::max(1.0, std::abs(ss.lhs));
    return row;
}

}  // namespace ffh
