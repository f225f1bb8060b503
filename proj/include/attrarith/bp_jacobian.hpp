#pragma once

// Weighted Brieskorn-Pham curves x^d + y^(d/k) + z^(d/l) = 0 in P(1,k,l):
// holomorphic differential basis, (Z/d)^* orbits and the CM abelian factors
// of the Jacobian.

#include <array>
#include <compare>
#include <iosfwd>
#include <vector>

#include "attrarith/arith.hpp"

namespace attrarith {

struct CurveSignature {
    Int d = 0;
    Int k = 1;
    Int l = 1;

    /// Throws InvalidWeights unless d >= 1, k | d, l | d and gcd(k, l) = 1.
    static CurveSignature make(Int d, Int k, Int l);

    Int y_exponent() const noexcept { return d / k; }
    Int z_exponent() const noexcept { return d / l; }
};

/// Index (r, s, t) of the differential x^(r-1) y^(s-1) z^(t-1) dx ... with
/// 1 <= r < d, 1 <= s < d/k, 1 <= t < d/l and r + k s + l t = 0 mod d.
struct FormIndex {
    Int r = 0;
    Int s = 0;
    Int t = 0;

    auto operator<=>(const FormIndex&) const = default;
};

std::ostream& operator<<(std::ostream& os, const FormIndex& idx);

bool is_valid_index(const FormIndex& idx, const CurveSignature& sig) noexcept;

/// Lexicographic order.
std::vector<FormIndex> enumerate_forms(const CurveSignature& sig);

Int genus(const CurveSignature& sig);

/// (a r mod d, a s mod d/k, a t mod d/l), least positive residues.
FormIndex star_action(Int a, const FormIndex& idx, const CurveSignature& sig);

/// d / gcd(r, k s, l t, d)
Int level(const FormIndex& idx, const CurveSignature& sig);

/// Units a mod level(idx) with <a r'> + <a k s'> + <a l t'> = level, where
/// (r', k s', l t') is the triple divided by gcd(r, k s, l t, d) and <.> is
/// the least positive residue mod level.
std::vector<Int> cm_set(const FormIndex& idx, const CurveSignature& sig);

struct AbelianFactor {
    /// Sorted; the first member is the orbit's key.
    std::vector<FormIndex> orbit;
    Int level = 0;
    Int dimension = 0;
    /// Units modulo level, computed on the key's reduced triple.
    std::vector<Int> cm_set;
};

/// Orbits of (Z/d)^* on enumerate_forms, ordered by key.
std::vector<AbelianFactor> decompose_jacobian(const CurveSignature& sig);

using ProjectiveTriple = std::array<Int, 3>;

/// 0 < r, s, t < d with r + s + t = 0 mod d, lexicographic. Throws
/// DegreeTooSmall for d < 3.
std::vector<ProjectiveTriple> projective_basis(Int d);

/// Differentials of the plane Fermat curve of degree d fixed by the cyclic
/// quotient, i.e. those with s = 0 mod k and t = 0 mod l, relabelled as
/// (r, s/k, t/l). Sorted lexicographically.
std::vector<FormIndex> descent(const CurveSignature& sig);

Int descent_count(const CurveSignature& sig);

/// Every signature with 2 <= d <= max_d.
std::vector<CurveSignature> valid_signatures(Int max_d);

} // namespace attrarith
