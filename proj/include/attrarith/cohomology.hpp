#pragma once

// Hirzebruch-Jung resolution data for cyclic quotient singularities along
// curves, and character counts for the cohomology of Fermat varieties.

#include <string>
#include <vector>

#include "attrarith/arith.hpp"

namespace attrarith {

/// Singularity type (n, q): locally z3^n = z1 z2^(n-q). steps is the
/// all->=2 continued fraction n/q = b1 - 1/(b2 - 1/(... - 1/bs)).
struct HJResolution {
    Int n = 0;
    Int q = 0;
    std::vector<Int> steps;

    /// Number of exceptional spheres.
    Int length() const noexcept { return static_cast<Int>(steps.size()); }
};

/// Throws NotCoprime or OutOfRange (q outside [1, n)).
HJResolution hj_expand(Int n, Int q);

/// Throws InvalidStep if a step is below 2 or the list is empty.
mpq_class hj_reconstruct(const std::vector<Int>& steps);

struct SingularCurveDatum {
    Int genus = 0;
    Int n = 0;
    Int q = 0;
};

struct ResolutionContribution {
    /// sum of s_i
    Int delta_h2 = 0;
    /// sum of g_i s_i
    Int delta_h3 = 0;
};

ResolutionContribution resolution_contributions(const std::vector<SingularCurveDatum>& curves);

/// #{(a_0..a_{n+1}) : 1 <= a_i <= d-1, sum = 0 mod d}
mpz_class fermat_primitive_dim(Int d, Int n);

/// Entry w-1 counts characters with sum a_i = w d, w = 1..n+1.
std::vector<mpz_class> fermat_hodge_numbers(Int d, Int n);

struct ShiodaKatsuraCheck {
    Int d = 0;
    Int r = 0;
    Int s = 0;
    /// b_{r+s}(X^{r+s})
    Int lhs_fermat = 0;
    /// sum_j b_{r+s-2j}(X^{r-1}) + sum_k b_{r+s-2k}(X^{s-1})
    Int lhs_lower = 0;
    /// mu_d-invariant part of H^{r+s}(X^r x X^s)
    Int rhs_invariant = 0;
    /// b_{r+s-2}(X^{r-1} x X^{s-1})
    Int rhs_product = 0;
    Int lhs = 0;
    Int rhs = 0;
    bool equal = false;
    /// Bookkeeping conventions the counts rely on.
    std::vector<std::string> conventions;
};

/// Dimension count of both sides of the inductive decomposition of the
/// degree-(r+s) cohomology of the Fermat (r+s)-fold. d in {3..6}, r, s in
/// {1, 2}; otherwise UnsupportedRange.
ShiodaKatsuraCheck shioda_katsura_check(Int d, Int r, Int s);

/// Betti numbers b_i of the Fermat m-fold of degree d, m >= 0, i = 0..2m.
std::vector<Int> fermat_betti(Int d, Int m);

} // namespace attrarith
