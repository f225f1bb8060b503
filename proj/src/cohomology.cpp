#include "attrarith/cohomology.hpp"

#include <string>

#include "attrarith/error.hpp"

namespace attrarith {

namespace {

/// counts[c] = #{(a_1..a_len) in [1, d-1]^len : sum = c mod d}
template <typename T>
std::vector<T> residue_counts(Int d, Int len)
{
    std::vector<T> acc(static_cast<std::size_t>(d), T(0));
    acc[0] = 1;
    for (Int step = 0; step < len; ++step) {
        std::vector<T> next(acc.size(), T(0));
        for (Int c = 0; c < d; ++c) {
            if (acc[static_cast<std::size_t>(c)] == 0)
                continue;
            for (Int a = 1; a < d; ++a)
                next[static_cast<std::size_t>((c + a) % d)] += acc[static_cast<std::size_t>(c)];
        }
        acc = std::move(next);
    }
    return acc;
}

using CharacterTable = std::vector<std::vector<Int>>;

/// H^i(X^m) split by the character of the last coordinate.
CharacterTable character_cohomology(Int d, Int m)
{
    const auto du = static_cast<std::size_t>(d);
    if (m == 0)
        return {std::vector<Int>(du, 1)};
    CharacterTable h(static_cast<std::size_t>(2 * m + 1), std::vector<Int>(du, 0));
    for (Int i = 0; i <= 2 * m; i += 2)
        if (i != m)
            h[static_cast<std::size_t>(i)][0] = 1;
    const auto rest = residue_counts<Int>(d, m + 1);
    auto& mid = h[static_cast<std::size_t>(m)];
    for (Int c = 1; c < d; ++c)
        mid[static_cast<std::size_t>(c)] = rest[static_cast<std::size_t>(mod_floor(-c, d))];
    if (m % 2 == 0)
        mid[0] += 1;
    return h;
}

Int betti(Int d, Int m, Int i)
{
    if (m < 0 || i < 0 || i > 2 * m)
        return 0;
    const CharacterTable table = character_cohomology(d, m);
    Int total = 0;
    for (Int v : table[static_cast<std::size_t>(i)])
        total += v;
    return total;
}

Int product_betti(Int d, Int m1, Int m2, Int i)
{
    Int total = 0;
    for (Int a = 0; a <= i; ++a)
        total += betti(d, m1, a) * betti(d, m2, i - a);
    return total;
}

Int invariant_dimension(Int d, Int r, Int s, Int degree)
{
    const auto h1 = character_cohomology(d, r);
    const auto h2 = character_cohomology(d, s);
    Int total = 0;
    for (Int i = 0; i < static_cast<Int>(h1.size()); ++i) {
        const Int j = degree - i;
        if (j < 0 || j >= static_cast<Int>(h2.size()))
            continue;
        for (Int c = 0; c < d; ++c)
            total += h1[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] *
                     h2[static_cast<std::size_t>(j)][static_cast<std::size_t>(mod_floor(-c, d))];
    }
    return total;
}

} // namespace

HJResolution hj_expand(Int n, Int q)
{
    if (q < 1 || q >= n)
        throw Error(ErrorKind::OutOfRange, "need 1 <= q < n, got (n,q) = (" + std::to_string(n) + "," +
                                               std::to_string(q) + ")");
    if (gcd(n, q) != 1)
        throw Error(ErrorKind::NotCoprime, std::to_string(n) + " and " + std::to_string(q) + " are not coprime");
    HJResolution res{n, q, {}};
    Int num = n;
    Int den = q;
    while (den != 0) {
        const Int b = (num + den - 1) / den;
        res.steps.push_back(b);
        const Int rem = b * den - num;
        num = den;
        den = rem;
    }
    return res;
}

mpq_class hj_reconstruct(const std::vector<Int>& steps)
{
    if (steps.empty())
        throw Error(ErrorKind::InvalidStep, "empty step list");
    for (Int b : steps)
        if (b < 2)
            throw Error(ErrorKind::InvalidStep, "step " + std::to_string(b) + " is below 2");
    mpq_class value(static_cast<long>(steps.back()));
    for (auto it = steps.rbegin() + 1; it != steps.rend(); ++it)
        value = mpq_class(static_cast<long>(*it)) - 1 / value;
    value.canonicalize();
    return value;
}

ResolutionContribution resolution_contributions(const std::vector<SingularCurveDatum>& curves)
{
    ResolutionContribution out;
    for (const auto& c : curves) {
        if (c.genus < 0)
            throw Error(ErrorKind::InvalidArgument, "negative genus " + std::to_string(c.genus));
        const Int s = hj_expand(c.n, c.q).length();
        out.delta_h2 += s;
        out.delta_h3 += c.genus * s;
    }
    return out;
}

mpz_class fermat_primitive_dim(Int d, Int n)
{
    if (d < 2 || n < 0)
        throw Error(ErrorKind::InvalidArgument, "need d >= 2 and n >= 0");
    return residue_counts<mpz_class>(d, n + 2)[0];
}

std::vector<mpz_class> fermat_hodge_numbers(Int d, Int n)
{
    if (d < 2 || n < 0)
        throw Error(ErrorKind::InvalidArgument, "need d >= 2 and n >= 0");
    // coefficients of (x + ... + x^(d-1))^(n+2), read off at multiples of d
    const Int len = n + 2;
    std::vector<mpz_class> poly{1};
    for (Int step = 0; step < len; ++step) {
        std::vector<mpz_class> next(poly.size() + static_cast<std::size_t>(d - 1), 0);
        for (std::size_t e = 0; e < poly.size(); ++e)
            if (poly[e] != 0)
                for (Int a = 1; a < d; ++a)
                    next[e + static_cast<std::size_t>(a)] += poly[e];
        poly = std::move(next);
    }
    std::vector<mpz_class> out;
    for (Int w = 1; w <= n + 1; ++w) {
        const auto e = static_cast<std::size_t>(w * d);
        out.push_back(e < poly.size() ? poly[e] : mpz_class(0));
    }
    return out;
}

std::vector<Int> fermat_betti(Int d, Int m)
{
    if (d < 2 || m < 0)
        throw Error(ErrorKind::InvalidArgument, "need d >= 2 and m >= 0");
    std::vector<Int> out;
    for (Int i = 0; i <= 2 * m; ++i)
        out.push_back(betti(d, m, i));
    return out;
}

ShiodaKatsuraCheck shioda_katsura_check(Int d, Int r, Int s)
{
    if (d < 3 || d > 6 || r < 1 || r > 2 || s < 1 || s > 2)
        throw Error(ErrorKind::UnsupportedRange, "supported range is d in 3..6, r and s in 1..2");
    ShiodaKatsuraCheck out;
    out.d = d;
    out.r = r;
    out.s = s;
    const Int top = r + s;
    out.lhs_fermat = betti(d, top, top);
    for (Int j = 1; j <= r; ++j)
        out.lhs_lower += betti(d, r - 1, top - 2 * j);
    for (Int k = 1; k <= s; ++k)
        out.lhs_lower += betti(d, s - 1, top - 2 * k);
    out.rhs_invariant = invariant_dimension(d, r, s, top);
    out.rhs_product = product_betti(d, r - 1, s - 1, top - 2);
    out.lhs = out.lhs_fermat + out.lhs_lower;
    out.rhs = out.rhs_invariant + out.rhs_product;
    out.equal = out.lhs == out.rhs;
    out.conventions = {
        "X^0 is d points; H^0 carries each character once",
        "even degrees off the middle carry one class of character 0",
        "middle degree carries the primitive characters, plus one character-0 class when the dimension is even",
        "Tate twists preserve dimension",
    };
    return out;
}

} // namespace attrarith
