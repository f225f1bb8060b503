#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance binary. Nothing here calls the library routine it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "attrarith/arith.hpp"
#include "attrarith/bigfloat.hpp"

namespace testsupport {

using attrarith::Int;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    Int integer(Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(eng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

    /// Matrix in SL(2, Z) with entries bounded by bound.
    attrarith::IntMatrix2 sl2(Int bound)
    {
        for (;;) {
            const Int a = integer(-bound, bound), b = integer(-bound, bound);
            const Int c = integer(-bound, bound), d = integer(-bound, bound);
            if (a * d - b * c == 1) {
                attrarith::IntMatrix2 m;
                m << a, b, c, d;
                return m;
            }
        }
    }

    /// Charge invariants (p2, q2, pq) with p2 > 0 and negative discriminant.
    std::array<Int, 3> attractor_charge(Int bound)
    {
        const Int p2 = integer(1, bound);
        const Int pq = integer(-bound, bound);
        const Int q2 = pq * pq / p2 + integer(1, bound);
        return {p2, q2, pq};
    }

private:
    std::mt19937_64 eng_;
};

inline Int brute_phi(Int n)
{
    Int count = 0;
    for (Int m = 1; m <= n; ++m)
        if (std::gcd(m, n) == 1)
            ++count;
    return count;
}

struct Form {
    Int a, b, c;
    bool operator==(const Form&) const = default;
};

/// Coefficients of v -> f(M v) written out by hand.
inline Form act(const Form& f, Int m00, Int m01, Int m10, Int m11)
{
    return {f.a * m00 * m00 + f.b * m00 * m10 + f.c * m10 * m10,
            2 * f.a * m00 * m01 + f.b * (m00 * m11 + m01 * m10) + 2 * f.c * m10 * m11,
            f.a * m01 * m01 + f.b * m01 * m11 + f.c * m11 * m11};
}

/// Class number of disc < 0 by SL(2, Z) search: primitive forms with
/// |b| <= a <= c are joined whenever a matrix with entries in [-3, 3] carries
/// one onto another; components are counted.
inline Int brute_class_number(Int disc)
{
    std::vector<Form> forms;
    for (Int a = 1; 3 * a * a <= -disc; ++a)
        for (Int b = -a; b <= a; ++b) {
            const Int num = b * b - disc;
            if (num % (4 * a) != 0)
                continue;
            const Int c = num / (4 * a);
            if (c < a || std::gcd(std::gcd(a, b), c) != 1)
                continue;
            forms.push_back({a, b, c});
        }
    std::vector<std::size_t> parent(forms.size());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (Int m00 = -3; m00 <= 3; ++m00)
            for (Int m01 = -3; m01 <= 3; ++m01)
                for (Int m10 = -3; m10 <= 3; ++m10)
                    for (Int m11 = -3; m11 <= 3; ++m11) {
                        if (m00 * m11 - m01 * m10 != 1)
                            continue;
                        const Form g = act(forms[i], m00, m01, m10, m11);
                        for (std::size_t j = 0; j < forms.size(); ++j)
                            if (forms[j] == g)
                                parent[find(i)] = find(j);
                    }
    Int components = 0;
    for (std::size_t i = 0; i < forms.size(); ++i)
        if (find(i) == i)
            ++components;
    return components;
}

/// #{(a_0..a_{n+1}) in [1, d-1]^(n+2) : sum = 0 mod d} by enumeration, and
/// the same count split by sum / d.
struct FermatBrute {
    Int total = 0;
    std::vector<Int> by_weight;
};

inline FermatBrute brute_fermat(Int d, Int n)
{
    const Int len = n + 2;
    FermatBrute out;
    out.by_weight.assign(static_cast<std::size_t>(n + 1), 0);
    std::vector<Int> t(static_cast<std::size_t>(len), 1);
    for (;;) {
        Int sum = 0;
        for (Int v : t)
            sum += v;
        if (sum % d == 0) {
            ++out.total;
            ++out.by_weight[static_cast<std::size_t>(sum / d - 1)];
        }
        std::size_t i = 0;
        while (i < t.size() && t[i] == d - 1)
            t[i++] = 1;
        if (i == t.size())
            break;
        ++t[i];
    }
    return out;
}

/// Largest distance in a greedy nearest matching of two equally long lists.
inline attrarith::BigFloat multiset_distance(const std::vector<attrarith::BigComplex>& xs,
                                             const std::vector<attrarith::BigComplex>& ys)
{
    attrarith::BigFloat worst(0L, 64);
    if (xs.size() != ys.size())
        return attrarith::BigFloat(1e300, 64);
    std::vector<bool> used(ys.size(), false);
    for (const auto& x : xs) {
        std::size_t best = ys.size();
        attrarith::BigFloat best_d(1e300, 64);
        for (std::size_t j = 0; j < ys.size(); ++j) {
            if (used[j])
                continue;
            const attrarith::BigFloat dist = (x - ys[j]).abs();
            if (dist < best_d) {
                best_d = dist;
                best = j;
            }
        }
        used[best] = true;
        if (best_d > worst)
            worst = best_d.with_precision(64);
    }
    return worst;
}

inline double to_d(const attrarith::BigFloat& x)
{
    return x.to_double();
}

} // namespace testsupport
