#pragma once

// Exact integer arithmetic: totients, residue systems, positive definite
// binary quadratic forms and exact elements of imaginary quadratic fields.

#include <cstdint>
#include <compare>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <gmpxx.h>

namespace attrarith {

using Int = std::int64_t;
using IntMatrix2 = Eigen::Matrix<Int, 2, 2>;
using IntVector = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;

Int gcd(Int a, Int b) noexcept;

/// Least positive residue of x modulo m, in [0, m).
constexpr Int mod_floor(Int x, Int m) noexcept
{
    const Int r = x % m;
    return r < 0 ? r + m : r;
}

Int euler_phi(Int n);

struct ResidueSystem {
    Int modulus = 1;
    std::vector<Int> units;
};

/// The unit group (Z/nZ)* listed in increasing order. For n = 1 the single
/// class is listed as 1 so that |units| = phi(1) = 1.
ResidueSystem units_mod(Int n);

/// n = square * square * core with core squarefree and carrying the sign of n.
struct SquarefreeSplit {
    Int core;
    Int square;
};
SquarefreeSplit squarefree_split(Int n);

/// Negative discriminant written as conductor^2 * fundamental.
struct FundamentalSplit {
    Int fundamental;
    Int conductor;
};
FundamentalSplit fundamental_split(Int disc);

bool is_discriminant(Int disc) noexcept;

/// a x^2 + b xy + c y^2.
struct BinaryQuadraticForm {
    Int a = 0;
    Int b = 0;
    Int c = 0;

    Int disc() const noexcept { return b * b - 4 * a * c; }
    bool positive_definite() const noexcept { return disc() < 0 && a > 0; }
    /// |b| <= a <= c with b >= 0 on the boundary |b| = a or a = c.
    bool reduced() const noexcept;
    Int content() const noexcept;
    bool primitive() const noexcept { return content() == 1; }
    Int evaluate(Int x, Int y) const noexcept { return a * x * x + b * x * y + c * y * y; }

    /// The form v -> f(M v).
    BinaryQuadraticForm transformed(const IntMatrix2& m) const noexcept;

    auto operator<=>(const BinaryQuadraticForm&) const = default;
};

std::ostream& operator<<(std::ostream& os, const BinaryQuadraticForm& f);

struct FormReduction {
    BinaryQuadraticForm form;
    /// Unimodular M with input.transformed(M) == form.
    IntMatrix2 transform;
};

FormReduction reduce_form(const BinaryQuadraticForm& f);

/// All reduced primitive positive definite forms of discriminant disc, sorted
/// by (a, b). The length is the class number h(disc).
std::vector<BinaryQuadraticForm> class_group_forms(Int disc);

Int class_number(Int disc);

/// Exact element re + rad * sqrt(d) of Q(sqrt(d)).
class QuadraticNumber {
public:
    QuadraticNumber() = default;
    QuadraticNumber(mpq_class re, mpq_class rad, Int d);
    static QuadraticNumber rational(mpq_class re, Int d) { return {std::move(re), 0, d}; }

    const mpq_class& rational_part() const noexcept { return re_; }
    const mpq_class& radical_part() const noexcept { return rad_; }
    Int radicand() const noexcept { return d_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(rad_) == 0; }
    bool is_rational() const { return sgn(rad_) == 0; }

    QuadraticNumber conj() const { return {re_, -rad_, d_}; }

    QuadraticNumber operator-() const { return {-re_, -rad_, d_}; }
    QuadraticNumber& operator+=(const QuadraticNumber& o);
    QuadraticNumber& operator-=(const QuadraticNumber& o);
    QuadraticNumber& operator*=(const QuadraticNumber& o);
    QuadraticNumber& operator/=(const QuadraticNumber& o);

    friend QuadraticNumber operator+(QuadraticNumber l, const QuadraticNumber& r) { return l += r; }
    friend QuadraticNumber operator-(QuadraticNumber l, const QuadraticNumber& r) { return l -= r; }
    friend QuadraticNumber operator*(QuadraticNumber l, const QuadraticNumber& r) { return l *= r; }
    friend QuadraticNumber operator/(QuadraticNumber l, const QuadraticNumber& r) { return l /= r; }
    friend QuadraticNumber operator*(const mpq_class& s, QuadraticNumber r)
    {
        r.re_ *= s;
        r.rad_ *= s;
        return r;
    }

    bool operator==(const QuadraticNumber& o) const;

    std::string to_string() const;

private:
    void check_field(const QuadraticNumber& o) const;

    mpq_class re_{0};
    mpq_class rad_{0};
    Int d_ = -1;
};

/// (num_rational + num_radical * sqrt(disc)) / den, normalized so that disc is
/// squarefree, den > 0 and gcd(num_rational, num_radical, den) = 1.
struct QuadraticSurd {
    Int num_rational = 0;
    Int num_radical = 0;
    Int den = 1;
    Int disc = -1;

    static QuadraticSurd make(Int num_rational, Int num_radical, Int den, Int disc);

    bool upper_half_plane() const noexcept { return disc < 0 && num_radical > 0; }
    QuadraticNumber value() const;

    bool operator==(const QuadraticSurd&) const = default;

    /// "(r + m·√D)/den", the form used in serialized output.
    std::string to_string() const;
};

/// Upper half-plane root (-b + sqrt(disc)) / (2a) of a positive definite form.
QuadraticSurd form_root(const BinaryQuadraticForm& f);

} // namespace attrarith
