#pragma once

// RAII wrappers over MPFR. Every operation produces a result at the larger of
// its operands' precisions, so precision is never silently lost.

#include <complex>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

namespace attrarith {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 256;
inline constexpr Precision kMinPrecision = 64;

class BigFloat {
public:
    explicit BigFloat(Precision prec = kDefaultPrecision);
    BigFloat(long value, Precision prec);
    BigFloat(double value, Precision prec);
    BigFloat(const mpz_class& value, Precision prec);
    BigFloat(const mpq_class& value, Precision prec);
    /// Parses a decimal string, rounding to nearest. Throws on malformed input.
    BigFloat(std::string_view text, Precision prec);

    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    /// Same value re-rounded to prec bits.
    BigFloat with_precision(Precision prec) const;

    Precision precision() const noexcept { return mpfr_get_prec(v_); }
    mpfr_srcptr get() const noexcept { return v_; }
    mpfr_ptr get() noexcept { return v_; }

    static BigFloat pi(Precision prec);

    double to_double() const noexcept { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Nearest integer (ties away from zero).
    mpz_class round_to_integer() const;
    /// Shortest decimal scientific string that reads back to the same value
    /// at this precision.
    std::string to_string() const;
    std::string to_string(int significant_digits) const;

    bool is_zero() const noexcept { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const noexcept { return mpfr_number_p(v_) != 0; }
    int sign() const noexcept { return mpfr_sgn(v_); }
    /// Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
    long exponent() const noexcept;

    BigFloat operator-() const;
    BigFloat& operator+=(const BigFloat& o);
    BigFloat& operator-=(const BigFloat& o);
    BigFloat& operator*=(const BigFloat& o);
    BigFloat& operator/=(const BigFloat& o);
    BigFloat& operator*=(long o);
    BigFloat& operator/=(long o);

    friend BigFloat operator+(const BigFloat& l, const BigFloat& r);
    friend BigFloat operator-(const BigFloat& l, const BigFloat& r);
    friend BigFloat operator*(const BigFloat& l, const BigFloat& r);
    friend BigFloat operator/(const BigFloat& l, const BigFloat& r);
    friend BigFloat operator*(BigFloat l, long r) { return l *= r; }
    friend BigFloat operator*(long l, BigFloat r) { return r *= l; }
    friend BigFloat operator/(BigFloat l, long r) { return l /= r; }

    friend bool operator<(const BigFloat& l, const BigFloat& r) { return mpfr_less_p(l.v_, r.v_) != 0; }
    friend bool operator>(const BigFloat& l, const BigFloat& r) { return r < l; }
    friend bool operator<=(const BigFloat& l, const BigFloat& r) { return mpfr_lessequal_p(l.v_, r.v_) != 0; }
    friend bool operator>=(const BigFloat& l, const BigFloat& r) { return r <= l; }
    friend bool operator==(const BigFloat& l, const BigFloat& r) { return mpfr_equal_p(l.v_, r.v_) != 0; }
    friend bool operator<(const BigFloat& l, double r) { return mpfr_cmp_d(l.v_, r) < 0; }
    friend bool operator>(const BigFloat& l, double r) { return mpfr_cmp_d(l.v_, r) > 0; }

private:
    mpfr_t v_;
};

BigFloat abs(const BigFloat& x);
BigFloat sqrt(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat sin(const BigFloat& x);
BigFloat cos(const BigFloat& x);
BigFloat round(const BigFloat& x);
BigFloat pow(const BigFloat& x, long n);
/// 2^e at the given precision.
BigFloat exp2i(long e, Precision prec);

class BigComplex {
public:
    explicit BigComplex(Precision prec = kDefaultPrecision) : re_(prec), im_(prec) {}
    BigComplex(BigFloat re, BigFloat im);
    BigComplex(std::complex<double> z, Precision prec);
    BigComplex(long re, long im, Precision prec) : re_(re, prec), im_(im, prec) {}

    const BigFloat& re() const noexcept { return re_; }
    const BigFloat& im() const noexcept { return im_; }
    BigFloat& re() noexcept { return re_; }
    BigFloat& im() noexcept { return im_; }

    Precision precision() const noexcept;
    BigComplex with_precision(Precision prec) const;

    BigComplex conj() const { return {re_, -im_}; }
    BigFloat norm() const;
    BigFloat abs() const;
    std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

    BigComplex operator-() const { return {-re_, -im_}; }
    BigComplex& operator+=(const BigComplex& o);
    BigComplex& operator-=(const BigComplex& o);
    BigComplex& operator*=(const BigComplex& o);
    BigComplex& operator/=(const BigComplex& o);
    BigComplex& operator*=(const BigFloat& s);
    BigComplex& operator*=(long s);
    BigComplex& operator/=(long s);

    friend BigComplex operator+(BigComplex l, const BigComplex& r) { return l += r; }
    friend BigComplex operator-(BigComplex l, const BigComplex& r) { return l -= r; }
    friend BigComplex operator*(BigComplex l, const BigComplex& r) { return l *= r; }
    friend BigComplex operator/(BigComplex l, const BigComplex& r) { return l /= r; }
    friend BigComplex operator*(BigComplex l, const BigFloat& r) { return l *= r; }
    friend BigComplex operator*(const BigFloat& l, BigComplex r) { return r *= l; }
    friend BigComplex operator*(BigComplex l, long r) { return l *= r; }
    friend BigComplex operator*(long l, BigComplex r) { return r *= l; }
    friend BigComplex operator/(BigComplex l, long r) { return l /= r; }

private:
    BigFloat re_;
    BigFloat im_;
};

BigComplex exp(const BigComplex& z);
/// exp(2 pi i z).
BigComplex exp_2pi_i(const BigComplex& z);
BigComplex pow(const BigComplex& z, long n);
BigFloat abs(const BigComplex& z);

} // namespace attrarith
