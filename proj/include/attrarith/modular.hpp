#pragma once

// Eisenstein series, the discriminant and the j-invariant evaluated from exact
// integer q-expansions; Hilbert class polynomials and the algebraicity
// certificate for j at an attractor point.

#include <cstddef>
#include <string>
#include <vector>

#include "attrarith/arith.hpp"
#include "attrarith/attractor.hpp"
#include "attrarith/bigfloat.hpp"

namespace attrarith {

inline constexpr std::size_t kDefaultMaxTerms = 200000;

/// Truncated q-expansion sum_{n <= N} c_n q^n with exact integer coefficients.
struct QSeries {
    int weight = 0;
    std::vector<mpz_class> coeffs;

    std::size_t truncation_order() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }

    /// Horner evaluation at q, coefficients embedded at q's precision.
    BigComplex evaluate(const BigComplex& q) const;
};

/// Product truncated at the smaller of the two orders.
QSeries operator*(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);

/// E_4 = 1 + 240 sum sigma_3(n) q^n or E_6 = 1 - 504 sum sigma_5(n) q^n.
QSeries eisenstein_series(int k, std::size_t order);

/// Delta = (E_4^3 - E_6^2) / 1728, divided exactly.
QSeries delta_series(std::size_t order);

/// Smallest N for which coefficients bounded by 525 n^6 leave a tail below
/// 2^-bits at |q| = abs_q. Returns max_order + 1 when no N <= max_order works.
std::size_t truncation_order_for(double log2_abs_q, double bits, std::size_t max_order);

/// tau' = (a tau + b) / (c tau + d) with |Re tau'| <= 1/2 and |tau'| >= 1.
struct FundamentalReduction {
    BigComplex tau;
    IntMatrix2 matrix;
};

FundamentalReduction reduce_to_fundamental(const BigComplex& tau);

/// Moebius action of an integer matrix.
BigComplex act(const IntMatrix2& m, const BigComplex& tau);

BigComplex embed(const QuadraticSurd& s, Precision prec);

struct ModularValues {
    BigComplex e4;
    BigComplex e6;
    BigComplex delta;
    FundamentalReduction reduction;
    std::size_t terms = 0;
    /// log2 of the truncation tail bound relative to the series scale.
    double log2_tail = 0;
    Precision working_precision = 0;
};

/// E_4(tau), E_6(tau) and Delta(tau) at the input tau (not the reduced
/// point), computed at working precision prec.
ModularValues modular_values(const BigComplex& tau, Precision prec,
                             std::size_t max_terms = kDefaultMaxTerms);

struct JValue {
    BigComplex value;
    BigComplex reduced_tau;
    std::size_t terms = 0;
    Precision working_precision = 0;
    /// log2 of the accumulated absolute error bound (truncation + rounding).
    double log2_error = 0;
};

/// j(tau) with absolute error below 2^(-prec/2).
JValue j_value(const BigComplex& tau, Precision prec = kDefaultPrecision,
               std::size_t max_terms = kDefaultMaxTerms);

/// Certified lower bound for |Delta(tau)| from the product expansion.
BigFloat delta_abs_lower_bound(const BigComplex& tau);

struct ClassPolynomial {
    Int disc = 0;
    std::vector<BinaryQuadraticForm> forms;
    /// Ascending degree, monic.
    std::vector<mpz_class> coeffs;
    BigFloat max_residual{64};
    Precision precision = 0;

    std::size_t degree() const noexcept { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    BigComplex evaluate(const BigComplex& x) const;
};

/// max(floor_prec, ceil(pi sqrt|D| h / ln 2) + 64 h).
Precision hcp_precision(Int disc, Int class_number, Precision floor_prec = kDefaultPrecision);

/// prod over reduced forms of (x - j((-b + sqrt(disc)) / 2a)), rounded to
/// integers. Fails with RoundingFailed when any coefficient lies 0.25 or more
/// from an integer. The per-form evaluations run concurrently when parallel is
/// set; the result is bit-identical either way.
ClassPolynomial hilbert_class_polynomial(Int disc, Precision floor_prec = kDefaultPrecision,
                                         bool parallel = true);

/// |H(j(tau))| at the root tau of the principal form of poly.disc, evaluated
/// with enough guard bits to absorb the size of the coefficients. Depends only
/// on disc, coeffs and prec.
BigFloat principal_root_residual(const ClassPolynomial& poly, Precision prec = kDefaultPrecision);

struct CmCertificate {
    AttractorPoint point;
    ClassPolynomial polynomial;
    BigComplex j;
    BigFloat residual{64};
    BigFloat threshold{64};
    bool certified = false;
    /// Degree of K_D(j(tau)) over K_D.
    Int class_number = 0;
    /// "Hilbert class field" for maximal orders, "ring class field" otherwise.
    std::string field_label;
    Precision precision = 0;
};

/// Evaluates the class polynomial of the attractor discriminant at
/// j(tau_{p,q}) and certifies |H(j)| < 2^(-prec/4).
CmCertificate certify_attractor_cm(const ChargeData& c, Precision prec = kDefaultPrecision);

} // namespace attrarith
