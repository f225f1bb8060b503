#pragma once

// Weierstrass models y^2 = x^3 + A x + B of the curves C / (Z + Z tau),
// their torsion points through the Weierstrass p-function, and Weber values.

#include <optional>
#include <vector>

#include "attrarith/bigfloat.hpp"
#include "attrarith/modular.hpp"

namespace attrarith {

struct WeierstrassModel {
    BigComplex A;
    BigComplex B;
    /// -16 (4 A^3 + 27 B^2)
    BigComplex delta;
    BigComplex j;
    /// Lattice Z + Z tau the model was uniformized from, if any.
    std::optional<BigComplex> source_tau;
    /// Accumulated twist u: the model is (x, y) -> (u^2 x, u^3 y) of the
    /// lattice model of source_tau.
    BigComplex twist;
    Precision precision = kDefaultPrecision;

    /// A model given by its coefficients alone; it carries no lattice, so
    /// torsion points cannot be enumerated on it.
    static WeierstrassModel from_coefficients(BigComplex A, BigComplex B);

    BigComplex g2() const { return A * -4L; }
    BigComplex g3() const { return B * -4L; }
    /// x^3 + A x + B
    BigComplex rhs(const BigComplex& x) const;
};

/// g2 = (4 pi^4 / 3) E4(tau), g3 = (8 pi^6 / 27) E6(tau), A = -g2/4, B = -g3/4.
WeierstrassModel model_from_tau(const BigComplex& tau, Precision prec = kDefaultPrecision);

/// A -> u^4 A, B -> u^6 B.
WeierstrassModel twist_model(const WeierstrassModel& model, const BigComplex& u);

struct WeierstrassValue {
    BigComplex p;
    BigComplex dp;
};

/// p(z) and p'(z) for the lattice Z + Z tau, from the q-expansion at the
/// fundamental-domain representative of tau.
WeierstrassValue weierstrass_p(const BigComplex& z, const BigComplex& tau, Precision prec);

struct TorsionPoint {
    /// z = (a tau + b) / n
    Int a = 0;
    Int b = 0;
    Int n = 1;
    BigComplex x;
    BigComplex y;
};

/// The n^2 - 1 nonzero n-torsion points ordered by (a, b).
std::vector<TorsionPoint> torsion_points(const WeierstrassModel& model, Int n);

enum class WeberCase { Generic, J1728, J0 };

/// Case of the Weber function chosen by comparing |j| and |j - 1728| with
/// 2^(-prec/4).
WeberCase weber_case(const WeierstrassModel& model);

/// (AB/Delta) x, (A^2/Delta) x^2 or (B/Delta) x^3 according to weber_case.
BigComplex weber_function(const WeierstrassModel& model, const TorsionPoint& point);

} // namespace attrarith
