#pragma once

// BPS charge data and the exact attractor point it determines on the upper
// half-plane, together with the K3 two-form consistency certificate.

#include <optional>
#include <vector>

#include "attrarith/arith.hpp"
#include "attrarith/bigfloat.hpp"

namespace attrarith {

struct ChargeVectors {
    IntVector p;
    IntVector q;
    IntMatrix gram;
};

/// Charge invariants p.p, q.q and p.q. The optional provenance records the
/// lattice vectors and Gram matrix they were computed from.
struct ChargeData {
    Int p2 = 0;
    Int q2 = 0;
    Int pq = 0;
    std::optional<ChargeVectors> provenance;

    /// Computes the invariants from lattice vectors and a symmetric Gram
    /// matrix.
    static ChargeData from_lattice(const IntVector& p, const IntVector& q, const IntMatrix& gram);

    /// (lambda p, lambda q).
    ChargeData scaled(Int lambda) const;
};

/// (p.q)^2 - p^2 q^2.
Int discriminant(const ChargeData& c) noexcept;

struct AttractorPoint {
    /// (pq + sqrt(D)) / p2 in lowest terms.
    QuadraticSurd tau;
    Int D = 0;
    /// (p2, -2 pq, q2), discriminant 4D.
    BinaryQuadraticForm associated_form;
    /// Reduction of associated_form.
    BinaryQuadraticForm form;
    /// gcd of the coefficients of the associated form.
    Int content = 1;
    /// 4D / content^2: discriminant of the primitive form whose root is tau.
    Int order_disc = 0;
    Int class_number = 0;
    /// order_disc = conductor^2 * fundamental_disc.
    Int fundamental_disc = 0;
    Int conductor = 1;
};

AttractorPoint attractor_point(const ChargeData& c);

/// p2 tau^2 - 2 pq tau + q2 evaluated exactly.
QuadraticNumber attractor_residual(const ChargeData& c, const QuadraticSurd& tau);

/// sqrt(|D|), the minimum of |Z|^2 over the upper half-plane.
BigFloat entropy_invariant(const ChargeData& c, Precision prec = kDefaultPrecision);

struct K3FormCertificate {
    AttractorPoint point;
    /// Omega = q - conj(tau) p, componentwise.
    std::vector<QuadraticNumber> omega;
    /// Omega^T G Omega.
    QuadraticNumber isotropy;
    /// Omega^T G conj(Omega).
    QuadraticNumber pairing;
    /// 2 |D| / p2.
    mpq_class expected_pairing;
    bool isotropic = false;
    bool positive = false;
};

K3FormCertificate k3_form_certificate(const IntVector& p, const IntVector& q, const IntMatrix& gram);

} // namespace attrarith
