#include "attrarith/bp_jacobian.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <string>

#include "attrarith/error.hpp"

namespace attrarith {

namespace {

Int least_positive(Int x, Int m)
{
    const Int r = mod_floor(x, m);
    return r == 0 ? m : r;
}

std::string sig_string(Int d, Int k, Int l)
{
    return "(" + std::to_string(d) + "," + std::to_string(k) + "," + std::to_string(l) + ")";
}

std::string idx_string(const FormIndex& idx)
{
    return sig_string(idx.r, idx.s, idx.t);
}

void require_valid(const FormIndex& idx, const CurveSignature& sig)
{
    if (!is_valid_index(idx, sig))
        throw Error(ErrorKind::InvalidIndex,
                    idx_string(idx) + " is not a form index of " + sig_string(sig.d, sig.k, sig.l));
}

std::vector<FormIndex> descent_filter(Int d, const CurveSignature& sig)
{
    // Works for any d; projective_basis itself refuses d < 3.
    std::vector<FormIndex> out;
    for (Int r = 1; r < d; ++r)
        for (Int s = 1; s < d; ++s)
            for (Int t = 1; t < d; ++t) {
                if ((r + s + t) % d != 0 || s % sig.k != 0 || t % sig.l != 0)
                    continue;
                out.push_back({r, s / sig.k, t / sig.l});
            }
    return out;
}

} // namespace

CurveSignature CurveSignature::make(Int d, Int k, Int l)
{
    if (d < 1 || k < 1 || l < 1)
        throw Error(ErrorKind::InvalidWeights, "degree and weights must be positive, got " + sig_string(d, k, l));
    if (d % k != 0 || d % l != 0)
        throw Error(ErrorKind::InvalidWeights, "weights must divide the degree, got " + sig_string(d, k, l));
    if (gcd(k, l) != 1)
        throw Error(ErrorKind::InvalidWeights, "weights must be coprime, got " + sig_string(d, k, l));
    return {d, k, l};
}

std::ostream& operator<<(std::ostream& os, const FormIndex& idx)
{
    return os << idx_string(idx);
}

bool is_valid_index(const FormIndex& idx, const CurveSignature& sig) noexcept
{
    return idx.r >= 1 && idx.r < sig.d && idx.s >= 1 && idx.s < sig.y_exponent() && idx.t >= 1 &&
           idx.t < sig.z_exponent() && (idx.r + sig.k * idx.s + sig.l * idx.t) % sig.d == 0;
}

std::vector<FormIndex> enumerate_forms(const CurveSignature& sig)
{
    CurveSignature::make(sig.d, sig.k, sig.l);
    std::vector<FormIndex> out;
    for (Int r = 1; r < sig.d; ++r)
        for (Int s = 1; s < sig.y_exponent(); ++s)
            for (Int t = 1; t < sig.z_exponent(); ++t)
                if ((r + sig.k * s + sig.l * t) % sig.d == 0)
                    out.push_back({r, s, t});
    return out;
}

Int genus(const CurveSignature& sig)
{
    return static_cast<Int>(enumerate_forms(sig).size()) / 2;
}

FormIndex star_action(Int a, const FormIndex& idx, const CurveSignature& sig)
{
    if (gcd(a, sig.d) != 1)
        throw Error(ErrorKind::NotUnit, std::to_string(a) + " is not a unit mod " + std::to_string(sig.d));
    require_valid(idx, sig);
    return {least_positive(a * idx.r, sig.d), least_positive(a * idx.s, sig.y_exponent()),
            least_positive(a * idx.t, sig.z_exponent())};
}

Int level(const FormIndex& idx, const CurveSignature& sig)
{
    require_valid(idx, sig);
    const Int g = gcd(gcd(idx.r, sig.k * idx.s), gcd(sig.l * idx.t, sig.d));
    return sig.d / g;
}

std::vector<Int> cm_set(const FormIndex& idx, const CurveSignature& sig)
{
    const Int m = level(idx, sig);
    const Int g = sig.d / m;
    const Int x = idx.r / g;
    const Int y = sig.k * idx.s / g;
    const Int z = sig.l * idx.t / g;
    std::vector<Int> out;
    for (Int a : units_mod(m).units)
        if (least_positive(a * x, m) + least_positive(a * y, m) + least_positive(a * z, m) == m)
            out.push_back(a);
    return out;
}

std::vector<AbelianFactor> decompose_jacobian(const CurveSignature& sig)
{
    const auto forms = enumerate_forms(sig);
    const auto units = units_mod(sig.d).units;
    std::set<FormIndex> seen;
    std::vector<AbelianFactor> out;
    for (const auto& idx : forms) {
        if (seen.contains(idx))
            continue;
        std::set<FormIndex> orbit;
        for (Int a : units)
            orbit.insert(star_action(a, idx, sig));
        seen.insert(orbit.begin(), orbit.end());
        AbelianFactor f;
        f.orbit.assign(orbit.begin(), orbit.end());
        f.level = level(f.orbit.front(), sig);
        f.dimension = euler_phi(f.level) / 2;
        f.cm_set = cm_set(f.orbit.front(), sig);
        out.push_back(std::move(f));
    }
    // forms are visited in lexicographic order, so keys come out sorted
    return out;
}

std::vector<ProjectiveTriple> projective_basis(Int d)
{
    if (d < 3)
        throw Error(ErrorKind::DegreeTooSmall, "plane curve degree must be at least 3, got " + std::to_string(d));
    std::vector<ProjectiveTriple> out;
    for (Int r = 1; r < d; ++r)
        for (Int s = 1; s < d; ++s)
            for (Int t = 1; t < d; ++t)
                if ((r + s + t) % d == 0)
                    out.push_back({r, s, t});
    return out;
}

std::vector<FormIndex> descent(const CurveSignature& sig)
{
    const CurveSignature checked = CurveSignature::make(sig.d, sig.k, sig.l);
    if (checked.d < 3)
        return descent_filter(checked.d, checked);
    std::vector<FormIndex> out;
    for (const auto& [r, s, t] : projective_basis(checked.d))
        if (s % checked.k == 0 && t % checked.l == 0)
            out.push_back({r, s / checked.k, t / checked.l});
    return out;
}

Int descent_count(const CurveSignature& sig)
{
    return static_cast<Int>(descent(sig).size());
}

std::vector<CurveSignature> valid_signatures(Int max_d)
{
    std::vector<CurveSignature> out;
    for (Int d = 2; d <= max_d; ++d)
        for (Int k = 1; k <= d; ++k)
            for (Int l = 1; l <= d; ++l)
                if (d % k == 0 && d % l == 0 && gcd(k, l) == 1)
                    out.push_back({d, k, l});
    return out;
}

} // namespace attrarith
