#ifndef MSMFE_MATERIAL_HPP
#define MSMFE_MATERIAL_HPP

#include <algorithm>
#include <functional>
#include <string>
#include <utility>

#include "msmfe/errors.hpp"
#include "msmfe/tensor.hpp"

namespace msmfe {

struct Lame {
    double lambda = 0.0;
    double mu = 0.5;
};

inline void validate_lame(const Lame& p)
{
    if (!(p.mu > 0.0)) throw InvalidArgument("shear modulus must be positive, got " + std::to_string(p.mu));
    if (!(p.lambda > -2.0 * p.mu / 3.0))
        throw InvalidArgument("lambda must exceed -2 mu / 3, got " + std::to_string(p.lambda));
}

/// A m = (m - lambda / (2 mu + 3 lambda) tr(m) I) / (2 mu), for any 3x3 m.
inline Mat3 apply_compliance(double lambda, double mu, const Mat3& m)
{
    validate_lame({lambda, mu});
    const double t = lambda / (2.0 * mu + 3.0 * lambda) * trace(m);
    Mat3 r = m;
    for (std::size_t i = 0; i < 3; ++i) r[i][i] -= t;
    return (1.0 / (2.0 * mu)) * r;
}

inline Mat3 apply_compliance(const Lame& p, const Mat3& m) { return apply_compliance(p.lambda, p.mu, m); }

/// Inverse of the compliance: 2 mu m + lambda tr(m) I.
inline Mat3 apply_stiffness(const Lame& p, const Mat3& m)
{
    validate_lame(p);
    Mat3 r = (2.0 * p.mu) * m;
    const double t = p.lambda * trace(m);
    for (std::size_t i = 0; i < 3; ++i) r[i][i] += t;
    return r;
}

inline Lame lame_from_E_nu(double E, double nu)
{
    if (!(E > 0.0)) throw InvalidArgument("Young's modulus must be positive");
    if (!(nu > -1.0 && nu < 0.5)) throw InvalidArgument("Poisson ratio must lie in (-1, 0.5), got " + std::to_string(nu));
    return {E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), E / (2.0 * (1.0 + nu))};
}

/// Indicator of the inclusion (0, 1/2)^3.
inline bool in_inclusion(const Vec3& x) { return std::max({x[0], x[1], x[2]}) < 0.5; }

inline Lame example2_field(double kappa, const Vec3& x)
{
    const double c = in_inclusion(x) ? kappa : 1.0;
    return {c, c};
}

/// Pointwise Lame parameters.
class ComplianceField {
public:
    using Evaluator = std::function<Lame(const Vec3&)>;

    ComplianceField() : ComplianceField(constant(Lame{})) {}
    ComplianceField(Evaluator eval, bool piecewise) : eval_(std::move(eval)), piecewise_(piecewise) {}

    static ComplianceField constant(Lame p)
    {
        validate_lame(p);
        return {[p](const Vec3&) { return p; }, false};
    }

    static ComplianceField example2(double kappa)
    {
        if (!(kappa > 0.0)) throw InvalidArgument("contrast must be positive");
        return {[kappa](const Vec3& x) { return example2_field(kappa, x); }, true};
    }

    [[nodiscard]] Lame operator()(const Vec3& x) const { return eval_(x); }

    /// Parameters to use at a cell corner: the trace from inside the cell.
    [[nodiscard]] Lame at_corner(const Vec3& corner, const Vec3& centroid) const
    {
        if (!piecewise_) return eval_(corner);
        constexpr double offset = 1e-12;
        return eval_(corner + offset * (centroid - corner));
    }

    [[nodiscard]] bool piecewise() const noexcept { return piecewise_; }

private:
    Evaluator eval_;
    bool piecewise_ = false;
};

}  // namespace msmfe

#endif  // MSMFE_MATERIAL_HPP
