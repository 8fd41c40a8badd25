#ifndef MSMFE_POLYNOMIAL_HPP
#define MSMFE_POLYNOMIAL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <utility>

#include "msmfe/tensor.hpp"

namespace msmfe {

using Exponent = std::array<int, 3>;

/// Trivariate polynomial with exact (double) coefficients keyed by exponent.
class Polynomial {
public:
    Polynomial() = default;

    static Polynomial monomial(double coef, int ex, int ey, int ez)
    {
        Polynomial p;
        p.add_term({ex, ey, ez}, coef);
        return p;
    }

    static Polynomial constant(double c) { return monomial(c, 0, 0, 0); }

    void add_term(const Exponent& e, double c)
    {
        if (c == 0.0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    [[nodiscard]] const std::map<Exponent, double>& terms() const noexcept { return terms_; }
    [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }

    [[nodiscard]] double coefficient(const Exponent& e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? 0.0 : it->second;
    }

    [[nodiscard]] double operator()(const Vec3& x) const
    {
        double s = 0.0;
        for (const auto& [e, c] : terms_)
            s += c * ipow(x[0], e[0]) * ipow(x[1], e[1]) * ipow(x[2], e[2]);
        return s;
    }

    [[nodiscard]] Polynomial derivative(int axis) const
    {
        Polynomial d;
        for (const auto& [e, c] : terms_) {
            if (e[static_cast<std::size_t>(axis)] == 0) continue;
            Exponent f = e;
            f[static_cast<std::size_t>(axis)] -= 1;
            d.add_term(f, c * e[static_cast<std::size_t>(axis)]);
        }
        return d;
    }

    /// Exact integral over the unit cube.
    [[nodiscard]] double integral_unit_cube() const
    {
        double s = 0.0;
        for (const auto& [e, c] : terms_) s += c / ((e[0] + 1.0) * (e[1] + 1.0) * (e[2] + 1.0));
        return s;
    }

    /// Largest exponent of any single variable.
    [[nodiscard]] int max_partial_degree() const
    {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max({d, e[0], e[1], e[2]});
        return d;
    }

    Polynomial& operator+=(const Polynomial& o)
    {
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& o)
    {
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    Polynomial& operator*=(double s)
    {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
    {
        Polynomial p;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_)
                p.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
        return p;
    }

private:
    static double ipow(double x, int n)
    {
        double r = 1.0;
        for (int i = 0; i < n; ++i) r *= x;
        return r;
    }

    std::map<Exponent, double> terms_;
};

using VecPoly = std::array<Polynomial, 3>;

inline VecPoly vec_poly(Polynomial a, Polynomial b, Polynomial c) { return {std::move(a), std::move(b), std::move(c)}; }

inline Vec3 evaluate(const VecPoly& v, const Vec3& x) { return {v[0](x), v[1](x), v[2](x)}; }

inline Polynomial divergence(const VecPoly& v)
{
    return v[0].derivative(0) + v[1].derivative(1) + v[2].derivative(2);
}

inline VecPoly curl(const VecPoly& v)
{
    return {v[2].derivative(1) - v[1].derivative(2), v[0].derivative(2) - v[2].derivative(0),
            v[1].derivative(0) - v[0].derivative(1)};
}

inline VecPoly gradient(const Polynomial& p) { return {p.derivative(0), p.derivative(1), p.derivative(2)}; }

inline VecPoly operator+(const VecPoly& a, const VecPoly& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline VecPoly operator*(double s, const VecPoly& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline bool is_zero(const VecPoly& v) { return v[0].is_zero() && v[1].is_zero() && v[2].is_zero(); }

}  // namespace msmfe

#endif  // MSMFE_POLYNOMIAL_HPP
