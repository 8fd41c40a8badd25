#ifndef MSMFE_VERIFICATION_HPP
#define MSMFE_VERIFICATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "msmfe/dense.hpp"
#include "msmfe/ref_elements.hpp"
#include "msmfe/tensor.hpp"

namespace msmfe {

/// One property of the reference elements with its measured value and threshold.
struct VerificationCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
    bool required = true;  ///< false for diagnostics that document a convention
};

struct IdentitySamples {
    double literal = 0.0;  ///< max relative |curl q : w + Xi(div S(q)) : w|
    double halved = 0.0;   ///< max relative |curl q : w + (1/2) Xi(div S(q)) : w|
};

/// Samples the curl / Xi(div S) pairing for random q with rows in Theta, random constant
/// skew w and random points of the unit cube.
inline IdentitySamples sample_sxi_identity(int samples = 100, std::uint64_t seed = 20240601)
{
    const auto& theta = theta_basis();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0), unit(0.0, 1.0);
    IdentitySamples out;
    for (int s = 0; s < samples; ++s) {
        MatPoly q;
        for (std::size_t row = 0; row < 3; ++row)
            for (int k = 0; k < ThetaBasis::size; ++k) q[row] = q[row] + coef(rng) * theta.polynomial(k);
        const Vec3 w{coef(rng), coef(rng), coef(rng)};
        const Vec3 x{unit(rng), unit(rng), unit(rng)};
        const auto p = sxi_sample(q, w, x);
        const double scale = std::max({std::abs(p.curl_term), std::abs(p.xi_term), 1e-300});
        out.literal = std::max(out.literal, std::abs(p.curl_term + p.xi_term) / scale);
        out.halved = std::max(out.halved, std::abs(p.curl_term + 0.5 * p.xi_term) / scale);
    }
    return out;
}

/// Dimension of the divergence-free subspace of ERT0 (24 minus the rank of the divergence
/// map on the spanning fields).
inline std::size_t divergence_free_dimension()
{
    const auto fields = ert0_fields();
    // the divergence of each spanning field is a polynomial; sample it at a few points
    const std::array<Vec3, 4> pts{Vec3{0.1, 0.2, 0.3}, Vec3{0.7, 0.4, 0.9}, Vec3{0.5, 0.5, 0.5}, Vec3{0.9, 0.1, 0.6}};
    DenseMatrix m(pts.size(), fields.size());
    for (std::size_t j = 0; j < fields.size(); ++j) {
        const Polynomial dv = divergence(fields[j]);
        for (std::size_t i = 0; i < pts.size(); ++i) m(i, j) = dv(pts[i]);
    }
    return fields.size() - numerical_rank(m);
}

/// Reference-element property suite: unisolvence, duality, exact sequence, tangential
/// traces and the curl / Xi(div S) pairing.
inline std::vector<VerificationCheck> reference_element_suite(int samples = 100)
{
    std::vector<VerificationCheck> out;
    auto add = [&](std::string name, double value, double threshold, bool pass, bool required = true) {
        out.push_back({std::move(name), value, threshold, pass, required});
    };
    const auto& ert = ert0_basis();
    const auto sv_ert = singular_values(ert.vandermonde());
    const double cond_ert = sv_ert.back() / sv_ert.front();
    add("ERT0 24x24 Vandermonde min/max singular value", cond_ert, 1e-10, cond_ert > 1e-10);
    const double dual = ert.duality_residual();
    add("ERT0 duality residual", dual, 1e-12, dual < 1e-12);

    const auto& theta = theta_basis();
    const auto sv_theta = singular_values(theta.vandermonde());
    const double cond_theta = sv_theta.back() / sv_theta.front();
    add("Theta 48x48 Vandermonde min/max singular value", cond_theta, 1e-10, cond_theta > 1e-10);

    double curl_res = 0.0;
    const DenseMatrix cm = theta.curl_matrix(&curl_res);
    add("curl Theta outside ERT0 (residual)", curl_res, 1e-12, curl_res < 1e-12);
    const auto rank = static_cast<double>(numerical_rank(cm));
    const double free_dim = static_cast<double>(divergence_free_dimension());
    add("curl matrix rank = dim of divergence-free ERT0", rank, free_dim, rank == free_dim);

    const double trace = theta_tangential_trace_residual();
    add("Theta tangential trace with zero face d.o.f.", trace, 1e-12, trace < 1e-12);

    const auto id = sample_sxi_identity(samples);
    add("curl q : w = -Xi(div S(q)) : w (relative)", id.literal, 1e-12, id.literal < 1e-12, false);
    add("curl q : w = -(1/2) Xi(div S(q)) : w (relative)", id.halved, 1e-12, id.halved < 1e-12);
    return out;
}

}  // namespace msmfe

#endif  // MSMFE_VERIFICATION_HPP
