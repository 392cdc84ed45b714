#pragma once

/**
 * @file bounds.hpp
 * @brief Right-hand sides of the weighted norm inequalities, as explicit constant x core.
 *
 * A bound with an explicit constant can be asserted as a hard inequality. A bound whose
 * dimensional constant is unspecified is compared through a fitted constant only.
 */

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadlab/constants.hpp"

namespace dyadlab {

struct BoundExpr {
    std::string name;
    std::function<double(const ConstantsReport&, double)> core;
    bool has_unspecified_dimensional_constant = true;
    /// Present when the constant is pinned; may depend on p.
    std::function<double(double)> explicit_constant;

    double evaluate_core(const ConstantsReport& cr, double p) const { return core(cr, p); }

    std::optional<double> evaluate(const ConstantsReport& cr, double p) const {
        if (!explicit_constant) return std::nullopt;
        return explicit_constant(p) * core(cr, p);
    }
};

namespace detail {
inline void require_p(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("bound requires p > 1");
}
}  // namespace detail

/// Buckley: p' [w]_{A_p}^{1/(p-1)}.
inline double bound_buckley(const ConstantsReport& cr, double p) {
    detail::require_p(p);
    return conjugate(p) * std::pow(cr.ap, 1.0 / (p - 1.0));
}

struct MixedMaximalBound {
    double bp_form = 0.0;         // 4e p' B_p[w,sigma]^{1/p}
    double ap_ainfty_form = 0.0;  // 4e p' ([w]_{A_p} [sigma]'_{A_oo})^{1/p}
};

inline constexpr double kMixedMaximalConstant = 4.0 * std::numbers::e;

inline MixedMaximalBound bound_mixed_maximal(const ConstantsReport& cr, double p) {
    detail::require_p(p);
    const double c = kMixedMaximalConstant * conjugate(p);
    return {c * std::pow(cr.b_p_pair, 1.0 / p), c * std::pow(cr.ap * cr.dual_ainfty_wilson, 1.0 / p)};
}

/// Two-weight form: 4e p' B_p^{1/p} for an arbitrary pair.
inline double bound_mixed_maximal_pair(double bp, double p) {
    detail::require_p(p);
    return kMixedMaximalConstant * conjugate(p) * std::pow(bp, 1.0 / p);
}

/// (r+1)^2 [w]_{A_2}^{1/2} ([w]'_{A_oo} + [sigma]'_{A_oo})^{1/2}; cr must be taken at p = 2.
inline double bound_a2_shift(const ConstantsReport& cr, int complexity) {
    if (complexity < 0) throw std::invalid_argument("bound_a2_shift: complexity must be nonnegative");
    const double r1 = complexity + 1.0;
    return r1 * r1 * std::sqrt(cr.ap) * std::sqrt(cr.ainfty_wilson + cr.dual_ainfty_wilson);
}

struct CzApBound {
    double lower_simple = 0.0;  // valid for p <= 2
    double lower_full = 0.0;
    double upper_simple = 0.0;  // valid for p >= 2
    double upper_full = 0.0;
    bool lower_applies = false;
    bool upper_applies = false;
};

/// L^p(w) bounds for a singular operator from the A_2-with-A_oo estimate.
inline CzApBound bound_cz_ap(const ConstantsReport& cr, double p) {
    detail::require_p(p);
    CzApBound b;
    b.lower_applies = p <= 2.0;
    b.upper_applies = p >= 2.0;
    const double ws = cr.dual_ainfty_wilson, ww = cr.ainfty_wilson;
    b.lower_simple = std::pow(cr.ap, 2.0 / p) * std::pow(ws, 2.0 / p - 1.0);
    b.lower_full = std::pow(cr.ap, 2.0 / p - 0.5) *
                   (std::sqrt(cr.ainfty_hruscev) + std::pow(cr.dual_ainfty_hruscev, (p - 1.0) / 2.0)) *
                   std::pow(ws, 2.0 / p - 1.0);
    b.upper_simple = std::pow(cr.ap, 2.0 / p) * std::pow(ww, 1.0 - 2.0 / p);
    const double q = 1.0 / (2.0 * (p - 1.0));
    b.upper_full = std::pow(cr.ap, 2.0 / p - q) * (std::pow(cr.ainfty_hruscev, q) + std::sqrt(cr.dual_ainfty_hruscev)) *
                   std::pow(ww, 1.0 - 2.0 / p);
    return b;
}

// ---------------------------------------------------------------------------
// Extrapolation

/// phi(x, y, z) with x = [w]_{A_r}, y = [w]_{A_oo}, z = [sigma]_{A_oo}^{r-1}.
using Phi = std::function<double(double, double, double)>;

/// Bound at exponent p given a report at p and the maximal-function factor K.
using ExtrapolatedBound = std::function<double(const ConstantsReport&, double)>;

/// C x^{1/2} (y + z)^{1/2}.
inline Phi a2_phi(double c = 1.0) {
    return [c](double x, double y, double z) { return c * std::sqrt(x) * std::sqrt(y + z); };
}

/// p < r: 2 phi(K^{r-p} x, K^{r-p} y, K^{r-p} z) with (x, y, z) = ([w]_{A_p}, [w]_{A_oo}, [sigma]_{A_oo}^{p-1}).
inline ExtrapolatedBound extrapolate_lower(Phi phi, double r, double p) {
    detail::require_p(p);
    if (!(p <= r)) throw std::invalid_argument("extrapolate_lower requires p <= r");
    return [phi = std::move(phi), r, p](const ConstantsReport& cr, double k) {
        const double s = std::pow(k, r - p);
        return 2.0 * phi(s * cr.ap, s * cr.ainfty_hruscev, s * std::pow(cr.dual_ainfty_hruscev, p - 1.0));
    };
}

/// p > r: 2 phi(K^e [w]_{A_p}^{(r-1)/(p-1)}, K^e [w]_{A_oo}^{(r-1)/(p-1)}, K^e [sigma]_{A_oo}^{r-1}), e = (p-r)/(p-1).
inline ExtrapolatedBound extrapolate_upper(Phi phi, double r, double p) {
    detail::require_p(p);
    if (!(p >= r)) throw std::invalid_argument("extrapolate_upper requires p >= r");
    return [phi = std::move(phi), r, p](const ConstantsReport& cr, double k) {
        const double s = std::pow(k, (p - r) / (p - 1.0));
        const double e = (r - 1.0) / (p - 1.0);
        return 2.0 * phi(s * std::pow(cr.ap, e), s * std::pow(cr.ainfty_hruscev, e),
                         s * std::pow(cr.dual_ainfty_hruscev, r - 1.0));
    };
}

/// Bounded form of K below r: c ([w]_{A_p} [sigma]'_{A_oo})^{1/p}.
inline double extrapolation_k_lower(const ConstantsReport& cr, double c = 1.0) {
    return c * std::pow(cr.ap * cr.dual_ainfty_wilson, 1.0 / cr.p);
}

/// Bounded form of K above r: c [w]_{A_p}^{1/p} ([w]'_{A_oo})^{1/p'}.
inline double extrapolation_k_upper(const ConstantsReport& cr, double c = 1.0) {
    return c * std::pow(cr.ap, 1.0 / cr.p) * std::pow(cr.ainfty_wilson, 1.0 / conjugate(cr.p));
}

// ---------------------------------------------------------------------------
// A_1 family, commutators, BMO

/// p p' [w]_{A_1}^{1/p} ([w]'_{A_oo})^{1/p'}.
inline double bound_a1_strong(double a1, double ainfty_w, double p) {
    detail::require_p(p);
    return p * conjugate(p) * std::pow(a1, 1.0 / p) * std::pow(ainfty_w, 1.0 / conjugate(p));
}

/// [w]_{A_1} log(e + [w]'_{A_oo}).
inline double bound_a1_weak(double a1, double ainfty_w) { return a1 * std::log(std::numbers::e + ainfty_w); }

/// [w]'_{A_oo} log(e + [w]_{A_1}).
inline double bound_a1_dual_weak(double a1, double ainfty_w) { return ainfty_w * std::log(std::numbers::e + a1); }

struct CommutatorBound {
    double core = 0.0;         // per unit ||b||_BMO^k
    double radius_core = 0.0;  // conjugation radius 1/(||b||_BMO ([w]' + [sigma]'))
};

/// [w]_{A_2}^{1/2} ([w]' + [sigma]')^{k+1/2}; cr taken at p = 2.
inline CommutatorBound bound_commutator(const ConstantsReport& cr, int order, double bmo = 1.0) {
    if (order < 1) throw std::invalid_argument("bound_commutator: order must be at least 1");
    const double s = cr.ainfty_wilson + cr.dual_ainfty_wilson;
    CommutatorBound b;
    b.core = std::sqrt(cr.ap) * std::pow(s, order + 0.5);
    b.radius_core = bmo > 0.0 ? 1.0 / (bmo * s) : std::numeric_limits<double>::infinity();
    return b;
}

/// BMO -> BMO(w) embedding: [w]'_{A_oo}.
inline double bound_bmo_embedding(double ainfty_w) { return ainfty_w; }

/// log(2e [w]_{A_oo}) bound on ||log w||_BMO.
inline double bound_log_bmo(double ainfty_hruscev) { return std::log(2.0 * std::numbers::e * ainfty_hruscev); }

// ---------------------------------------------------------------------------
// Catalogue

inline std::vector<BoundExpr> bound_catalogue() {
    std::vector<BoundExpr> v;
    v.push_back({"buckley", [](const ConstantsReport& cr, double p) { return bound_buckley(cr, p); }, true, {}});
    v.push_back({"mixed_maximal_bp",
                 [](const ConstantsReport& cr, double p) { return conjugate(p) * std::pow(cr.b_p_pair, 1.0 / p); }, false,
                 [](double) { return kMixedMaximalConstant; }});
    v.push_back({"mixed_maximal_ap_ainfty",
                 [](const ConstantsReport& cr, double p) {
                     return conjugate(p) * std::pow(cr.ap * cr.dual_ainfty_wilson, 1.0 / p);
                 },
                 true, {}});
    v.push_back({"a2_shift", [](const ConstantsReport& cr, double) { return bound_a2_shift(cr, 0); }, true, {}});
    // the lower form for p <= 2 and the upper form above; each is only valid on its own range
    v.push_back({"cz_ap",
                 [](const ConstantsReport& cr, double p) {
                     const auto b = bound_cz_ap(cr, p);
                     return p <= 2.0 ? b.lower_simple : b.upper_simple;
                 },
                 true, {}});
    v.push_back({"a1_strong", [](const ConstantsReport& cr, double p) { return bound_a1_strong(cr.a1, cr.ainfty_wilson, p); },
                 true, {}});
    v.push_back({"a1_weak", [](const ConstantsReport& cr, double) { return bound_a1_weak(cr.a1, cr.ainfty_wilson); }, true, {}});
    v.push_back({"a1_dual_weak", [](const ConstantsReport& cr, double) { return bound_a1_dual_weak(cr.a1, cr.ainfty_wilson); },
                 true, {}});
    v.push_back({"commutator_k1", [](const ConstantsReport& cr, double) { return bound_commutator(cr, 1).core; }, true, {}});
    v.push_back({"bmo_embedding", [](const ConstantsReport& cr, double) { return bound_bmo_embedding(cr.ainfty_wilson); },
                 true, {}});
    v.push_back({"log_bmo", [](const ConstantsReport& cr, double) { return bound_log_bmo(cr.ainfty_hruscev); }, false,
                 [](double) { return 1.0; }});
    v.push_back({"rhi_inverse", [](const ConstantsReport& cr, double) { return rhi_inverse_bound(2.0, cr.rhi_exponent); },
                 true, {}});
    return v;
}

}  // namespace dyadlab
