#pragma once

/**
 * @file sweep.hpp
 * @brief Parameter sweeps over the closed-form weight families, run on a worker pool.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "dyadlab/bounds.hpp"
#include "dyadlab/constants.hpp"
#include "dyadlab/shift.hpp"
#include "dyadlab/weight_family.hpp"

namespace dyadlab {

/// Maps fn over [0, n) on `threads` workers; results stay in input order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& fn, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

inline constexpr int kSweepSchemaVersion = 1;

enum class SweepFamily { two_valued, power };

inline std::string to_string(SweepFamily f) { return f == SweepFamily::two_valued ? "two_valued" : "power"; }

struct SweepConfig {
    SweepFamily family = SweepFamily::two_valued;
    int depth = 8;
    /// t for two_valued (E = left half), alpha for power.
    std::vector<double> grid;
    ShiftSpec shift;
    bool exact_norms = true;
    unsigned threads = 0;
};

/// t in {2, 4, ..., 2^16}.
inline std::vector<double> default_t_grid() {
    std::vector<double> v;
    for (int e = 1; e <= 16; ++e) v.push_back(std::ldexp(1.0, e));
    return v;
}

/// alpha = -1 + 2^{-k}, k = 1..6, then 0 and a few positive values.
inline std::vector<double> default_alpha_grid() {
    std::vector<double> v;
    for (int k = 1; k <= 6; ++k) v.push_back(-1.0 + std::ldexp(1.0, -k));
    for (double a : {0.0, 0.25, 0.5, 0.75}) v.push_back(a);
    std::sort(v.begin(), v.end());
    return v;
}

struct SweepRow {
    std::string family;
    double param = 0.0;
    ConstantsReport report;
    double ap2_closed = 0.0;              // continuum value on [0,1)
    double ainfty_hruscev_closed = 0.0;   // continuum value on [0,1)
    std::optional<double> shift_norm;     // exact on L^2(w)
    double a2_shift_core = 0.0;
};

inline const char* kSweepColumns =
    "family,param,ap2,ap2_closed,ainfty_hruscev,ainfty_hruscev_closed,ainfty_wilson,dual_ainfty_wilson,"
    "shift_norm,norm_over_ap2,a2_shift_core,norm_over_core";

/// Text for --help describing each CSV column.
inline const char* kSweepColumnHelp =
    "CSV columns (schema 1, first line '# dyadlab-sweep schema=1'):\n"
    "  family                two_valued (w = t on [0,1/2), 1 elsewhere) or power (w = x^alpha)\n"
    "  param                 t or alpha\n"
    "  ap2                   dyadic A_2 constant of the discretized weight\n"
    "  ap2_closed            continuum A_2 value: (t+1)^2/(4t), or 1/(1-alpha^2)\n"
    "  ainfty_hruscev        dyadic Hruscev A_oo constant\n"
    "  ainfty_hruscev_closed continuum value: (t+1)/(2 sqrt t), or e^alpha/(1+alpha)\n"
    "  ainfty_wilson         dyadic Fujii-Wilson constant of w\n"
    "  dual_ainfty_wilson    same for sigma = 1/w\n"
    "  shift_norm            exact norm of the shift on L^2(w) (empty if not computed)\n"
    "  norm_over_ap2         shift_norm / ap2\n"
    "  a2_shift_core         (r+1)^2 ap2^{1/2} (ainfty_wilson + dual_ainfty_wilson)^{1/2}\n"
    "  norm_over_core        shift_norm / a2_shift_core\n";

inline SweepRow sweep_point(const SweepConfig& c, double param) {
    const DyadicGrid g(c.depth);
    SweepRow row;
    row.family = to_string(c.family);
    row.param = param;
    Weight w = c.family == SweepFamily::two_valued ? materialize(TwoValuedFamily{param, LeafSet::left()}, g)
                                                   : materialize(PowerFamily{param}, g);
    if (c.family == SweepFamily::two_valued) {
        row.ap2_closed = (param + 1.0) * (param + 1.0) / (4.0 * param);
        row.ainfty_hruscev_closed = (param + 1.0) / (2.0 * std::sqrt(param));
    } else {
        row.ap2_closed = 1.0 / (1.0 - param * param);
        row.ainfty_hruscev_closed = std::exp(param) / (1.0 + param);
    }
    row.report = compute_report(w, 2.0);
    const auto sha = build_shift(g, c.shift);
    row.a2_shift_core = bound_a2_shift(row.report, sha.complexity());
    if (c.exact_norms) row.shift_norm = weighted_l2_norm_exact(sha, w);
    return row;
}

inline std::vector<SweepRow> run_sweep(const SweepConfig& c) {
    if (c.grid.empty()) throw std::invalid_argument("sweep grid is empty");
    if (c.exact_norms && c.depth > kDenseDepthGuard) {
        throw std::invalid_argument("exact norms need depth <= " + std::to_string(kDenseDepthGuard));
    }
    for (double x : c.grid) {
        if (c.family == SweepFamily::two_valued && !(x > 0.0)) throw std::invalid_argument("two_valued sweep needs t > 0");
        if (c.family == SweepFamily::power && !(x > -1.0 && x < 1.0)) {
            throw std::invalid_argument("power sweep needs -1 < alpha < 1");
        }
    }
    return parallel_map<SweepRow>(c.grid.size(), [&](std::size_t i) { return sweep_point(c, c.grid[i]); }, c.threads);
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    const auto old = os.precision(17);
    os << "# dyadlab-sweep schema=" << kSweepSchemaVersion << "\n" << kSweepColumns << "\n";
    for (const auto& r : rows) {
        os << r.family << ',' << r.param << ',' << r.report.ap << ',' << r.ap2_closed << ',' << r.report.ainfty_hruscev << ','
           << r.ainfty_hruscev_closed << ',' << r.report.ainfty_wilson << ',' << r.report.dual_ainfty_wilson << ',';
        if (r.shift_norm) {
            os << *r.shift_norm << ',' << *r.shift_norm / r.report.ap << ',' << r.a2_shift_core << ','
               << *r.shift_norm / r.a2_shift_core;
        } else {
            os << ",," << r.a2_shift_core << ',';
        }
        os << '\n';
    }
    os.precision(old);
}

}  // namespace dyadlab
