#pragma once

/**
 * @file spec_io.hpp
 * @brief JSON forms of weight specs, shift specs and constants reports.
 *
 * Weight spec: {"depth": N, "weight": {"family": "two_valued", "t": 3, "E": "left_half"}}
 * with E either "left_half" or a list of leaf indices; "power" takes "alpha" and "raw"
 * takes "values" (length 2^N).
 * Shift spec: {"m": 0, "n": 1, "kind": "petermichl", "seed": 0, "cancellative": true}.
 */

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dyadlab/constants.hpp"
#include "dyadlab/shift.hpp"
#include "dyadlab/weight_family.hpp"

namespace dyadlab {

using json = nlohmann::json;

struct WeightSpec {
    int depth = 8;
    WeightFamilySpec family = RawFamily{};
};

namespace detail {

template <class T>
T require(const json& j, const char* key, const char* where) {
    if (!j.is_object() || !j.contains(key)) {
        throw std::invalid_argument(std::string(where) + ": missing field \"" + key + "\"");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string(where) + ": field \"" + key + "\" has the wrong type");
    }
}

}  // namespace detail

/// Parses the "weight" object. Depth comes from the caller.
inline WeightFamilySpec parse_weight_family(const json& w) {
    const auto family = detail::require<std::string>(w, "family", "weight");
    if (family == "two_valued") {
        TwoValuedFamily f;
        f.t = detail::require<double>(w, "t", "two_valued");
        if (!w.contains("E")) throw std::invalid_argument("two_valued: missing field \"E\"");
        const auto& e = w.at("E");
        if (e.is_string()) {
            if (e.get<std::string>() != "left_half") throw std::invalid_argument("two_valued: E must be \"left_half\" or a list");
            f.set = LeafSet::left();
        } else if (e.is_array()) {
            std::vector<std::size_t> idx;
            for (const auto& x : e) {
                if (!x.is_number_integer() || x.get<long long>() < 0) {
                    throw std::invalid_argument("two_valued: E entries must be nonnegative integers");
                }
                idx.push_back(x.get<std::size_t>());
            }
            f.set = LeafSet::of(std::move(idx));
        } else {
            throw std::invalid_argument("two_valued: E must be \"left_half\" or a list");
        }
        return f;
    }
    if (family == "power") return PowerFamily{detail::require<double>(w, "alpha", "power")};
    if (family == "raw") return RawFamily{detail::require<std::vector<double>>(w, "values", "raw")};
    throw std::invalid_argument("unknown weight family \"" + family + "\"");
}

inline WeightSpec parse_weight_spec(const json& j) {
    WeightSpec s;
    s.depth = detail::require<int>(j, "depth", "weight spec");
    if (!j.contains("weight")) throw std::invalid_argument("weight spec: missing field \"weight\"");
    s.family = parse_weight_family(j.at("weight"));
    return s;
}

inline Weight load_weight(const WeightSpec& s) { return materialize(s.family, DyadicGrid(s.depth)); }

inline ShiftKind parse_shift_kind(const std::string& k) {
    if (k == "petermichl") return ShiftKind::petermichl;
    if (k == "haar_multiplier") return ShiftKind::haar_multiplier;
    if (k == "random") return ShiftKind::random;
    throw std::invalid_argument("unknown shift kind \"" + k + "\"");
}

inline ShiftSpec parse_shift_spec(const json& j) {
    ShiftSpec s;
    s.m = detail::require<int>(j, "m", "shift spec");
    s.n = detail::require<int>(j, "n", "shift spec");
    s.kind = parse_shift_kind(detail::require<std::string>(j, "kind", "shift spec"));
    if (j.contains("seed")) s.seed = detail::require<std::uint64_t>(j, "seed", "shift spec");
    if (j.contains("cancellative")) s.cancellative = detail::require<bool>(j, "cancellative", "shift spec");
    if (j.contains("random_signs")) s.random_signs = detail::require<bool>(j, "random_signs", "shift spec");
    return s;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
}

inline json to_json(const ConstantsReport& r) {
    return json{{"p", r.p},
                {"ap", r.ap},
                {"ainfty_hruscev", r.ainfty_hruscev},
                {"ainfty_wilson", r.ainfty_wilson},
                {"dual_ap", r.dual_ap},
                {"dual_ainfty_hruscev", r.dual_ainfty_hruscev},
                {"dual_ainfty_wilson", r.dual_ainfty_wilson},
                {"a_p_pair", r.a_p_pair},
                {"b_p_pair", r.b_p_pair},
                {"rhi_exponent", r.rhi_exponent},
                {"a1", r.a1}};
}

inline ConstantsReport report_from_json(const json& j) {
    ConstantsReport r;
    r.p = detail::require<double>(j, "p", "report");
    r.ap = detail::require<double>(j, "ap", "report");
    r.ainfty_hruscev = detail::require<double>(j, "ainfty_hruscev", "report");
    r.ainfty_wilson = detail::require<double>(j, "ainfty_wilson", "report");
    r.dual_ap = detail::require<double>(j, "dual_ap", "report");
    r.dual_ainfty_hruscev = detail::require<double>(j, "dual_ainfty_hruscev", "report");
    r.dual_ainfty_wilson = detail::require<double>(j, "dual_ainfty_wilson", "report");
    r.a_p_pair = detail::require<double>(j, "a_p_pair", "report");
    r.b_p_pair = detail::require<double>(j, "b_p_pair", "report");
    r.rhi_exponent = detail::require<double>(j, "rhi_exponent", "report");
    r.a1 = detail::require<double>(j, "a1", "report");
    return r;
}

}  // namespace dyadlab
