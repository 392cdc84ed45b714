// dyadlab: constants, verification suites and sweeps for dyadic weights.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dyadlab/spec_io.hpp"
#include "dyadlab/suite.hpp"
#include "dyadlab/sweep.hpp"

namespace {

using namespace dyadlab;

struct Common {
    std::string spec;
    int depth = 8;
    std::uint64_t seed = 42;
    std::string format = "json";
    std::string out;
    std::string theorems;
    int budget = 20;
    double p = 2.0;
    double tau = kRhiTau;
    double scale = 1.0;
    std::string shift;
    std::string family = "two_valued";
    std::string grid;
    unsigned threads = 0;
};

/// Writes to --out or stdout.
void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw std::invalid_argument("cannot write " + c.out);
    f << text;
}

/// A shift spec given inline as JSON or as a file name.
ShiftSpec load_shift(const std::string& s) {
    if (s.empty()) return ShiftSpec{};
    const auto j = s.find('{') != std::string::npos ? parse_json_text(s) : read_json_file(s);
    return parse_shift_spec(j);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> v;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) v.push_back(item);
    }
    return v;
}

std::string report_csv(const ConstantsReport& r) {
    std::ostringstream os;
    os.precision(17);
    const auto j = to_json(r);
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) os << (std::exchange(first, false) ? "" : ",") << it.key();
    os << '\n';
    first = true;
    for (auto it = j.begin(); it != j.end(); ++it) os << (std::exchange(first, false) ? "" : ",") << it.value().get<double>();
    os << '\n';
    return os.str();
}

int cmd_constants(const Common& c) {
    if (c.spec.empty()) throw std::invalid_argument("constants needs --spec");
    const auto w = load_weight(parse_weight_spec(read_json_file(c.spec)));
    const auto r = compute_report(w, c.p);
    emit(c, c.format == "csv" ? report_csv(r) : to_json(r).dump(2) + "\n");
    return 0;
}

json to_json(const CheckResult& r) {
    json j{{"name", r.name},   {"hard", r.hard},         {"passed", r.passed},
           {"trials", r.trials}, {"violations", r.violations}, {"worst_ratio", r.worst_ratio},
           {"detail", r.detail}};
    j["fitted_constant"] = r.fitted_constant ? json(*r.fitted_constant) : json(nullptr);
    return j;
}

int cmd_verify(const Common& c) {
    SuiteConfig cfg;
    cfg.depth = c.depth;
    cfg.seed = c.seed;
    cfg.tau = c.tau;
    cfg.budget = c.budget;
    cfg.scale = c.scale;
    const auto names = split_list(c.theorems);
    const auto known = all_checks();
    for (const auto& n : names) {
        if (std::none_of(known.begin(), known.end(), [&](const NamedCheck& k) { return k.name == n; })) {
            throw std::invalid_argument("unknown theorem check \"" + n + "\"");
        }
    }
    cfg.only.insert(names.begin(), names.end());
    const auto results = run_suite(cfg);
    const bool ok = all_hard_passed(results);
    if (c.format == "csv") {
        std::ostringstream os;
        os.precision(12);
        os << "name,hard,passed,trials,violations,worst_ratio,fitted_constant\n";
        for (const auto& r : results) {
            os << r.name << ',' << r.hard << ',' << r.passed << ',' << r.trials << ',' << r.violations << ',' << r.worst_ratio
               << ',';
            if (r.fitted_constant) os << *r.fitted_constant;
            os << '\n';
        }
        emit(c, os.str());
    } else {
        json j{{"depth", c.depth}, {"seed", c.seed}, {"tau", c.tau}, {"all_hard_passed", ok}, {"checks", json::array()}};
        for (const auto& r : results) j["checks"].push_back(to_json(r));
        emit(c, j.dump(2) + "\n");
    }
    return ok ? 0 : 1;
}

int cmd_sweep(const Common& c) {
    SweepConfig cfg;
    cfg.depth = c.depth;
    cfg.threads = c.threads;
    cfg.shift = load_shift(c.shift);
    if (c.family == "two_valued") {
        cfg.family = SweepFamily::two_valued;
        cfg.grid = default_t_grid();
    } else if (c.family == "power") {
        cfg.family = SweepFamily::power;
        cfg.grid = default_alpha_grid();
    } else {
        throw std::invalid_argument("unknown sweep family \"" + c.family + "\"");
    }
    if (!c.grid.empty()) {
        cfg.grid.clear();
        for (const auto& s : split_list(c.grid)) cfg.grid.push_back(std::stod(s));
    }
    cfg.exact_norms = c.depth <= kDenseDepthGuard;
    const auto rows = run_sweep(cfg);
    if (c.format == "json") {
        json j{{"schema", kSweepSchemaVersion}, {"rows", json::array()}};
        for (const auto& r : rows) {
            json row{{"family", r.family},   {"param", r.param}, {"constants", to_json(r.report)},
                     {"ap2_closed", r.ap2_closed}, {"ainfty_hruscev_closed", r.ainfty_hruscev_closed},
                     {"a2_shift_core", r.a2_shift_core}};
            row["shift_norm"] = r.shift_norm ? json(*r.shift_norm) : json(nullptr);
            j["rows"].push_back(row);
        }
        emit(c, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        write_sweep_csv(os, rows);
        emit(c, os.str());
    }
    return 0;
}

int cmd_shift_norm(const Common& c) {
    if (c.spec.empty()) throw std::invalid_argument("shift-norm needs --spec");
    const auto w = load_weight(parse_weight_spec(read_json_file(c.spec)));
    const auto sha = build_shift(w.grid(), load_shift(c.shift));
    json j{{"p", c.p}, {"complexity", sha.complexity()}};
    if (c.p == 2.0 && w.grid().depth() <= kDenseDepthGuard) {
        j["norm"] = weighted_l2_norm_exact(sha, w);
        j["method"] = "exact";
    } else {
        j["norm"] = weighted_lp_norm_estimate(as_operator(sha), w, c.p, c.budget, c.seed).value;
        j["method"] = "lower_estimate";
    }
    const auto cr = compute_report(w, 2.0);
    j["a2_shift_core"] = bound_a2_shift(cr, sha.complexity());
    j["ap2"] = cr.ap;
    emit(c, j.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dyadic weight constants, verification suites and sweeps"};
    app.require_subcommand(1);
    Common c;

    auto add_format = [&](CLI::App* s) {
        s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--out", c.out, "Write output to FILE instead of stdout");
    };

    auto* constants = app.add_subcommand("constants", "Print the constants report of a weight");
    constants->add_option("--spec", c.spec, "Weight spec JSON file")->required();
    constants->add_option("--p", c.p, "Exponent p > 1")->check(CLI::Range(1.0 + 1e-12, 1e6));
    add_format(constants);

    auto* verify = app.add_subcommand("verify", "Run the verification suite; exit 0 iff all hard checks pass");
    verify->add_option("--depth", c.depth, "Grid depth N")->check(CLI::Range(1, 12));
    verify->add_option("--seed", c.seed, "Seed");
    verify->add_option("--theorems", c.theorems, "Comma-separated check names (default: all)");
    verify->add_option("--budget", c.budget, "Ascent steps for L^p norm estimates")->check(CLI::NonNegativeNumber);
    verify->add_option("--tau", c.tau, "Reverse Holder parameter (deliberately small values act as a negative control)")
        ->check(CLI::PositiveNumber);
    verify->add_option("--scale", c.scale, "Sample size multiplier")->check(CLI::PositiveNumber);
    add_format(verify);

    auto* sweep = app.add_subcommand("sweep", std::string("Sweep a weight family\n\n") + kSweepColumnHelp);
    sweep->add_option("--family", c.family, "two_valued or power")->check(CLI::IsMember({"two_valued", "power"}));
    sweep->add_option("--depth", c.depth, "Grid depth N")->check(CLI::Range(1, 20));
    sweep->add_option("--grid", c.grid, "Comma-separated parameter values (default: t = 2..2^16 or alpha grid)");
    sweep->add_option("--shift", c.shift, "Shift spec: JSON text or file (default Petermichl)");
    sweep->add_option("--threads", c.threads, "Worker threads (0 = hardware)");
    c.format = "json";
    add_format(sweep);

    auto* shift_norm = app.add_subcommand("shift-norm", "Norm of a shift on L^p(w)");
    shift_norm->add_option("--spec", c.spec, "Weight spec JSON file")->required();
    shift_norm->add_option("--shift", c.shift, "Shift spec: JSON text or file (default Petermichl)");
    shift_norm->add_option("--p", c.p, "Exponent p > 1")->check(CLI::Range(1.0 + 1e-12, 1e6));
    shift_norm->add_option("--budget", c.budget, "Ascent steps for p != 2")->check(CLI::NonNegativeNumber);
    shift_norm->add_option("--seed", c.seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    // sweep defaults to CSV unless asked otherwise
    if (*sweep && sweep->count("--format") == 0) c.format = "csv";

    try {
        if (*constants) return cmd_constants(c);
        if (*verify) return cmd_verify(c);
        if (*sweep) return cmd_sweep(c);
        if (*shift_norm) return cmd_shift_norm(c);
    } catch (const std::exception& e) {
        std::cerr << "dyadlab: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
