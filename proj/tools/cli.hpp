#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mrsubdiv/io.hpp"
#include "mrsubdiv/mrsubdiv.hpp"

namespace mrsubdiv::cli {

/// Exit codes: 0 success, 1 numerical precondition failure, 2 usage error.
enum ExitCode : int { kOk = 0, kNumerical = 1, kUsage = 2 };

inline double default_tolerance() {
    if (const char* env = std::getenv("MRSUBDIV_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > 0.0 && std::isfinite(v)) return v;
        throw InputError(std::string("MRSUBDIV_TOL is not a positive number: ") + env);
    }
    return 1e-12;
}

struct RunConfig {
    std::string mask_path;
    std::string in_path;
    std::string out_path;
    std::string func;
    std::string window;
    int level = 6;
    int quad_level = 8;
    Index margin = -1;
    Index max_radius = 128;
    int levels = 1;
    double tol = 1e-12;
    double eps = 0.0;
};

namespace detail {

inline std::ifstream open_input(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw InputError(std::string("cannot open ") + what + " file: " + path);
    return in;
}

inline Mask load_mask(const std::string& path) {
    auto in = open_input(path, "mask");
    return io::read_mask(in);
}

inline Signal load_signal(const std::string& path) {
    auto in = open_input(path, "signal");
    return io::read_signal(in);
}

inline Window parse_window(const std::string& text) {
    const auto colon = text.find(':', text.empty() ? 0 : 1);
    if (colon == std::string::npos) throw InputError("--window expects LO:HI, got '" + text + "'");
    try {
        std::size_t a = 0, b = 0;
        const Index lo = std::stoll(text.substr(0, colon), &a);
        const Index hi = std::stoll(text.substr(colon + 1), &b);
        if (a != colon || b != text.size() - colon - 1 || hi < lo) throw std::invalid_argument("window");
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw InputError("--window expects LO:HI with LO <= HI, got '" + text + "'");
    }
}

inline std::function<double(double)> named_function(const std::string& name) {
    if (name == "const") return [](double) { return 1.0; };
    if (name == "linear") return [](double t) { return t; };
    if (name == "quadratic") return [](double t) { return t * t; };
    if (name == "sin") return [](double t) { return std::sin(2.0 * std::numbers::pi * t); };
    if (name == "gauss") return [](double t) { return std::exp(-t * t); };
    throw InputError("--func: unknown function '" + name + "' (const, linear, quadratic, sin, gauss)");
}

/// Piecewise-linear interpolant of sorted (t, value) samples, zero outside.
inline std::function<double(double)> sampled_function(std::vector<std::pair<double, double>> pts) {
    if (pts.empty()) throw InputError("sample file is empty");
    return [pts = std::move(pts)](double t) {
        if (t < pts.front().first || t > pts.back().first) return 0.0;
        auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(t, -HUGE_VAL));
        if (it->first == t || it == pts.begin()) return it->second;
        const auto& [t1, v1] = *it;
        const auto& [t0, v0] = *(it - 1);
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    };
}

} // namespace detail

/// Parses argv (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Harten multiresolution settings from linear subdivision masks", "mrsubdiv"};
    app.require_subcommand(1);

    try {
        cfg.tol = default_tolerance();
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    auto add_mask = [&](CLI::App* sub) { sub->add_option("--mask", cfg.mask_path, "mask JSON file")->required(); };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out_path, "output file (default stdout)"); };
    auto add_in = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--in", cfg.in_path, "input file");
        if (required) opt->required();
    };
    auto add_margin = [&](CLI::App* sub) {
        sub->add_option("--margin", cfg.margin, "coarse window margin (default 4*(mask length + Gramian radius))")
            ->check(CLI::NonNegativeNumber);
    };

    auto* phi = app.add_subcommand("phi", "sample the refinable function as t,value CSV");
    add_mask(phi);
    phi->add_option("--level", cfg.level, "dyadic level J")->check(CLI::Range(0, 24));
    add_out(phi);

    auto* gram = app.add_subcommand("gramian", "Gramian sequence as JSON");
    add_mask(gram);
    add_out(gram);

    auto* pred = app.add_subcommand("predict", "apply one subdivision step to a signal");
    add_mask(pred);
    add_in(pred, true);
    add_out(pred);

    auto* dec = app.add_subcommand("decimate", "least-squares decimation of a signal");
    add_mask(dec);
    add_in(dec, true);
    add_margin(dec);
    add_out(dec);

    auto* disc = app.add_subcommand("discretize", "least-squares discretization of a function");
    add_mask(disc);
    disc->add_option("--func", cfg.func, "const|linear|quadratic|sin|gauss");
    add_in(disc, false);
    disc->add_option("--level", cfg.level, "discretization level k")->check(CLI::Range(0, 24));
    disc->add_option("--quad-level", cfg.quad_level, "quadrature refinement below level k")->check(CLI::Range(0, 20));
    disc->add_option("--window", cfg.window, "index window LO:HI (use --window=LO:HI for negative LO)")->required();
    add_out(disc);

    auto* mra = app.add_subcommand("mra", "multilevel decomposition");
    mra->require_subcommand(1);
    auto* mdec = mra->add_subcommand("decompose", "signal CSV -> pyramid JSON");
    add_mask(mdec);
    add_in(mdec, true);
    mdec->add_option("--levels", cfg.levels, "number of levels L")->check(CLI::Range(1, 30));
    add_margin(mdec);
    add_out(mdec);
    auto* mrec = mra->add_subcommand("reconstruct", "pyramid JSON -> signal CSV");
    add_mask(mrec);
    add_in(mrec, true);
    add_out(mrec);
    auto* mthr = mra->add_subcommand("threshold", "zero small details of a pyramid");
    add_in(mthr, true);
    mthr->add_option("--eps", cfg.eps, "threshold")->check(CLI::NonNegativeNumber);
    add_out(mthr);

    auto* sten = app.add_subcommand("stencil", "truncated linear stencil of the decimation operator");
    add_mask(sten);
    sten->add_option("--tol", cfg.tol, "drop coefficients below this magnitude")->check(CLI::PositiveNumber);
    sten->add_option("--max-radius", cfg.max_radius, "widest stencil radius examined")->check(CLI::Range(2, 4096));
    add_out(sten);

    auto* ver = app.add_subcommand("verify", "run the invariant suite and print a report");
    add_mask(ver);
    ver->add_option("--level", cfg.level, "cascade level")->check(CLI::Range(1, 16));
    add_out(ver);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    std::ostringstream buf;
    int status = kOk;
    try {
        if (*phi) {
            io::write_samples(buf, refine_to_level(detail::load_mask(cfg.mask_path), cfg.level));
        } else if (*gram) {
            const Mask mask = detail::load_mask(cfg.mask_path);
            const GramianSequence eta = gramian_eigen(mask);
            io::write_gramian(buf, eta, riesz_check(eta, 2048).min_symbol);
        } else if (*pred) {
            const Scheme s(detail::load_mask(cfg.mask_path));
            io::write_signal(buf, predict(s, detail::load_signal(cfg.in_path)));
        } else if (*dec) {
            const Scheme s(detail::load_mask(cfg.mask_path));
            io::write_signal(buf, decimate(s, detail::load_signal(cfg.in_path), cfg.margin).trimmed());
        } else if (*disc) {
            if (cfg.func.empty() == cfg.in_path.empty()) throw InputError("discretize needs exactly one of --func, --in");
            const Scheme s(detail::load_mask(cfg.mask_path));
            std::function<double(double)> f;
            if (!cfg.func.empty()) {
                f = detail::named_function(cfg.func);
            } else {
                auto in = detail::open_input(cfg.in_path, "sample");
                f = detail::sampled_function(io::read_samples(in));
            }
            io::write_signal(buf, discretize(s, f, cfg.level, detail::parse_window(cfg.window), cfg.quad_level));
        } else if (*mdec) {
            const Scheme s(detail::load_mask(cfg.mask_path));
            io::write_pyramid(buf, decompose(s, detail::load_signal(cfg.in_path), cfg.levels, cfg.margin));
        } else if (*mrec) {
            const Scheme s(detail::load_mask(cfg.mask_path));
            auto in = detail::open_input(cfg.in_path, "pyramid");
            io::write_signal(buf, reconstruct(s, io::read_pyramid(in)));
        } else if (*mthr) {
            auto in = detail::open_input(cfg.in_path, "pyramid");
            const ThresholdResult r = threshold(io::read_pyramid(in), cfg.eps);
            io::write_pyramid(buf, r.pruned, &r.kept_fraction);
        } else if (*sten) {
            const Scheme s(detail::load_mask(cfg.mask_path));
            const StencilReport r = stencil_extract(s, cfg.tol, cfg.max_radius);
            buf << "{\"offset\": " << r.stencil.offset() << ", \"coeffs\": " << io::format_array(r.stencil.coeffs())
                << ", \"truncation_mass\": " << io::format_real(r.truncation_mass)
                << ", \"decay_ratio\": " << io::format_real(r.decay_ratio) << "}\n";
        } else if (*ver) {
            const Mask mask = detail::load_mask(cfg.mask_path);
            VerifyOptions opt;
            opt.cascade_level = cfg.level;
            std::size_t failed = 0;
            for (const Check& c : verify_scheme(mask, opt)) {
                buf << c.name << ": " << (c.passed ? "PASS" : "FAIL") << " (" << io::format_real(c.value)
                    << " <= " << io::format_real(c.limit) << ")\n";
                if (!c.passed) ++failed;
            }
            buf << (failed == 0 ? "all checks passed\n" : std::to_string(failed) + " check(s) failed\n");
            if (failed) status = kNumerical;
        }
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return kUsage;
    }

    if (cfg.out_path.empty()) {
        out << buf.str();
    } else {
        std::ofstream file(cfg.out_path, std::ios::binary);
        if (!file) {
            err << "input error: cannot write " << cfg.out_path << '\n';
            return kUsage;
        }
        file << buf.str();
    }
    return status;
}

} // namespace mrsubdiv::cli
