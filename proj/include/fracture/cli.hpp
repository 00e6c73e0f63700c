#pragma once

// Command-line driver. run() returns the process exit code:
// 0 success, 1 validation failure or refusal, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fracture/chart.hpp"
#include "fracture/periodicity.hpp"
#include "fracture/presets.hpp"

namespace fracture::cli {

inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// "imin:imax,jmin:jmax"
inline Window parse_window(const std::string& text) {
    static const std::regex re(R"(^\s*(-?\d+):(-?\d+),(-?\d+):(-?\d+)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw UsageError("--window: expected imin:imax,jmin:jmax, got '" + text + "'");
    const Window w{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), std::stoi(m[4])};
    if (w.empty()) throw UsageError("--window: empty window '" + text + "'");
    return w;
}

/// A --module argument: a preset, a presentation file, or a module JSON file.
struct Input {
    std::string name;
    std::optional<PresetId> preset;
    std::optional<RingPresentation> presentation;
    std::optional<BigradedModule> module;

    bool is_input_preset() const { return preset && preset->is_input(); }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("--module: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Input load_input(const std::string& arg, long prime) {
    Input in;
    in.name = arg;
    const bool odd = prime != 2;
    if (auto id = find_preset(arg, odd ? prime : 3)) {
        const bool wants_odd = id->kind == PresetKind::HFp_odd_R || id->kind == PresetKind::HFp_odd_C2;
        if (wants_odd != odd)
            throw UsageError("--prime: preset '" + arg + "' is defined for " + (wants_odd ? "odd primes" : "p = 2"));
        in.preset = id;
        if (id->is_input()) in.presentation = preset_presentation(*id);
        return in;
    }
    if (!std::ifstream(arg)) throw UsageError("--module: '" + arg + "' is neither a preset nor a readable file");
    const std::string text = read_file(arg);
    if (arg.size() >= 5 && arg.compare(arg.size() - 5, 5, ".json") == 0) {
        in.module = module_from_json(text);
        if (in.module->prime() != prime)
            throw UsageError("--prime: module file has prime " + std::to_string(in.module->prime()));
    } else {
        in.presentation = parse_presentation(text);
        if (in.presentation->prime != prime)
            throw UsageError("--prime: presentation has prime " + std::to_string(in.presentation->prime));
    }
    return in;
}

/// The input as a module on `w`.
inline BigradedModule materialize(const Input& in, const Window& w) {
    if (in.module) {
        if (!in.module->window().contains(w)) throw UsageError("--window: outside the module's window " + to_string(in.module->window()));
        return in.module->restricted(w);
    }
    if (in.preset && !in.preset->is_input()) return preset(*in.preset, w);
    return expand(*in.presentation, w);
}

struct OutputOptions {
    std::string format = "json";
    std::string out;
    bool provenance = false;
};

inline void write_output(const std::string& text, const OutputOptions& o, std::ostream& out) {
    if (o.out.empty() || o.out == "-") {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("--out: cannot write '" + o.out + "'");
    f << text;
}

inline std::string format_module(const BigradedModule& m, const OutputOptions& o, const std::set<BiDegree>& shade = {},
                                 const std::map<BiDegree, CellProvenance>* prov = nullptr) {
    if (o.format == "json") return module_json(m, o.provenance ? prov : nullptr).dump(2) + "\n";
    ChartSpec spec;
    spec.window = m.window();
    spec.shaded = shade;
    return render(m, spec, o.format == "ascii" ? ChartFormat::ascii : ChartFormat::svg);
}

inline std::string regions_table(const Window& w, const std::string& format) {
    if (format == "json") {
        Json rows = Json::array();
        for (const BiDegree d : w.cells()) {
            const RegionVerdict v = region(d.i, d.j);
            rows.push_back(Json{{"i", d.i},
                                {"j", d.j},
                                {"in_di_range", v.in_di_range},
                                {"in_nonperiodicity_cone", v.in_nonperiodicity_cone},
                                {"period", v.period ? Json(*v.period) : Json(nullptr)}});
        }
        return Json{{"regions", rows}}.dump(2) + "\n";
    }
    std::ostringstream os;
    os << std::setw(5) << "i" << std::setw(5) << "j" << std::setw(10) << "di_range" << std::setw(7) << "cone" << std::setw(8)
       << "period" << '\n';
    for (const BiDegree d : w.cells()) {
        const RegionVerdict v = region(d.i, d.j);
        os << std::setw(5) << d.i << std::setw(5) << d.j << std::setw(10) << (v.in_di_range ? "yes" : "no") << std::setw(7)
           << (v.in_nonperiodicity_cone ? "yes" : "no") << std::setw(8) << (v.period ? std::to_string(*v.period) : "-") << '\n';
    }
    return os.str();
}

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Equivariant realization of real motivic coefficient modules", "fracture"};
    app.require_subcommand(1);

    std::string module_arg;
    long prime = 2;
    std::string window_arg;
    int steps = 0;
    bool assert_complete = false;
    std::string mult_name;
    OutputOptions o;

    auto add_common = [&](CLI::App* sub, bool needs_module) {
        if (needs_module) sub->add_option("--module", module_arg, "preset name or presentation/JSON file")->required();
        sub->add_option("--prime", prime, "prime p")->check(CLI::PositiveNumber);
        sub->add_option("--window", window_arg, "imin:imax,jmin:jmax");
        sub->add_option("--format", o.format, "json, ascii or svg")->check(CLI::IsMember({"json", "ascii", "svg"}));
        sub->add_option("--out", o.out, "output path (default stdout)");
    };
    CLI::App* realize_cmd = app.add_subcommand("realize", "compute the equivariant answer by the fracture square");
    add_common(realize_cmd, true);
    realize_cmd->add_option("--steps", steps, "telescope stages (default: window diameter)")->check(CLI::PositiveNumber);
    realize_cmd->add_flag("--assert-rho-complete", assert_complete, "assert that the input is rho-complete");
    realize_cmd->add_flag("--provenance", o.provenance, "include per-cell provenance in JSON");

    CLI::App* expand_cmd = app.add_subcommand("expand", "expand a presentation or preset on the window");
    add_common(expand_cmd, true);

    CLI::App* invert_cmd = app.add_subcommand("invert", "invert a multiplier");
    add_common(invert_cmd, true);
    invert_cmd->add_option("--mult", mult_name, "multiplier name")->required();
    invert_cmd->add_option("--steps", steps, "telescope stages")->check(CLI::PositiveNumber);

    CLI::App* complete_cmd = app.add_subcommand("complete", "complete at a multiplier");
    add_common(complete_cmd, true);
    complete_cmd->add_option("--mult", mult_name, "multiplier name")->required();
    complete_cmd->add_option("--steps", steps, "quotient stages")->check(CLI::PositiveNumber);

    CLI::App* regions_cmd = app.add_subcommand("regions", "periodicity region table");
    regions_cmd->add_option("--window", window_arg, "imin:imax,jmin:jmax");
    std::string regions_format = "ascii";
    regions_cmd->add_option("--format", regions_format, "ascii (default) or json")->check(CLI::IsMember({"json", "ascii"}));
    regions_cmd->add_option("--out", o.out, "output path (default stdout)");

    CLI::App* check_cmd = app.add_subcommand("check", "validate a module and the exactness certificates of its realization");
    add_common(check_cmd, true);
    check_cmd->add_flag("--assert-rho-complete", assert_complete, "assert that the input is rho-complete");

    // Window values such as -8:8 would otherwise be read as flags.
    for (std::size_t k = 0; k + 1 < args.size(); ++k)
        if (args[k] == "--window") {
            args[k] = "--window=" + args[k + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (!is_prime(prime)) throw UsageError("--prime: " + std::to_string(prime) + " is not prime");
        if (*regions_cmd) {
            const Window w = parse_window(window_arg.empty() ? "0:8,0:8" : window_arg);
            write_output(regions_table(w, regions_format), o, out);
            return kOk;
        }
        const Input in = load_input(module_arg, prime);
        Window w = Window::square(-8, 8);
        if (!window_arg.empty())
            w = parse_window(window_arg);
        else if (in.module)
            w = in.module->window();
        else if (in.presentation && in.presentation->window)
            w = *in.presentation->window;
        const int k = steps > 0 ? steps : default_steps(w);

        if (*expand_cmd) {
            write_output(format_module(materialize(in, w), o), o, out);
            return kOk;
        }
        if (*invert_cmd || *complete_cmd) {
            const BigradedModule m = materialize(in, w);
            auto x = m.multiplier(mult_name);
            if (!x) throw UsageError("--mult: module has no multiplier '" + mult_name + "'");
            const BigradedModule r = *invert_cmd ? invert(m, *x, k) : complete(m, *x, k);
            write_output(format_module(r, o), o, out);
            return kOk;
        }

        // Input presets are rho-complete by construction.
        const bool asserted = assert_complete || in.is_input_preset();
        auto realize_input = [&]() -> AssemblyReport {
            if (in.presentation) return realize(*in.presentation, w, asserted, k);
            return realize(materialize(in, w), asserted, k);
        };

        if (*realize_cmd) {
            const AssemblyReport rep = realize_input();
            std::set<BiDegree> shade;
            for (const auto& [d, g] : rep.corners.input.cells())
                if (w.contains(d)) shade.insert(d);
            write_output(format_module(rep.result, o, shade, &rep.provenance), o, out);
            return kOk;
        }

        if (*check_cmd) {
            const BigradedModule m = materialize(in, w);
            int failures = 0;
            for (const auto& v : validate_module(m)) {
                out << "violation " << v.cell << ' ' << v.rule << ": " << v.detail << '\n';
                ++failures;
            }
            if (find_square_multipliers(m.multipliers()) && (asserted || in.is_input_preset())) {
                const AssemblyReport rep = realize_input();
                for (const BiDegree d : rep.uncertified()) {
                    out << "uncertified " << d << '\n';
                    ++failures;
                }
                for (const auto& v : validate_module(rep.result)) {
                    out << "violation in realization " << v.cell << ' ' << v.rule << ": " << v.detail << '\n';
                    ++failures;
                }
                out << "realization: " << rep.provenance.size() << " cells, " << rep.ambiguous().size() << " ambiguous\n";
            }
            out << (failures == 0 ? "ok" : std::to_string(failures) + " problem(s)") << '\n';
            return failures == 0 ? kOk : kFailure;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const UnknownPreset& e) {
        err << "usage error: --module: " << e.what() << '\n';
        return kUsage;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const ParseError& e) {
        err << module_arg << ':' << e.what() << '\n';
        return kFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace fracture::cli
