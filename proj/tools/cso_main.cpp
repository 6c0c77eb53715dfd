#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "cso/commands.hpp"

namespace {

// One config-file key: the CLI option it mirrors (to honor flag precedence)
// and a setter that parses the file's text into the bound field.
struct Binding {
    CLI::Option* opt;
    std::function<void(const std::string&)> apply;
};
using Bindings = std::map<std::string, Binding>;

template <typename T>
void bind_flag(CLI::App* sub, Bindings& keys, const std::string& name, T& field,
          const std::string& help) {
    CLI::Option* opt = sub->add_option("--" + name, field, help)->capture_default_str();
    keys[name] = Binding{opt, [&field, name](const std::string& text) {
                             T parsed{};
                             if (!CLI::detail::lexical_cast(text, parsed))
                                 throw std::invalid_argument(
                                     "config value for '" + name +
                                     "' is not valid: " + text);
                             field = parsed;
                         }};
}

// Flat key=value file mirroring the flags; blank lines and # comments are
// skipped, explicitly given flags take precedence over file entries.
void apply_config(const std::string& path, const Bindings& keys) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto it = keys.find(key);
        if (it == keys.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        if (it->second.opt->count() == 0) it->second.apply(value);
    }
}

// Returns the stream the CSV goes to: the file named by --out, or stdout.
// The holder owns the file case and keeps it alive until main returns.
std::ostream& open_output(const std::string& path,
                          std::unique_ptr<std::ofstream>& holder) {
    if (path.empty()) return std::cout;
    holder = std::make_unique<std::ofstream>(path);
    if (!*holder)
        throw std::invalid_argument("cannot open output file: " + path);
    return *holder;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random iteration of a family of cubic maps on the probability "
                 "2-simplex: orbits, Lyapunov exponents, attractor classification, "
                 "basin statistics, and normal-form verification."};
    app.require_subcommand(1);

    cso::SimulateConfig sim;
    cso::ClassifyConfig cls;
    cso::ScanConfig scan;
    cso::BasinConfig basin;
    cso::EscapeConfig esc;
    cso::NormalFormCheckConfig nf;
    std::string out;
    std::string config_path;
    std::map<const CLI::App*, Bindings> bindings;

    const std::string dist_help =
        "Parameter law: dirac:T, uniform:LO,HI, or "
        "mix:W1*dirac:T1+W2*uniform:LO,HI+...; numbers may be fractions like 2/3";
    const std::string out_help = "Write the CSV to this file instead of stdout";
    const std::string config_help =
        "Flat key=value file mirroring the flags; explicit flags override it";
    const std::string steps_help = "Maximum number of steps";
    const std::string eps_help = "Convergence ball radius";
    const std::string dwell_help = "Consecutive in-ball steps required for a verdict";
    const std::string seed_help = "Master seed";
    const std::string threads_help = "Worker threads (content is independent of this)";

    auto* s_sim = app.add_subcommand(
        "simulate", "Run one random orbit and report its limit verdict");
    {
        Bindings& b = bindings[s_sim];
        bind_flag(s_sim, b, "dist", sim.dist, dist_help);
        bind_flag(s_sim, b, "x0", sim.x0, "Initial point x1,x2,x3");
        bind_flag(s_sim, b, "steps", sim.steps, steps_help);
        bind_flag(s_sim, b, "eps", sim.eps, eps_help);
        bind_flag(s_sim, b, "dwell", sim.dwell, dwell_help);
        bind_flag(s_sim, b, "seed", sim.seed, seed_help);
        bind_flag(s_sim, b, "out", out, out_help);
        s_sim->add_option("--config", config_path, config_help);
    }

    auto* s_cls = app.add_subcommand(
        "classify", "Exact Lyapunov exponents and limit sets per region");
    {
        Bindings& b = bindings[s_cls];
        bind_flag(s_cls, b, "dist", cls.dist, dist_help);
        bind_flag(s_cls, b, "out", out, out_help);
        s_cls->add_option("--config", config_path, config_help);
    }

    auto* s_scan = app.add_subcommand(
        "scan", "Sweep the two-point mixture family and tabulate exponents");
    {
        Bindings& b = bindings[s_scan];
        bind_flag(s_scan, b, "from", scan.from, "First mixture center");
        bind_flag(s_scan, b, "to", scan.to, "Last mixture center");
        bind_flag(s_scan, b, "step", scan.step, "Center increment");
        bind_flag(s_scan, b, "offset", scan.offset, "Half-spread of the two atoms");
        bind_flag(s_scan, b, "out", out, out_help);
        s_scan->add_option("--config", config_path, config_help);
    }

    auto* s_basin = app.add_subcommand(
        "basin", "Monte Carlo verdict counts over an interior grid of the sector");
    {
        Bindings& b = bindings[s_basin];
        bind_flag(s_basin, b, "dist", basin.dist, dist_help);
        bind_flag(s_basin, b, "grid", basin.grid, "Barycentric lattice resolution (>= 3)");
        bind_flag(s_basin, b, "trials", basin.trials, "Trajectories per grid point");
        bind_flag(s_basin, b, "steps", basin.steps, "Maximum steps per trajectory");
        bind_flag(s_basin, b, "eps", basin.eps, eps_help);
        bind_flag(s_basin, b, "dwell", basin.dwell, dwell_help);
        bind_flag(s_basin, b, "seed", basin.seed, seed_help);
        bind_flag(s_basin, b, "threads", basin.threads, threads_help);
        bind_flag(s_basin, b, "out", out, out_help);
        s_basin->add_option("--config", config_path, config_help);
    }

    auto* s_esc = app.add_subcommand(
        "escape", "Fraction of orbits leaving a ball around a repelling point");
    {
        Bindings& b = bindings[s_esc];
        bind_flag(s_esc, b, "dist", esc.dist, dist_help);
        bind_flag(s_esc, b, "target", esc.target, "Fixed point: E1, C12, or Center");
        bind_flag(s_esc, b, "start", esc.start, "Initial distance from the target");
        bind_flag(s_esc, b, "eps", esc.eps, "Escape ball radius");
        bind_flag(s_esc, b, "trials", esc.trials, "Number of trajectories");
        bind_flag(s_esc, b, "steps", esc.steps, "Maximum steps per trajectory");
        bind_flag(s_esc, b, "seed", esc.seed, seed_help);
        bind_flag(s_esc, b, "threads", esc.threads, threads_help);
        bind_flag(s_esc, b, "out", out, out_help);
        s_esc->add_option("--config", config_path, config_help);
    }

    auto* s_nf = app.add_subcommand(
        "normalform-check", "Verify the coordinate-change identities and envelopes");
    {
        Bindings& b = bindings[s_nf];
        bind_flag(s_nf, b, "seed", nf.seed, "Seed for the randomized probes");
        bind_flag(s_nf, b, "out", out, out_help);
        s_nf->add_option("--config", config_path, config_help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help or the parse error
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_config(config_path, bindings[active]);

        std::unique_ptr<std::ofstream> file;
        if (active == s_sim) {
            cso::run_simulate(sim, open_output(out, file));
        } else if (active == s_cls) {
            cso::run_classify(cls, open_output(out, file), std::cerr);
        } else if (active == s_scan) {
            cso::run_scan(scan, open_output(out, file));
        } else if (active == s_basin) {
            cso::run_basin(basin, open_output(out, file));
        } else if (active == s_esc) {
            cso::run_escape(esc, open_output(out, file));
        } else if (active == s_nf) {
            const int failures = cso::run_normalform_check(nf, open_output(out, file));
            if (failures > 0) {
                std::cerr << "normalform-check: " << failures << " check(s) failed\n";
                return 3;
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
