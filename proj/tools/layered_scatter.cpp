#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lscat/config.hpp"
#include "lscat/parallel.hpp"

using namespace lscat;

namespace {

enum Exit { ok = 0, check_failure = 1, config_error = 2, numerical_failure = 3 };

Point parse_point_arg(const std::string& s, const char* what) {
    std::istringstream in(s);
    double a = 0.0, b = 0.0;
    char comma = 0;
    if (!(in >> a >> comma >> b) || comma != ',' || !(in >> std::ws).eof())
        throw ConfigError(std::string(what) + " must be given as x1,x2");
    return {a, b};
}

std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

int cmd_green(const RunConfig& cfg, const std::string& x_arg, const std::string& xs_arg,
              const std::string& kind, const std::string& part) {
    const Point x = parse_point_arg(x_arg, "--x"), xs = parse_point_arg(xs_arg, "--xs");
    const Medium& m = cfg.scene.medium;
    const QuadOptions& q = cfg.scene.quad;
    Complex v;
    if (kind == "monopole") {
        v = part == "total" ? green_planar_total(x, xs, m, q) : green_planar_scattered(x, xs, m, q);
    } else {
        const int ell = kind == "dipole-1" ? 1 : 2;
        v = part == "total" ? dipole_planar_total(x, xs, ell, m, q)
                            : dipole_planar_scattered(x, xs, ell, m, q);
    }
    std::printf("%.15g,%.15g\n", v.real(), v.imag());
    return ok;
}

int cmd_forward(const RunConfig& cfg, const std::string& output) {
    if (cfg.sources.empty()) throw ConfigError("forward needs a non-empty sources array");
    if (!cfg.receivers) throw ConfigError("forward needs a receivers section");
    const ForwardModel model(cfg.scene);
    const auto rows = synthesize_dataset(model, cfg.sources, cfg.receivers->points());
    std::string csv = "source_index,xs1,xs2,x1,x2,re_us,im_us\n";
    for (const auto& r : rows) {
        csv += std::to_string(r.source_index) + ',' + format_double(r.source(0)) + ',' +
               format_double(r.source(1)) + ',' + format_double(r.receiver(0)) + ',' +
               format_double(r.receiver(1)) + ',' + format_double(r.value.real()) + ',' +
               format_double(r.value.imag()) + '\n';
    }
    write_file(output, csv);
    return ok;
}

int cmd_demo_uniqueness(const RunConfig& cfg, const std::string& output) {
    const BlowupConfig bc = cfg.experiment.value_or(BlowupConfig{});
    const BlowupResult res = blowup_experiment(cfg.scene.interface, cfg.scene.medium, bc);
    std::string csv = "n,N_n\n";
    bool increasing = true;
    for (std::size_t k = 0; k < res.n.size(); ++k) {
        csv += std::to_string(res.n[k]) + ',' + format_double(res.norm[k]) + '\n';
        if (res.n[k] > 8 && !(res.norm[k] > res.norm[k - 1])) increasing = false;
    }
    csv += "# {\"fitted_exponent\":" + json_number(res.exponent) +
           ",\"divergence_ratio\":" + json_number(res.divergence_ratio) +
           ",\"increasing_from_n8\":" + (increasing ? "true" : "false") +
           ",\"resolution_warning\":" + (res.resolution_warning ? "true" : "false") + "}\n";
    write_file(output, csv);
    if (res.resolution_warning)
        std::cerr << "warning: a source point z_n is within two cell sizes of the sample mesh\n";
    return increasing ? ok : check_failure;
}

int cmd_verify(const RunConfig& cfg, const std::string& output) {
    const auto checks = run_verification(cfg.verify);
    std::string js = "[\n";
    bool all = true;
    for (std::size_t k = 0; k < checks.size(); ++k) {
        const auto& c = checks[k];
        all = all && c.pass;
        js += "  {\"check\":\"" + c.check + "\",\"value\":" + json_number(c.value) +
              ",\"tolerance\":" + json_number(c.tolerance) +
              ",\"pass\":" + (c.pass ? "true" : "false") + "}" +
              (k + 1 < checks.size() ? ",\n" : "\n");
    }
    js += "]\n";
    if (output.empty()) std::cout << js;
    else write_file(output, js);
    return all ? ok : check_failure;
}

int resolve_threads(int flag, int from_config) {
    if (flag > 0) return flag;
    if (const char* env = std::getenv("LAYERED_SCATTER_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1)
            throw ConfigError("LAYERED_SCATTER_THREADS must be a positive integer");
        return static_cast<int>(n);
    }
    return from_config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic scattering in a two-layer medium with a locally rough interface"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (fallback: LAYERED_SCATTER_THREADS)")
        ->check(CLI::PositiveNumber);

    std::string config_path, x_arg, xs_arg, kind = "monopole", part = "total", output;
    bool flip = false;

    auto* green = app.add_subcommand("green", "evaluate the planar layered Green's function");
    green->add_option("config", config_path, "JSON config")->required();
    green->add_option("--x", x_arg, "field point x1,x2")->required();
    green->add_option("--xs", xs_arg, "source point x1,x2")->required();
    green->add_option("--kind", kind)->check(CLI::IsMember({"monopole", "dipole-1", "dipole-2"}));
    green->add_option("--part", part)->check(CLI::IsMember({"total", "scattered"}));

    std::string fwd_out = "nearfield.csv", blow_out = "blowup.csv";
    auto* forward = app.add_subcommand("forward", "synthesize near-field data on the receiver line");
    forward->add_option("config", config_path, "JSON config")->required();
    forward->add_option("-o,--output", fwd_out, "CSV output path");

    auto* demo = app.add_subcommand("demo-uniqueness", "singular-source blow-up experiment");
    demo->add_option("config", config_path, "JSON config")->required();
    demo->add_option("-o,--output", blow_out, "CSV output path");

    auto* verify = app.add_subcommand("verify", "run the invariant suite, JSON report");
    verify->add_option("config", config_path, "JSON config")->required();
    verify->add_option("-o,--output", output, "report path (default stdout)");
    verify->add_flag("--debug-flip-branch", flip, "negative control: wrong evanescent branch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        const RunConfig cfg = load_run_config(config_path);
        set_thread_count(resolve_threads(threads, cfg.threads));
        debug::set_branch_flip(flip);
        if (*green) return cmd_green(cfg, x_arg, xs_arg, kind, part);
        if (*forward) return cmd_forward(cfg, fwd_out);
        if (*demo) return cmd_demo_uniqueness(cfg, blow_out);
        return cmd_verify(cfg, output);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << '\n';
        return config_error;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return config_error;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }
}
