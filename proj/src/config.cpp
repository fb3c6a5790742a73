#include "lscat/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace lscat {

namespace {

using nlohmann::json;

// Object view that rejects unknown keys and mistyped values.
class Section {
public:
    Section(const json& j, std::string path, std::initializer_list<const char*> keys)
        : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool known = false;
            for (const char* k : keys) known = known || it.key() == k;
            if (!known) throw ConfigError("unknown key " + path_ + "." + it.key());
        }
    }

    bool has(const char* key) const { return j_.contains(key); }
    const json& at(const char* key) const {
        if (!has(key)) throw ConfigError("missing key " + path_ + "." + key);
        return j_.at(key);
    }
    std::string child(const char* key) const { return path_ + "." + key; }

    double number(const char* key) const {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(child(key) + " must be a number");
        return v.get<double>();
    }
    double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

    int integer(const char* key) const {
        const json& v = at(key);
        if (!v.is_number_integer()) throw ConfigError(child(key) + " must be an integer");
        return v.get<int>();
    }
    int integer(const char* key, int fallback) const { return has(key) ? integer(key) : fallback; }

    std::string string(const char* key) const {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(child(key) + " must be a string");
        return v.get<std::string>();
    }

    Point point(const char* key) const { return parse_point(at(key), child(key)); }

    static Point parse_point(const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ConfigError(path + " must be [x1, x2]");
        return {v[0].get<double>(), v[1].get<double>()};
    }

private:
    const json& j_;
    std::string path_;
};

InterfaceProfile parse_interface(const json& j, const std::string& path) {
    Section s(j, path, {"bumps"});
    std::vector<Bump> bumps;
    if (s.has("bumps")) {
        const json& arr = s.at("bumps");
        if (!arr.is_array()) throw ConfigError(s.child("bumps") + " must be an array");
        for (std::size_t k = 0; k < arr.size(); ++k) {
            Section b(arr[k], s.child("bumps") + "[" + std::to_string(k) + "]",
                      {"center", "halfwidth", "height"});
            Bump bump{b.number("center"), b.number("halfwidth"), b.number("height")};
            if (!(bump.halfwidth > 0.0)) throw ConfigError("bump halfwidth must be positive");
            bumps.push_back(bump);
        }
    }
    return InterfaceProfile(std::move(bumps));
}

MeshOptions parse_mesh(const json& j, const std::string& path, MeshOptions mesh) {
    Section s(j, path, {"cell_size", "subsample"});
    mesh.cell_size = s.number("cell_size", mesh.cell_size);
    mesh.subsample = s.integer("subsample", mesh.subsample);
    if (!(mesh.cell_size > 0.0) || mesh.subsample < 1)
        throw ConfigError(path + " needs cell_size > 0 and subsample >= 1");
    return mesh;
}

ObstacleSpec parse_obstacle(const json& j) {
    Section s(j, "obstacle", {"kind", "curve", "lambda", "n", "M", "mesh", "fd_step"});
    ObstacleSpec spec;
    const std::string kind = s.string("kind");
    if (kind == "sound_soft") spec.kind = BoundaryKind::sound_soft;
    else if (kind == "neumann") spec.kind = BoundaryKind::neumann;
    else if (kind == "impedance") spec.kind = BoundaryKind::impedance;
    else if (kind == "penetrable") spec.kind = BoundaryKind::penetrable;
    else throw ConfigError("obstacle.kind must be sound_soft, neumann, impedance or penetrable");

    Section c(s.at("curve"), s.child("curve"), {"shape", "center", "size"});
    const std::string shape = c.string("shape");
    if (shape == "circle") spec.curve.kind = CurveKind::circle;
    else if (shape == "kite") spec.curve.kind = CurveKind::kite;
    else throw ConfigError("obstacle.curve.shape must be circle or kite");
    spec.curve.center = c.point("center");
    spec.curve.size = c.number("size");
    if (!(spec.curve.size > 0.0)) throw ConfigError("obstacle.curve.size must be positive");

    spec.lambda = s.number("lambda", 0.0);
    if (spec.kind == BoundaryKind::impedance && !s.has("lambda"))
        throw ConfigError("impedance obstacle needs obstacle.lambda");
    if (spec.lambda < 0.0) throw ConfigError("obstacle.lambda must be non-negative");
    if (s.has("n")) {
        const json& n = s.at("n");
        if (n.is_number()) spec.index = n.get<double>();
        else if (n.is_array() && n.size() == 2 && n[0].is_number() && n[1].is_number())
            spec.index = Complex(n[0].get<double>(), n[1].get<double>());
        else throw ConfigError("obstacle.n must be a number or [re, im]");
    } else if (spec.kind == BoundaryKind::penetrable) {
        throw ConfigError("penetrable obstacle needs obstacle.n");
    }
    spec.M = s.integer("M", spec.M);
    if (spec.M < 4) throw ConfigError("obstacle.M must be at least 4");
    spec.fd_step = s.number("fd_step", spec.fd_step);
    if (!(spec.fd_step > 0.0)) throw ConfigError("obstacle.fd_step must be positive");
    if (s.has("mesh")) spec.mesh = parse_mesh(s.at("mesh"), s.child("mesh"), spec.mesh);
    return spec;
}

BlowupConfig parse_experiment(const json& j) {
    Section s(j, "experiment",
              {"z_star_x1", "delta0", "eps0", "n_max", "radial_cells", "angular_cells",
               "second_interface"});
    BlowupConfig cfg;
    cfg.z_star_x1 = s.number("z_star_x1", cfg.z_star_x1);
    cfg.delta0 = s.number("delta0", cfg.delta0);
    cfg.eps0 = s.number("eps0", cfg.eps0);
    cfg.n_max = s.integer("n_max", cfg.n_max);
    cfg.radial_cells = s.integer("radial_cells", cfg.radial_cells);
    cfg.angular_cells = s.integer("angular_cells", cfg.angular_cells);
    if (s.has("second_interface"))
        cfg.second_interface = parse_interface(s.at("second_interface"), s.child("second_interface"));
    if (!(cfg.delta0 > 0.0) || !(cfg.eps0 > cfg.delta0))
        throw ConfigError("experiment needs 0 < delta0 < eps0");
    if (cfg.n_max < 4) throw ConfigError("experiment.n_max must be at least 4");
    return cfg;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    Section s(root, "config",
              {"medium", "interface", "arc_radius_R", "obstacle", "mesh", "quadrature", "solver",
               "sources", "receivers", "experiment", "verify"});
    RunConfig cfg;

    Section m(s.at("medium"), "medium", {"kappa1", "kappa2"});
    cfg.scene.medium = {m.number("kappa1"), m.number("kappa2")};
    if (s.has("interface")) cfg.scene.interface = parse_interface(s.at("interface"), "interface");
    cfg.scene.arc_radius = s.number("arc_radius_R", 0.0);
    if (s.has("mesh")) cfg.scene.mesh = parse_mesh(s.at("mesh"), "mesh", cfg.scene.mesh);
    if (s.has("quadrature")) {
        Section q(s.at("quadrature"), "quadrature", {"tol", "max_panels"});
        cfg.scene.quad.tol = q.number("tol", cfg.scene.quad.tol);
        cfg.scene.quad.max_panels = q.integer("max_panels", cfg.scene.quad.max_panels);
        if (!(cfg.scene.quad.tol > 0.0) || cfg.scene.quad.max_panels < 1)
            throw ConfigError("quadrature needs tol > 0 and max_panels >= 1");
    }
    if (s.has("solver")) {
        Section sv(s.at("solver"), "solver", {"threads"});
        cfg.threads = sv.integer("threads", 0);
        if (cfg.threads < 0) throw ConfigError("solver.threads must be non-negative");
    }
    if (s.has("obstacle")) cfg.scene.obstacle = parse_obstacle(s.at("obstacle"));
    cfg.scene.validate();

    if (s.has("sources")) {
        const json& arr = s.at("sources");
        if (!arr.is_array()) throw ConfigError("sources must be an array of [x1, x2]");
        for (std::size_t k = 0; k < arr.size(); ++k)
            cfg.sources.push_back(Section::parse_point(arr[k], "sources[" + std::to_string(k) + "]"));
    }
    if (s.has("receivers")) {
        Section r(s.at("receivers"), "receivers", {"b", "a", "count"});
        ReceiverLine line{r.number("b"), r.number("a"), r.integer("count")};
        line.validate(cfg.scene.interface);
        cfg.receivers = line;
    }
    if (s.has("experiment")) cfg.experiment = parse_experiment(s.at("experiment"));
    if (s.has("verify")) {
        Section v(s.at("verify"), "verify", {"seed", "beta_samples"});
        cfg.verify.seed = static_cast<unsigned>(v.integer("seed", static_cast<int>(cfg.verify.seed)));
        cfg.verify.beta_samples = v.integer("beta_samples", cfg.verify.beta_samples);
        if (cfg.verify.beta_samples < 1) throw ConfigError("verify.beta_samples must be positive");
    }
    cfg.verify.medium = cfg.scene.medium;
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str());
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace lscat
