#include "faddeev/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

namespace faddeev {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* key : allowed) ok = ok || it.key() == key;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

PotentialConfig parse_config_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown_keys(doc, {"dimension", "energy", "points"}, "config");
    PotentialConfig cfg;
    if (!doc.contains("dimension") || !doc.contains("energy") || !doc.contains("points"))
        throw ConfigError("config requires keys dimension, energy, points");
    if (!doc["dimension"].is_number_integer()) throw ConfigError("dimension must be an integer");
    cfg.dimension = doc["dimension"].get<int>();
    if (!doc["energy"].is_number()) throw ConfigError("energy must be a number");
    cfg.energy = doc["energy"].get<double>();
    if (!doc["points"].is_array()) throw ConfigError("points must be an array");
    for (const json& pt : doc["points"]) {
        if (!pt.is_object()) throw ConfigError("each point must be an object");
        reject_unknown_keys(pt, {"z", "alpha"}, "point");
        if (!pt.contains("z") || !pt.contains("alpha"))
            throw ConfigError("each point requires keys z and alpha");
        const json& z = pt["z"];
        if (!z.is_array() || static_cast<int>(z.size()) != cfg.dimension)
            throw ConfigError("z must be an array of length = dimension");
        Vec v = Vec::zero(cfg.dimension);
        for (int i = 0; i < cfg.dimension; ++i) {
            if (!z[static_cast<size_t>(i)].is_number()) throw ConfigError("z entries must be numbers");
            v[i] = z[static_cast<size_t>(i)].get<double>();
        }
        if (!pt["alpha"].is_number()) throw ConfigError("alpha must be a number");
        cfg.points.push_back(v);
        cfg.alphas.push_back(pt["alpha"].get<double>());
    }
    cfg.validate();
    return cfg;
}

PotentialConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config_json(doc);
}

json config_to_json(const PotentialConfig& config) {
    json points = json::array();
    for (size_t j = 0; j < config.size(); ++j) {
        json z = json::array();
        for (int i = 0; i < config.dimension; ++i) z.push_back(config.points[j][i]);
        points.push_back({{"z", z}, {"alpha", config.alphas[j]}});
    }
    return {{"dimension", config.dimension}, {"energy", config.energy}, {"points", points}};
}

void write_grid_csv(std::ostream& os, const ScanGrid& grid) {
    os << "re_lambda,im_lambda,detA_re,detA_im_residual,flag\n";
    for (int ir = 0; ir < grid.spec.n_r; ++ir) {
        for (int it = 0; it < grid.spec.n_theta; ++it) {
            const Complex lam = grid.lambda_at(ir, it);
            const size_t idx = grid.node(ir, it);
            os << format_double(lam.real()) << ',' << format_double(lam.imag()) << ','
               << format_double(grid.values[idx]) << ',' << format_double(grid.im_residual[idx])
               << ',' << static_cast<int>(grid.flags[idx]) << '\n';
        }
    }
}

json curves_to_json(const SingularCurveSet& curves, const PotentialConfig& config) {
    json arr = json::array();
    for (const auto& poly : curves.curves) {
        json one = json::array();
        for (const Complex& p : poly) one.push_back({{"re", p.real()}, {"im", p.imag()}});
        arr.push_back(std::move(one));
    }
    json out = {{"curves", std::move(arr)},
                {"preset", curves.preset ? json(*curves.preset) : json(nullptr)},
                {"config", config_to_json(config)},
                {"refinement_tol", curves.refinement_tol},
                {"unit_circle", "excluded"}};
    return out;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
    os << "N,err_abs,err_rel,excluded_flag\n";
    for (const ConvergencePoint& p : report.points) {
        os << format_double(p.cutoff) << ',' << format_double(p.err_abs) << ','
           << format_double(p.err_rel) << ',' << (p.excluded ? 1 : 0) << '\n';
    }
}

json report_to_json(const IdentityReport& report) {
    json diag = json::object();
    for (const auto& [key, val] : report.diagnostics) diag[key] = val;
    return {{"identity", report.identity_id},
            {"lhs", {{"re", report.lhs.real()}, {"im", report.lhs.imag()}}},
            {"rhs", {{"re", report.rhs.real()}, {"im", report.rhs.imag()}}},
            {"rel_error", report.rel_error},
            {"diagnostics", std::move(diag)}};
}

}  // namespace faddeev
