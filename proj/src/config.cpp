#include "ndextrap/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ndextrap {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& i : issues) {
        os << "\n  " << i.path << ": " << i.message;
    }
    return os.str();
}

class Reader {
public:
    std::vector<ConfigIssue> issues;

    void issue(const std::string& path, const std::string& message) { issues.push_back({path, message}); }

    bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
        if (!j.is_object()) {
            issue(path, "expected an object");
            return false;
        }
        for (const auto& [key, _] : j.items()) {
            if (!allowed.contains(key)) {
                issue(path + "." + key, "unknown key");
            }
        }
        return true;
    }

    std::optional<std::uint64_t> uint(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
            issue(path + "." + key, "expected a non-negative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            issue(path + "." + key, "expected a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_string()) {
            issue(path + "." + key, "expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    std::optional<bool> boolean(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) {
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            issue(path + "." + key, "expected a boolean");
            return std::nullopt;
        }
        return v.get<bool>();
    }

    std::optional<std::vector<std::size_t>> uint_list(const json& v, const std::string& path) {
        if (!v.is_array() || v.empty()) {
            issue(path, "expected a non-empty array of non-negative integers");
            return std::nullopt;
        }
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_unsigned()) {
                issue(path + "[" + std::to_string(i) + "]", "expected a non-negative integer");
                return std::nullopt;
            }
            out.push_back(v[i].get<std::size_t>());
        }
        return out;
    }
};

void parse_noise(Reader& r, const json& j, const std::string& path, NoiseSpec& noise) {
    if (!r.object(j, path, {"snr_db", "mode", "bumps", "width_min", "width_max", "amplitude"})) {
        return;
    }
    if (auto v = r.number(j, "snr_db", path)) {
        noise.snr_db = *v;
        if (!std::isfinite(*v)) {
            r.issue(path + ".snr_db", "must be finite");
        }
    } else if (!j.contains("snr_db")) {
        r.issue(path + ".snr_db", "required");
    }
    if (auto v = r.string(j, "mode", path)) {
        if (*v == "bumps") {
            noise.params.mode = NoiseMode::gaussian_bumps;
        } else if (*v == "spectral") {
            noise.params.mode = NoiseMode::spectral;
        } else {
            r.issue(path + ".mode", "expected \"bumps\" or \"spectral\"");
        }
    }
    if (auto v = r.uint(j, "bumps", path)) {
        noise.params.bump_count = *v;
        if (*v == 0) {
            r.issue(path + ".bumps", "must be at least 1");
        }
    }
    if (auto v = r.number(j, "width_min", path)) {
        noise.params.width_min = *v;
    }
    if (auto v = r.number(j, "width_max", path)) {
        noise.params.width_max = *v;
    }
    if (!(noise.params.width_min > 0.0 && noise.params.width_max >= noise.params.width_min)) {
        r.issue(path + ".width_min", "need 0 < width_min <= width_max");
    }
    if (auto v = r.number(j, "amplitude", path)) {
        noise.params.amplitude = *v;
        if (!(*v > 0.0)) {
            r.issue(path + ".amplitude", "must be positive");
        }
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues) : Error(join_issues(issues)), issues_(std::move(issues)) {}

RunConfig ExperimentConfig::run_config() const {
    RunConfig rc;
    rc.mode = mode;
    rc.params = regularization;
    rc.max_iters = max_iters;
    rc.residual_tol = residual_tol;
    rc.record_every = record_every;
    return rc;
}

ExperimentConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({{"$", std::string("malformed JSON: ") + e.what()}});
    }
    Reader r;
    ExperimentConfig cfg;
    if (!r.object(doc, "$",
                  {"grid", "support", "regions", "weights", "mode", "regularization", "synthesis", "run", "eigen",
                   "output"})) {
        throw ConfigError(r.issues);
    }

    // grid
    std::optional<GridShape> shape;
    if (!doc.contains("grid")) {
        r.issue("$.grid", "required");
    } else if (auto dims = r.uint_list(doc["grid"], "$.grid")) {
        cfg.grid = *dims;
        try {
            shape.emplace(*dims);
        } catch (const Error& e) {
            r.issue("$.grid", e.what());
        }
    }

    // support
    std::optional<SpectralSupport> support;
    if (!doc.contains("support")) {
        r.issue("$.support", "required");
    } else if (r.object(doc["support"], "$.support", {"half_bandwidth"})) {
        if (!doc["support"].contains("half_bandwidth")) {
            r.issue("$.support.half_bandwidth", "required");
        } else if (auto hb = r.uint_list(doc["support"]["half_bandwidth"], "$.support.half_bandwidth")) {
            cfg.half_bandwidth = *hb;
            if (shape) {
                try {
                    support.emplace(make_spectral_support(*shape, *hb));
                } catch (const Error& e) {
                    r.issue("$.support.half_bandwidth", e.what());
                }
            }
        }
    }

    // regions
    std::vector<Region> regions;
    bool regions_ok = false;
    if (!doc.contains("regions")) {
        r.issue("$.regions", "required");
    } else if (!doc["regions"].is_array() || doc["regions"].empty()) {
        r.issue("$.regions", "expected a non-empty array");
    } else {
        regions_ok = true;
        const json& arr = doc["regions"];
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = "$.regions[" + std::to_string(i) + "]";
            if (!r.object(arr[i], p, {"corner", "extent"})) {
                regions_ok = false;
                continue;
            }
            RectSpec rect;
            bool ok = true;
            for (const char* key : {"corner", "extent"}) {
                if (!arr[i].contains(key)) {
                    r.issue(p + "." + key, "required");
                    ok = false;
                } else if (auto v = r.uint_list(arr[i][key], p + "." + key)) {
                    (std::string(key) == "corner" ? rect.corner : rect.extent) = *v;
                } else {
                    ok = false;
                }
            }
            if (ok && shape) {
                try {
                    regions.push_back(region_from_rect(*shape, rect.corner, rect.extent));
                } catch (const Error& e) {
                    r.issue(p, e.what());
                    ok = false;
                }
            }
            regions_ok = regions_ok && ok;
            cfg.regions.push_back(rect);
        }
    }

    // weights
    if (doc.contains("weights")) {
        const json& w = doc["weights"];
        if (r.object(w, "$.weights", {"mode", "values", "order"})) {
            const auto mode = r.string(w, "mode", "$.weights");
            if (!mode) {
                if (!w.contains("mode")) {
                    r.issue("$.weights.mode", "required");
                }
            } else if (*mode == "uniform") {
                cfg.weights.mode = WeightMode::uniform;
            } else if (*mode == "explicit") {
                cfg.weights.mode = WeightMode::explicit_values;
            } else if (*mode == "suggested") {
                cfg.weights.mode = WeightMode::suggested;
            } else {
                r.issue("$.weights.mode", "expected \"uniform\", \"explicit\" or \"suggested\"");
            }
            if (w.contains("values") && cfg.weights.mode != WeightMode::explicit_values) {
                r.issue("$.weights.values", "only allowed with mode \"explicit\"");
            }
            if (w.contains("order") && cfg.weights.mode != WeightMode::suggested) {
                r.issue("$.weights.order", "only allowed with mode \"suggested\"");
            }
            if (cfg.weights.mode == WeightMode::explicit_values) {
                if (!w.contains("values") || !w["values"].is_array()) {
                    r.issue("$.weights.values", "expected an array of numbers");
                } else {
                    for (std::size_t i = 0; i < w["values"].size(); ++i) {
                        if (!w["values"][i].is_number()) {
                            r.issue("$.weights.values[" + std::to_string(i) + "]", "expected a number");
                        } else {
                            cfg.weights.values.push_back(w["values"][i].get<double>());
                        }
                    }
                    if (regions_ok && !regions.empty() && cfg.weights.values.size() == w["values"].size()) {
                        try {
                            validate_weighted_regions(regions, cfg.weights.values);
                        } catch (const Error& e) {
                            r.issue("$.weights.values", e.what());
                        }
                    }
                }
            }
            if (cfg.weights.mode == WeightMode::suggested) {
                if (auto v = r.uint(w, "order", "$.weights")) {
                    cfg.weights.order = *v;
                    if (support && *v >= support->bin_count()) {
                        r.issue("$.weights.order", "must be below the support bin count");
                    }
                }
            }
        }
    }

    // mode + regularization
    if (auto m = r.string(doc, "mode", "$")) {
        if (*m == "unregularized") {
            cfg.mode = RunMode::unregularized;
        } else if (*m == "regularized") {
            cfg.mode = RunMode::regularized;
        } else {
            r.issue("$.mode", "expected \"unregularized\" or \"regularized\"");
        }
    }
    if (doc.contains("regularization")) {
        const json& reg = doc["regularization"];
        if (cfg.mode != RunMode::regularized) {
            r.issue("$.regularization", "only allowed with mode \"regularized\"");
        } else if (r.object(reg, "$.regularization", {"mu", "tau"})) {
            const auto mu = r.number(reg, "mu", "$.regularization");
            const auto tau = r.number(reg, "tau", "$.regularization");
            if (!reg.contains("mu")) {
                r.issue("$.regularization.mu", "required");
            }
            if (!reg.contains("tau")) {
                r.issue("$.regularization.tau", "required");
            }
            if (mu && tau) {
                try {
                    cfg.regularization = RegularizationParams::make(*mu, *tau);
                } catch (const Error& e) {
                    r.issue(*mu > 0.0 ? "$.regularization.tau" : "$.regularization.mu", e.what());
                }
            }
        }
    } else if (cfg.mode == RunMode::regularized) {
        r.issue("$.regularization", "required with mode \"regularized\"");
    }

    // synthesis
    if (doc.contains("synthesis")) {
        const json& s = doc["synthesis"];
        if (r.object(s, "$.synthesis", {"seed", "rms", "noise"})) {
            if (auto v = r.uint(s, "seed", "$.synthesis")) {
                cfg.synthesis.seed = *v;
            }
            if (auto v = r.number(s, "rms", "$.synthesis")) {
                cfg.synthesis.rms = *v;
                if (!(*v > 0.0)) {
                    r.issue("$.synthesis.rms", "must be positive");
                }
            }
            if (s.contains("noise")) {
                NoiseSpec noise;
                parse_noise(r, s["noise"], "$.synthesis.noise", noise);
                cfg.synthesis.noise = noise;
            }
        }
    }

    // run
    if (doc.contains("run")) {
        const json& run = doc["run"];
        if (r.object(run, "$.run", {"max_iters", "residual_tol", "record_every"})) {
            if (auto v = r.uint(run, "max_iters", "$.run")) {
                cfg.max_iters = *v;
                if (*v < 1) {
                    r.issue("$.run.max_iters", "must be at least 1");
                }
            }
            if (auto v = r.number(run, "residual_tol", "$.run")) {
                cfg.residual_tol = *v;
                if (!(*v >= 0.0)) {
                    r.issue("$.run.residual_tol", "must be non-negative");
                }
            }
            if (auto v = r.uint(run, "record_every", "$.run")) {
                cfg.record_every = *v;
                if (*v < 1) {
                    r.issue("$.run.record_every", "must be at least 1");
                }
            }
        }
    }

    // eigen
    if (doc.contains("eigen")) {
        const json& e = doc["eigen"];
        if (r.object(e, "$.eigen", {"count", "tol", "order"})) {
            if (auto v = r.uint(e, "count", "$.eigen")) {
                cfg.eigen.count = *v;
            }
            if (auto v = r.number(e, "tol", "$.eigen")) {
                cfg.eigen.tol = *v;
                if (!(*v > 0.0)) {
                    r.issue("$.eigen.tol", "must be positive");
                }
            }
            if (auto v = r.uint(e, "order", "$.eigen")) {
                cfg.eigen.order = *v;
            }
        }
    }
    if (!doc.contains("eigen") && support) {
        cfg.eigen.count = std::min(cfg.eigen.count, support->bin_count());
    }
    if (cfg.eigen.count < 1) {
        r.issue("$.eigen.count", "must be at least 1");
    } else if (support && cfg.eigen.count > support->bin_count()) {
        r.issue("$.eigen.count", "exceeds the support bin count " + std::to_string(support->bin_count()));
    }
    if (cfg.eigen.order >= cfg.eigen.count) {
        r.issue("$.eigen.order", "must be below eigen.count");
    }

    // output
    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (r.object(o, "$.output", {"directory", "pgm"})) {
            if (auto v = r.string(o, "directory", "$.output")) {
                cfg.output.directory = *v;
            }
            if (auto v = r.boolean(o, "pgm", "$.output")) {
                cfg.output.pgm = *v;
            }
        }
    }
    if (cfg.output.pgm && cfg.grid.size() != 2) {
        r.issue("$.output.pgm", "PGM export needs a 2-D grid");
    }

    if (!r.issues.empty()) {
        throw ConfigError(std::move(r.issues));
    }
    return cfg;
}

std::string to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["grid"] = cfg.grid;
    doc["support"] = {{"half_bandwidth", cfg.half_bandwidth}};
    json regions = json::array();
    for (const RectSpec& r : cfg.regions) {
        regions.push_back({{"corner", r.corner}, {"extent", r.extent}});
    }
    doc["regions"] = regions;
    switch (cfg.weights.mode) {
        case WeightMode::uniform:
            doc["weights"] = {{"mode", "uniform"}};
            break;
        case WeightMode::explicit_values:
            doc["weights"] = {{"mode", "explicit"}, {"values", cfg.weights.values}};
            break;
        case WeightMode::suggested:
            doc["weights"] = {{"mode", "suggested"}, {"order", cfg.weights.order}};
            break;
    }
    doc["mode"] = to_string(cfg.mode);
    if (cfg.regularization) {
        doc["regularization"] = {{"mu", cfg.regularization->mu}, {"tau", cfg.regularization->tau}};
    }
    json synth = {{"seed", cfg.synthesis.seed}, {"rms", cfg.synthesis.rms}};
    if (cfg.synthesis.noise) {
        const NoiseSpec& n = *cfg.synthesis.noise;
        synth["noise"] = {{"snr_db", n.snr_db},
                          {"mode", n.params.mode == NoiseMode::spectral ? "spectral" : "bumps"},
                          {"bumps", n.params.bump_count},
                          {"width_min", n.params.width_min},
                          {"width_max", n.params.width_max},
                          {"amplitude", n.params.amplitude}};
    }
    doc["synthesis"] = synth;
    doc["run"] = {{"max_iters", cfg.max_iters}, {"residual_tol", cfg.residual_tol}, {"record_every", cfg.record_every}};
    doc["eigen"] = {{"count", cfg.eigen.count}, {"tol", cfg.eigen.tol}, {"order", cfg.eigen.order}};
    doc["output"] = {{"directory", cfg.output.directory}, {"pgm", cfg.output.pgm}};
    return doc.dump(2) + "\n";
}

}  // namespace ndextrap
