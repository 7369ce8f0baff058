#include "flrwb/sim_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace flrwb {

void SimConfig::validate() const {
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (scale_factor != "desitter" && scale_factor != "upper" && scale_factor != "coupled")
        throw ConfigError("scale_factor must be desitter, upper, or coupled");
    if (grid.n < 8) throw ConfigError("grid.n must be >= 8");
    if (!(grid.extent > 0.0)) throw ConfigError("grid.extent must be positive");
    if (std::sqrt(1.0 + 3.0 * grid.extent * grid.extent) > 700.0)
        throw ConfigError("grid.extent too large for the exponential norm weight");
    if (sphere.polar_order < 1 || sphere.azimuth_order < 1)
        throw ConfigError("sphere orders must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    if (picard_iters < 1) throw ConfigError("picard_iters must be >= 1");
    if (initial.kind != "gaussian" && initial.kind != "shell")
        throw ConfigError("initial.kind must be gaussian or shell");
    if (initial.epsilon < 0.0) throw ConfigError("initial.epsilon must be nonnegative");
    if (initial.kind == "shell" && !(initial.width > 0.0))
        throw ConfigError("initial.width must be positive");
    for (const auto& s : norms)
        if (s.k < 0 || s.N < 0) throw ConfigError("norm orders must be nonnegative");
    if (!(output.interval > 0.0)) throw ConfigError("output.interval must be positive");
}

namespace {

using nlohmann::json;

json to_json(const SimConfig& c) {
    json j;
    j["lambda"] = c.lambda;
    j["scale_factor"] = c.scale_factor;
    j["grid"] = {{"extent", c.grid.extent}, {"n", c.grid.n}};
    j["sphere"] = {{"polar_order", c.sphere.polar_order},
                   {"azimuth_order", c.sphere.azimuth_order}};
    j["dt"] = c.dt;
    j["T"] = c.T;
    j["picard_iters"] = c.picard_iters;
    j["initial"] = {{"kind", c.initial.kind},
                    {"epsilon", c.initial.epsilon},
                    {"r0", c.initial.r0},
                    {"width", c.initial.width}};
    json norms = json::array();
    for (const auto& s : c.norms) norms.push_back({{"k", s.k}, {"N", s.N}});
    j["norms"] = norms;
    j["output"] = {{"path", c.output.path}, {"interval", c.output.interval}};
    j["seed"] = c.seed;
    return j;
}

SimConfig from_json(const json& j) {
    SimConfig c;
    try {
        if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
        if (j.contains("scale_factor")) c.scale_factor = j.at("scale_factor").get<std::string>();
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("extent")) c.grid.extent = g.at("extent").get<double>();
            if (g.contains("n")) c.grid.n = g.at("n").get<int>();
        }
        if (j.contains("sphere")) {
            const auto& s = j.at("sphere");
            if (s.contains("polar_order")) c.sphere.polar_order = s.at("polar_order").get<int>();
            if (s.contains("azimuth_order"))
                c.sphere.azimuth_order = s.at("azimuth_order").get<int>();
        }
        if (j.contains("dt")) c.dt = j.at("dt").get<double>();
        if (j.contains("T")) c.T = j.at("T").get<double>();
        if (j.contains("picard_iters")) c.picard_iters = j.at("picard_iters").get<int>();
        if (j.contains("initial")) {
            const auto& s = j.at("initial");
            if (s.contains("kind")) c.initial.kind = s.at("kind").get<std::string>();
            if (s.contains("epsilon")) c.initial.epsilon = s.at("epsilon").get<double>();
            if (s.contains("r0")) c.initial.r0 = s.at("r0").get<double>();
            if (s.contains("width")) c.initial.width = s.at("width").get<double>();
        }
        if (j.contains("norms")) {
            c.norms.clear();
            for (const auto& s : j.at("norms"))
                c.norms.push_back({s.at("k").get<int>(), s.at("N").get<int>()});
        }
        if (j.contains("output")) {
            const auto& o = j.at("output");
            if (o.contains("path")) c.output.path = o.at("path").get<std::string>();
            if (o.contains("interval")) c.output.interval = o.at("interval").get<double>();
        }
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace

SimConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const SimConfig& config) { return to_json(config).dump(2); }

}  // namespace flrwb
