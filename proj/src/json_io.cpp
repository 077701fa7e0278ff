#include "lorenzknot/json_io.hpp"

#include <json.hpp>
#include <sstream>

#include "lorenzknot/version.hpp"

namespace lorenzknot {

using nlohmann::json;

std::string RunConfig::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : std::stod(it->second);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : std::stoi(it->second);
}

std::string RunConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + "=" + v + "\n";
    return out;
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=', first);
        if (eq == std::string::npos)
            throw DomainError("config: expected key=value, got '" + line + "'");
        cfg.kv_[line.substr(first, eq - first)] = line.substr(eq + 1);
    }
    return cfg;
}

std::string RunConfig::content_hash() const {
    uint64_t h = 1469598103934665603ull;
    for (const char ch : serialize()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

json config_block(const RunConfig* config) {
    json j = json::object();
    if (config) {
        for (const auto& [k, v] : config->entries()) j[k] = v;
    }
    return j;
}

void embed(json& j, const RunConfig* config) {
    j["config"] = config_block(config);
    j["tool"] = kToolVersion;
}

}  // namespace

std::string termination_string(const Trajectory& t) {
    switch (t.termination) {
        case Termination::reached_horizon: return "reached-horizon";
        case Termination::step_failure: return "step-failure";
        case Termination::hit_event:
            return "hit-event(" + std::to_string(t.terminal_event_id) + ")";
    }
    return "?";
}

std::string termination_string(const ManifoldBranch& b) {
    switch (b.termination) {
        case BranchTermination::hit_sphere: return "hit-sphere";
        case BranchTermination::reached_horizon: return "reached-horizon";
        case BranchTermination::step_failure: return "step-failure";
        case BranchTermination::converged_to_equilibrium: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "converged-to-equilibrium(%s, %.3e)",
                          to_string(b.converged_to), b.final_distance);
            return buf;
        }
    }
    return "?";
}

std::string trajectory_json(const Params& p, double tol, const Trajectory& t,
                            const RunConfig* config) {
    json j;
    j["rho"] = p.rho;
    j["sigma"] = p.sigma;
    j["beta"] = p.beta;
    j["tol"] = tol;
    j["direction"] = t.direction == Direction::forward ? "forward" : "backward";
    j["termination"] = termination_string(t);
    json samples = json::array();
    for (const auto& s : t.samples) {
        samples.push_back(json{{"t", s.t},
                               {"x", s.state.x()},
                               {"y", s.state.y()},
                               {"z", s.state.z()}});
    }
    j["samples"] = std::move(samples);
    if (config) embed(j, config);
    return j.dump(2) + "\n";
}

std::string branch_json(const Params& p, double tol, const ManifoldBranch& b,
                        const RunConfig* config) {
    json j = json::parse(trajectory_json(p, tol, b.polyline, nullptr));
    j["source"] = to_string(b.source);
    j["stability"] = b.stable ? "stable" : "unstable";
    j["sign"] = b.sign;
    j["termination"] = termination_string(b);
    if (config) embed(j, config);
    return j.dump(2) + "\n";
}

std::string tpoint_json(const TPoint& tp, const RunConfig* config) {
    json j;
    j["rho"] = tp.params.rho;
    j["sigma"] = tp.params.sigma;
    j["beta"] = tp.params.beta;
    j["residual"] = tp.residual;
    if (tp.knot_hint) j["knot"] = *tp.knot_hint;
    if (config) embed(j, config);
    return j.dump(2) + "\n";
}

std::string curve_json(const ClosedCurve& c, const RunConfig* config) {
    json j;
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(json::array({p.x(), p.y(), p.z()}));
    j["points"] = std::move(pts);
    j["markers"] = json::object();
    for (const auto& [name, idx] : c.markers) j["markers"][name] = idx;
    j["closure"] = json::array({c.closure_first, c.closure_last});
    if (config) embed(j, config);
    return j.dump() + "\n";
}

}  // namespace lorenzknot
