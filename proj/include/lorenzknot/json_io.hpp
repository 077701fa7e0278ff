#pragma once

#include <map>
#include <string>

#include "lorenzknot/curve.hpp"
#include "lorenzknot/equilibria.hpp"
#include "lorenzknot/tpoint.hpp"

namespace lorenzknot {

/// Flat key=value run configuration with defaults; the file representation
/// round-trips losslessly and hashes stably for artifact directory names.
class RunConfig {
  public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    const std::map<std::string, std::string>& entries() const { return kv_; }

    /// Sorted key=value lines.
    std::string serialize() const;
    static RunConfig parse(const std::string& text);

    /// FNV-1a of the serialized form, as 16 hex digits.
    std::string content_hash() const;

  private:
    std::map<std::string, std::string> kv_;
};

std::string termination_string(const Trajectory& t);
std::string termination_string(const ManifoldBranch& b);

/// Trajectory JSON: parameter/tolerance header keys plus a samples array of
/// {"t","x","y","z"} records.
std::string trajectory_json(const Params& p, double tol, const Trajectory& t,
                            const RunConfig* config = nullptr);

/// Trajectory JSON plus {"source","stability","sign","termination"}.
std::string branch_json(const Params& p, double tol, const ManifoldBranch& b,
                        const RunConfig* config = nullptr);

std::string tpoint_json(const TPoint& tp, const RunConfig* config = nullptr);

/// {"points":[[x,y,z],...],"markers":{...},"closure":[i0,i1]}.
std::string curve_json(const ClosedCurve& c, const RunConfig* config = nullptr);

}  // namespace lorenzknot
