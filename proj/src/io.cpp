#include "zbar/io.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace zbar {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("path", "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

YAML::Node parse_root(const std::string& text) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ValidationError("yaml", e.what());
    }
    if (!root.IsMap()) throw ValidationError("yaml", "top level must be a mapping");
    return root;
}

template <class T>
T field(const YAML::Node& node, const std::string& key, const std::string& path) {
    const YAML::Node v = node[key];
    if (!v) throw ValidationError(path, "missing");
    try {
        return v.as<T>();
    } catch (const YAML::Exception&) {
        throw ValidationError(path, "has the wrong type");
    }
}

template <class T>
T field(const YAML::Node& node, const std::string& key) {
    return field<T>(node, key, key);
}

std::map<std::int64_t, double> int_map(const YAML::Node& node, const std::string& name) {
    std::map<std::int64_t, double> out;
    if (!node || node.IsNull()) return out;
    if (!node.IsMap()) throw ValidationError(name, "must be a mapping of integer keys to numbers");
    for (const auto& kv : node) {
        std::int64_t k;
        double v;
        try {
            k = kv.first.as<std::int64_t>();
        } catch (const YAML::Exception&) {
            throw ValidationError(name, "key '" + kv.first.Scalar() + "' is not an integer");
        }
        try {
            v = kv.second.as<double>();
        } catch (const YAML::Exception&) {
            throw ValidationError(name + "." + std::to_string(k), "is not a number");
        }
        if (!out.emplace(k, v).second) throw ValidationError(name + "." + std::to_string(k), "duplicate key");
    }
    return out;
}

}  // namespace

TransitionProfile parse_profile(const std::string& text) {
    const YAML::Node root = parse_root(text);
    const auto lo = field<std::int64_t>(root, "window_lo");
    const auto hi = field<std::int64_t>(root, "window_hi");
    const auto tm = field<double>(root, "tail_minus");
    const auto tp = field<double>(root, "tail_plus");
    return {lo, hi, int_map(root["table"], "table"), tm, tp};
}

MeasureZbar parse_measure(const std::string& text) {
    const YAML::Node root = parse_root(text);
    const auto am = field<double>(root, "alpha_minus");
    const auto ap = field<double>(root, "alpha_plus");
    return {am, ap, int_map(root["central"], "central")};
}

TiltSchedule parse_schedule(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<TiltSegment> segs;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        if (line.rfind("from", 0) == 0) continue;
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
            throw ValidationError("schedule.line" + std::to_string(lineno), "expected from,to,x");
        try {
            segs.push_back({std::stoll(a), std::stoll(b), std::stod(c)});
        } catch (const std::exception&) {
            throw ValidationError("schedule.line" + std::to_string(lineno), "unparsable number");
        }
    }
    return TiltSchedule(std::move(segs));
}

TransitionProfile load_profile(const std::string& path) { return parse_profile(slurp(path)); }
MeasureZbar load_measure(const std::string& path) { return parse_measure(slurp(path)); }
TiltSchedule load_schedule(const std::string& path) { return parse_schedule(slurp(path)); }

}  // namespace zbar
