#include "vnrf/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vnrf {

using nlohmann::json;

std::string to_string(SamplingKind kind) {
    return kind == SamplingKind::Exact ? "exact" : "mcmc";
}

namespace {

SamplingKind parse_sampling_kind(const std::string& text) {
    if (text == "mcmc") return SamplingKind::Mcmc;
    if (text == "exact") return SamplingKind::Exact;
    throw std::invalid_argument("unknown method '" + text + "' (expected mcmc or exact)");
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "beta",    "epsilon", "boundary", "size",   "replicas", "samples_per_replica", "seed",
        "method",  "burn_in", "thin",     "p_star", "beta_c",   "max_path_length",     "output_dir"};
    return keys;
}

template <class T>
std::vector<T> read_list(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
}

} // namespace

void SweepConfig::validate() const {
    if (betas.empty()) throw std::invalid_argument("config: beta grid is empty");
    if (epsilons.empty()) throw std::invalid_argument("config: epsilon grid is empty");
    if (boundaries.empty()) throw std::invalid_argument("config: boundary list is empty");
    if (sizes.empty()) throw std::invalid_argument("config: size list is empty");
    for (double b : betas)
        if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("config: beta values must be finite and >= 0");
    for (double e : epsilons)
        if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("config: epsilon values must lie in (0, 1)");
    for (int s : sizes)
        if (s < 1) throw std::invalid_argument("config: window sizes must be positive");
    if (replicas < 1) throw std::invalid_argument("config: replicas must be >= 1");
    if (samples_per_replica < 1) throw std::invalid_argument("config: samples_per_replica must be >= 1");
    if (max_path_length < 0) throw std::invalid_argument("config: max_path_length must be >= 0");
    thresholds.validate();
    if (method == SamplingKind::Exact) {
        for (int s : sizes)
            if (static_cast<std::size_t>(s) * static_cast<std::size_t>(s) > kEnumerationCap)
                throw std::invalid_argument("config: exact sampling needs windows of at most " +
                                            std::to_string(kEnumerationCap) + " sites, size " +
                                            std::to_string(s) + " is too large");
    }
    if (max_path_length > 0) {
        for (int s : sizes)
            if (max_path_length > (s - 1) / 2 - 1)
                throw std::invalid_argument("config: paths of length " + std::to_string(max_path_length) +
                                            " from the center reach the edge of a " + std::to_string(s) +
                                            "x" + std::to_string(s) + " window");
        for (BoundaryCondition bc : boundaries)
            if (bc != BoundaryCondition::AllPlus)
                throw std::invalid_argument("config: path statistics need the plus boundary; set max_path_length to 0");
    }
}

SweepConfig parse_sweep_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known_keys().count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
    for (const char* required : {"beta", "epsilon", "size"})
        if (!j.contains(required)) throw std::invalid_argument(std::string("config: missing key '") + required + "'");

    SweepConfig c;
    try {
        c.betas = read_list<double>(j, "beta");
        c.epsilons = read_list<double>(j, "epsilon");
        c.sizes = read_list<int>(j, "size");
        if (j.contains("boundary")) {
            c.boundaries.clear();
            for (const auto& name : read_list<std::string>(j, "boundary"))
                c.boundaries.push_back(parse_boundary_condition(name));
        }
        if (j.contains("replicas")) c.replicas = j.at("replicas").get<int>();
        if (j.contains("samples_per_replica")) c.samples_per_replica = j.at("samples_per_replica").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("method")) c.method = parse_sampling_kind(j.at("method").get<std::string>());
        if (j.contains("burn_in")) c.burn_in = j.at("burn_in").get<std::uint64_t>();
        if (j.contains("thin")) c.thin = j.at("thin").get<std::uint64_t>();
        if (j.contains("p_star")) c.thresholds.p_star = j.at("p_star").get<double>();
        if (j.contains("beta_c")) c.thresholds.beta_c = j.at("beta_c").get<double>();
        if (j.contains("max_path_length")) c.max_path_length = j.at("max_path_length").get<int>();
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config file " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_sweep_config(ss.str());
}

std::string canonical_config_json(const SweepConfig& c) {
    json j;
    json bc = json::array();
    for (BoundaryCondition v : c.boundaries) bc.push_back(to_string(v));
    j["beta"] = c.betas;
    j["epsilon"] = c.epsilons;
    j["boundary"] = bc;
    j["size"] = c.sizes;
    j["replicas"] = c.replicas;
    j["samples_per_replica"] = c.samples_per_replica;
    j["seed"] = c.seed;
    j["method"] = to_string(c.method);
    j["burn_in"] = c.burn_in;
    j["thin"] = c.thin;
    j["p_star"] = c.thresholds.p_star;
    j["beta_c"] = c.thresholds.beta_c;
    j["max_path_length"] = c.max_path_length;
    return j.dump();
}

} // namespace vnrf
