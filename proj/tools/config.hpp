#ifndef SUPERSHIFT_TOOLS_CONFIG_HPP
#define SUPERSHIFT_TOOLS_CONFIG_HPP

#include <filesystem>
#include <fstream>
#include <string>

#include "supershift/serialize.hpp"

namespace supershift::cli {

/// Anything wrong with flags or the config document; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Mode { Exact, Float64 };

/// Effective run configuration: documented defaults, deep-merged with the
/// config file, then overridden by command-line flags. The FNV hash of the
/// canonical dump is embedded in every report so outputs are traceable to
/// the exact inputs that produced them.
struct RunConfig {
    json effective;
    Mode mode = Mode::Exact;
    std::uint64_t seed = 1;
    std::filesystem::path outDir = "out";
    double cx = 1.0;
    std::string hash;

    std::string modeName() const { return mode == Mode::Exact ? "exact" : "float"; }
};

inline json defaultConfig() {
    return json{
        {"mode", "exact"},
        {"seed", 1},
        {"out", "out"},
        {"cx", 1.0},
        {"weights", {{"variant", "constant_one"}}},
        {"lemmas",
         {{"samples", 200},
          {"maxLambdaSupport", 6},
          {"maxD", 10},
          {"coeffHeight", 4},
          {"oracleMaxD", 7},
          {"iteratedK", 5},
          {"iteratedSamples", 40}}},
        {"criterion",
         {{"family",
           {{"kind", "constant"},
            {"lambda", json::array({json::array({1, "1", "1"})})},
            {"members", 12},
            {"stabilizeAt", 5},
            {"decay", "inverse_m"},
            {"perturbation", json::array({json::array({1, "1", "1"})})}}},
          {"kmax", 6},
          {"sampleCount", 20},
          {"combination",
           {{"enabled", false},
            {"lambda1", json::array({json::array({1, "1", "1"})})},
            {"lambda2", json::array({json::array({2, "1", "1"})})},
            {"pairs", 10}}}}},
        {"witness",
         {{"targets", json::array({json::array({json::array({1, "1", "1"})}),
                                   json::array({json::array({2, "1", "1"})}),
                                   json::array({json::array({3, "1", "1"})})})},
          {"eps", 0.01},
          {"kmax", 0},
          {"tol", 1e-4}}},
        {"isometry", {{"samples", 100}, {"maxSupport", 12}, {"coeffHeight", 8}}}};
}

inline RunConfig loadConfig(const std::string& configPath, const std::string& modeFlag,
                            std::optional<std::uint64_t> seedFlag,
                            const std::string& outFlag) {
    json effective = defaultConfig();
    if (!configPath.empty()) {
        std::ifstream in(configPath);
        if (!in) throw ConfigError("cannot open config file: " + configPath);
        json user;
        try {
            in >> user;
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!user.is_object()) throw ConfigError("config root must be a JSON object");
        effective.merge_patch(user);
    }
    if (!modeFlag.empty()) effective["mode"] = modeFlag;
    if (seedFlag) effective["seed"] = *seedFlag;
    if (!outFlag.empty()) effective["out"] = outFlag;

    RunConfig cfg;
    cfg.effective = effective;
    const std::string mode = effective.value("mode", "exact");
    if (mode == "exact") {
        cfg.mode = Mode::Exact;
    } else if (mode == "float" || mode == "float64") {
        cfg.mode = Mode::Float64;
    } else {
        throw ConfigError("mode must be 'exact' or 'float', got '" + mode + "'");
    }
    try {
        cfg.seed = effective.at("seed").get<std::uint64_t>();
        cfg.outDir = effective.at("out").get<std::string>();
        cfg.cx = effective.at("cx").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config field: ") + e.what());
    }
    if (cfg.cx < 1.0) throw ConfigError("cx must be >= 1");
    cfg.hash = hashHex(effective.dump());
    return cfg;
}

/// Report preamble shared by every output file.
inline json reportHeader(const RunConfig& cfg) {
    return json{{"config_hash", cfg.hash}, {"mode", cfg.modeName()}};
}

inline void writeFile(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

inline void writeReport(const RunConfig& cfg, const std::string& name, const json& body) {
    json out = body;
    out.update(reportHeader(cfg));
    writeFile(cfg.outDir / name, out.dump(2) + "\n");
}

}  // namespace supershift::cli

#endif  // SUPERSHIFT_TOOLS_CONFIG_HPP
