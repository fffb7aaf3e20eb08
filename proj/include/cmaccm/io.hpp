#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cmaccm/channel.hpp"
#include "cmaccm/coding_sim.hpp"
#include "cmaccm/dm_bounds.hpp"
#include "cmaccm/region.hpp"
#include "cmaccm/version.hpp"

namespace cmaccm {

using nlohmann::json;

// ---------------------------------------------------------------------------
// helpers

inline std::string format_sig9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline std::string iso8601_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// channel spec file

inline DmChannel channel_from_json(const json& j) {
    for (const char* key : {"x1_size", "x2_size", "y1_size", "y2_size", "p_y1y2_given_x1x2"})
        if (!j.contains(key))
            throw ValidationError(std::string("channel spec: missing key '") + key + "'");
    const std::size_t nx1 = j.at("x1_size").get<std::size_t>();
    const std::size_t nx2 = j.at("x2_size").get<std::size_t>();
    const std::size_t ny1 = j.at("y1_size").get<std::size_t>();
    const std::size_t ny2 = j.at("y2_size").get<std::size_t>();
    const json& law = j.at("p_y1y2_given_x1x2");
    if (!law.is_array() || law.size() != nx1)
        throw ValidationError("channel spec: p_y1y2_given_x1x2 must have x1_size outer entries");
    std::vector<double> flat;
    flat.reserve(nx1 * nx2 * ny1 * ny2);
    for (std::size_t x1 = 0; x1 < nx1; ++x1) {
        const json& a = law.at(x1);
        if (!a.is_array() || a.size() != nx2)
            throw ValidationError("channel spec: bad shape at [x1=" + std::to_string(x1) + "]");
        for (std::size_t x2 = 0; x2 < nx2; ++x2) {
            const json& b = a.at(x2);
            if (!b.is_array() || b.size() != ny1)
                throw ValidationError("channel spec: bad shape at (x1=" + std::to_string(x1) +
                                      ", x2=" + std::to_string(x2) + ")");
            for (std::size_t y1 = 0; y1 < ny1; ++y1) {
                const json& c = b.at(y1);
                if (!c.is_array() || c.size() != ny2)
                    throw ValidationError("channel spec: bad shape at (x1=" + std::to_string(x1) +
                                          ", x2=" + std::to_string(x2) + ")");
                for (std::size_t y2 = 0; y2 < ny2; ++y2) flat.push_back(c.at(y2).get<double>());
            }
        }
    }
    return DmChannel(nx1, nx2, ny1, ny2, std::move(flat));
}

inline DmChannel load_channel_spec(const std::string& path) {
    return channel_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------
// inner auxiliary law file (for the simulator)

inline InnerAuxLaw inner_law_from_json(const json& j) {
    for (const char* key : {"p_u", "p_v1_given_u", "p_x1_given_v1", "p_x2_given_u"})
        if (!j.contains(key)) throw ValidationError(std::string("law file: missing key '") + key + "'");
    auto pmf = [](const json& a, const std::string& what) {
        if (!a.is_array() || a.empty()) throw ValidationError("law file: " + what + " must be an array");
        return Pmf(a.get<std::vector<double>>());
    };
    auto cond = [&](const json& a, const std::string& what) {
        if (!a.is_array() || a.empty())
            throw ValidationError("law file: " + what + " must be an array of rows");
        std::vector<Pmf> rows;
        for (const auto& r : a) rows.push_back(pmf(r, what + " row"));
        return ConditionalPmf(std::move(rows));
    };
    InnerAuxLaw law{pmf(j.at("p_u"), "p_u"), cond(j.at("p_v1_given_u"), "p_v1_given_u"),
                    cond(j.at("p_x1_given_v1"), "p_x1_given_v1"),
                    cond(j.at("p_x2_given_u"), "p_x2_given_u")};
    law.validate();
    return law;
}

inline InnerAuxLaw load_inner_law(const std::string& path) {
    return inner_law_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------
// sim config file (keys: n, m0, m1, m2, L or "auto", eps_typ, trials, seed)

struct SimConfigFile {
    SimConfig cfg;
    bool auto_bin = false;
};

inline SimConfigFile sim_config_from_json(const json& j) {
    SimConfigFile out;
    for (const char* key : {"n", "m0", "m1", "m2", "L", "eps_typ", "trials", "seed"})
        if (!j.contains(key))
            throw ValidationError(std::string("sim config: missing key '") + key + "'");
    out.cfg.n = j.at("n").get<std::size_t>();
    out.cfg.m0 = j.at("m0").get<std::size_t>();
    out.cfg.m1 = j.at("m1").get<std::size_t>();
    out.cfg.m2 = j.at("m2").get<std::size_t>();
    if (j.at("L").is_string()) {
        if (j.at("L").get<std::string>() != "auto")
            throw ValidationError("sim config: L must be a positive integer or \"auto\"");
        out.auto_bin = true;
        out.cfg.bin_size = 1;
    } else {
        out.cfg.bin_size = j.at("L").get<std::size_t>();
    }
    out.cfg.eps_typ = j.at("eps_typ").get<double>();
    out.cfg.trials = j.at("trials").get<std::size_t>();
    out.cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("enum_budget")) out.cfg.enum_budget = j.at("enum_budget").get<std::uint64_t>();
    if (j.contains("reject_cap")) out.cfg.reject_cap = j.at("reject_cap").get<std::size_t>();
    out.cfg.validate();
    return out;
}

inline SimConfigFile load_sim_config(const std::string& path) {
    return sim_config_from_json(load_json_file(path));
}

// ---------------------------------------------------------------------------
// region files: CSV with '#' meta header, and a JSON variant

struct RegionWriteOptions {
    bool timestamp = true;
};

inline std::string region_to_csv(const RegionCloud& cloud, const RegionWriteOptions& opts = {}) {
    std::ostringstream os;
    os << "# cmaccm-region v" << kVersion << "\n";
    os << "# provenance: " << cloud.meta.provenance << "\n";
    os << "# variant: " << (cloud.meta.closed ? "closure" : "raw") << "\n";
    if (!cloud.meta.note.empty()) os << "# note: " << cloud.meta.note << "\n";
    os << "# config: " << cloud.meta.config << "\n";
    os << "# seed: " << (cloud.meta.seed ? std::to_string(*cloud.meta.seed) : "none") << "\n";
    os << "# points: " << cloud.points.size() << "\n";
    if (opts.timestamp) os << "# generated: " << iso8601_now() << "\n";
    os << "R0,R1,R2\n";
    for (const auto& p : cloud.points)
        os << format_sig9(p.r0) << ',' << format_sig9(p.r1) << ',' << format_sig9(p.r2) << "\n";
    return os.str();
}

inline json region_to_json(const RegionCloud& cloud, const RegionWriteOptions& opts = {}) {
    json meta;
    meta["provenance"] = cloud.meta.provenance;
    meta["variant"] = cloud.meta.closed ? "closure" : "raw";
    if (!cloud.meta.note.empty()) meta["note"] = cloud.meta.note;
    meta["config"] = cloud.meta.config;
    if (cloud.meta.seed) meta["seed"] = *cloud.meta.seed;
    meta["points_count"] = cloud.points.size();
    if (opts.timestamp) meta["generated"] = iso8601_now();
    json pts = json::array();
    for (const auto& p : cloud.points) pts.push_back({p.r0, p.r1, p.r2});
    json j;
    j["format"] = "cmaccm-region";
    j["version"] = kVersion;
    j["meta"] = meta;
    j["points"] = pts;
    return j;
}

inline RegionCloud region_from_csv_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    RegionCloud cloud;
    std::string line;
    bool magic_seen = false, header_seen = false;
    std::optional<std::size_t> declared_points;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.erase(0, 1);
            if (body.rfind("cmaccm-region", 0) == 0) {
                magic_seen = true;
                continue;
            }
            const auto colon = body.find(':');
            if (colon == std::string::npos) continue;
            std::string key = body.substr(0, colon);
            std::string value = body.substr(colon + 1);
            if (!value.empty() && value.front() == ' ') value.erase(0, 1);
            if (key == "provenance") cloud.meta.provenance = value;
            else if (key == "variant") cloud.meta.closed = (value == "closure");
            else if (key == "note") cloud.meta.note = value;
            else if (key == "config") cloud.meta.config = value;
            else if (key == "seed" && value != "none") cloud.meta.seed = std::stoull(value);
            else if (key == "points") declared_points = std::stoull(value);
            continue;
        }
        if (!header_seen) {
            if (line != "R0,R1,R2")
                throw ValidationError("region file " + origin + ": expected header row R0,R1,R2, got '" +
                                      line + "'");
            header_seen = true;
            continue;
        }
        RateTuple p;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p.r0, &p.r1, &p.r2) != 3)
            throw ValidationError("region file " + origin + ": malformed point row '" + line + "'");
        if (p.r0 < 0.0 || p.r1 < 0.0 || p.r2 < 0.0)
            throw ValidationError("region file " + origin + ": negative rate component");
        cloud.points.push_back(p);
    }
    if (!magic_seen || !header_seen)
        throw ValidationError("region file " + origin + ": missing cmaccm-region magic or header row");
    if (declared_points && *declared_points != cloud.points.size())
        throw ValidationError("region file " + origin + ": declared point count " +
                              std::to_string(*declared_points) + " != actual " +
                              std::to_string(cloud.points.size()));
    return cloud;
}

inline RegionCloud region_from_json(const json& j, const std::string& origin) {
    if (!j.contains("format") || j.at("format") != "cmaccm-region")
        throw ValidationError("region file " + origin + ": not a cmaccm-region JSON document");
    RegionCloud cloud;
    const json& meta = j.at("meta");
    cloud.meta.provenance = meta.value("provenance", "");
    cloud.meta.closed = meta.value("variant", "raw") == std::string("closure");
    cloud.meta.note = meta.value("note", "");
    cloud.meta.config = meta.value("config", "");
    if (meta.contains("seed")) cloud.meta.seed = meta.at("seed").get<std::uint64_t>();
    for (const auto& row : j.at("points")) {
        if (!row.is_array() || row.size() != 3)
            throw ValidationError("region file " + origin + ": bad point row");
        RateTuple p{row.at(0).get<double>(), row.at(1).get<double>(), row.at(2).get<double>()};
        if (p.r0 < 0.0 || p.r1 < 0.0 || p.r2 < 0.0)
            throw ValidationError("region file " + origin + ": negative rate component");
        cloud.points.push_back(p);
    }
    if (meta.contains("points_count") &&
        meta.at("points_count").get<std::size_t>() != cloud.points.size())
        throw ValidationError("region file " + origin + ": declared point count mismatch");
    return cloud;
}

inline RegionCloud read_region_file(const std::string& path) {
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".json") return region_from_json(load_json_file(path), path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open region file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return region_from_csv_text(buf.str(), path);
}

inline void write_region_csv(const std::string& path, const RegionCloud& cloud,
                             const RegionWriteOptions& opts = {}) {
    write_text_file(path, region_to_csv(cloud, opts));
}

inline void write_region_json(const std::string& path, const RegionCloud& cloud,
                              const RegionWriteOptions& opts = {}) {
    write_text_file(path, region_to_json(cloud, opts).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// reports

inline json comparison_report_to_json(const ComparisonReport& rep, const std::string& a_name,
                                      const std::string& b_name) {
    json j;
    j["tol"] = rep.tol;
    j["a"] = {{"file", a_name},
              {"max", {{"r0", rep.a_max[0]}, {"r1", rep.a_max[1]}, {"r2", rep.a_max[2]}}}};
    j["b"] = {{"file", b_name},
              {"max", {{"r0", rep.b_max[0]}, {"r1", rep.b_max[1]}, {"r2", rep.b_max[2]}}}};
    j["a_subset_of_b"] = rep.a_subset_of_b;
    j["b_subset_of_a"] = rep.b_subset_of_a;
    j["verdict"] = rep.verdict();
    if (rep.witness_a_not_in_b) {
        const auto& w = *rep.witness_a_not_in_b;
        j["witness_a_not_in_b"] = {w.r0, w.r1, w.r2};
    } else {
        j["witness_a_not_in_b"] = nullptr;
    }
    if (rep.witness_b_not_in_a) {
        const auto& w = *rep.witness_b_not_in_a;
        j["witness_b_not_in_a"] = {w.r0, w.r1, w.r2};
    } else {
        j["witness_b_not_in_a"] = nullptr;
    }
    return j;
}

inline json less_noisy_verdict_to_json(const LessNoisyVerdict& v) {
    json j;
    j["status"] = v.status == LessNoisyVerdict::Status::CounterexampleFound
                      ? "counterexample_found"
                      : "no_counterexample_at_resolution";
    if (v.witness) {
        j["witness"] = {{"p_v2_x2", v.witness->p_v2_x2},
                        {"i_v2_y1", v.witness->i_v2_y1},
                        {"i_v2_y2", v.witness->i_v2_y2}};
    } else {
        j["witness"] = nullptr;
    }
    j["resolution"] = {
        {"v2_size", v.v2_size},
        {"grid_k", v.grid_k},
        {"laws_checked", v.laws_checked},
        {"random_samples", v.random_samples},
        {"p_x1", v.p_x1},
        {"x1_assumption", "X1 drawn i.i.d. from p_x1, independent of (V2,X2)"},
    };
    if (v.seed) j["resolution"]["seed"] = *v.seed;
    return j;
}

inline json sim_report_to_json(const SimReport& rep, const SimConfig& cfg,
                               const std::string& config_hash) {
    json j;
    j["pe_estimate"] = rep.pe_estimate;
    j["pe_ci"] = rep.pe_ci;
    j["equivocation_per_symbol"] = rep.equivocation_per_symbol;
    j["leakage"] = rep.leakage;
    j["r1"] = rep.r1;
    j["method"] = rep.method;
    j["config"] = {{"n", cfg.n},     {"m0", cfg.m0},           {"m1", cfg.m1},
                   {"m2", cfg.m2},   {"L", cfg.bin_size},      {"eps_typ", cfg.eps_typ},
                   {"trials", cfg.trials}, {"seed", cfg.seed}};
    j["config_hash"] = config_hash;
    return j;
}

// Appends one row per run; creates the file with a header when absent.
inline void append_sim_log_csv(const std::string& path, const std::string& config_hash,
                               const SimReport& rep) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error("cannot open sim log for append: " + path);
    if (fresh) out << "config_hash,pe,ci,equivocation,leakage,method\n";
    out << config_hash << ',' << format_sig9(rep.pe_estimate) << ',' << format_sig9(rep.pe_ci)
        << ',' << format_sig9(rep.equivocation_per_symbol) << ',' << format_sig9(rep.leakage)
        << ',' << rep.method << "\n";
}

// ---------------------------------------------------------------------------
// codebook serialization (reproducibility checks, debugging)

inline json codebook_to_json(const Codebook& cb) {
    auto seqs = [](const std::vector<Seq>& words) {
        json arr = json::array();
        for (const auto& w : words) arr.push_back(std::vector<int>(w.begin(), w.end()));
        return arr;
    };
    json j;
    j["n"] = cb.n;
    j["m0"] = cb.m0;
    j["m1"] = cb.m1;
    j["m2"] = cb.m2;
    j["L"] = cb.bin_size;
    j["seed"] = cb.seed;
    j["u_words"] = seqs(cb.u_words);
    j["v1_words"] = seqs(cb.v1_words);
    j["x2_words"] = seqs(cb.x2_words);
    return j;
}

}  // namespace cmaccm
