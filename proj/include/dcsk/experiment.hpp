// experiment.hpp - Experiment configs (flat key=value files), sweep
// orchestration, and the CSV artifacts the command-line front end emits.

#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcsk/montecarlo.hpp"

namespace dcsk {

inline constexpr const char* kToolVersion = "1.0.0";

// --- Small helpers ------------------------------------------------------------

// Shortest decimal form at 12 significant digits; the CSV round-trip
// contract.
inline std::string fmt_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct ConfigError : std::runtime_error {
    ConfigError(int line_arg, std::string field_arg, const std::string& message)
        : std::runtime_error("config error (line " + std::to_string(line_arg) + ", field '" +
                             field_arg + "'): " + message),
          line(line_arg),
          field(std::move(field_arg)) {}
    int line;
    std::string field;
};

inline SchemeId parse_scheme(const std::string& name, int line = 0) {
    if (name == "pnc1") return SchemeId::pnc1;
    if (name == "time_mux2") return SchemeId::time_mux2;
    if (name == "freq_mux3") return SchemeId::freq_mux3;
    if (name == "anc") return SchemeId::anc;
    throw ConfigError(line, "scheme",
                      "unknown scheme '" + name + "' (expected pnc1|time_mux2|freq_mux3|anc)");
}

// "a:b:step" in dB, inclusive of both ends (within half a step).
inline std::vector<double> parse_grid(const std::string& text, int line = 0) {
    double a = 0, b = 0, step = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &extra) != 3)
        throw ConfigError(line, "grid", "expected start:stop:step_db, got '" + text + "'");
    if (!(step > 0.0) || b < a)
        throw ConfigError(line, "grid", "need stop >= start and step > 0");
    std::vector<double> grid;
    for (double v = a; v <= b + 0.5 * step; v += step) grid.push_back(v);
    return grid;
}

// --- Experiment configuration --------------------------------------------------

enum class SpecialCase { none, user_a_low, user_b_low, all_awgn };

struct ExperimentConfig {
    Scenario scenario;
    std::vector<double> grid{0, 5, 10, 15, 20, 25};
    StoppingRule rule;
    std::uint64_t master_seed = 1;
    bool include_term_c = false;
    SpecialCase special_case = SpecialCase::none;
    std::string out;  // optional output path

    void validate() const {
        Scenario probe = scenario;
        probe.ebn0_db = grid.empty() ? 0.0 : grid.front();
        probe.validate();
        rule.validate();
        if (grid.empty()) throw std::invalid_argument("ExperimentConfig: empty grid");
    }
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(line, key, "expected a boolean, got '" + v + "'");
}

inline double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(line, key, "expected a number, got '" + v + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long u = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return u;
    } catch (const std::exception&) {
        throw ConfigError(line, key, "expected a non-negative integer, got '" + v + "'");
    }
}

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

}  // namespace detail

// Flat key=value format, `#` or `;` comments, one scenario per file.
inline ExperimentConfig parse_experiment_config(std::string_view text) {
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, line, "expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, key, "empty key");

        auto hop_field = [&](TwoRayLink& link, const std::string& sub) {
            if (sub == "avg_gain_1") link.avg_gain_1 = detail::parse_double(value, key, line_no);
            else if (sub == "avg_gain_2") link.avg_gain_2 = detail::parse_double(value, key, line_no);
            else if (sub == "delay") link.delay = static_cast<std::size_t>(detail::parse_u64(value, key, line_no));
            else if (sub == "fading") link.fading = detail::parse_bool(value, key, line_no);
            else throw ConfigError(line_no, key, "unknown hop field");
        };

        if (key == "scheme") cfg.scenario.scheme = parse_scheme(value, line_no);
        else if (key == "beta") cfg.scenario.beta = static_cast<std::size_t>(detail::parse_u64(value, key, line_no));
        else if (key == "ebn0_grid" || key == "grid") cfg.grid = parse_grid(value, line_no);
        else if (key == "master_seed") cfg.master_seed = detail::parse_u64(value, key, line_no);
        else if (key == "min_errors") cfg.rule.min_errors = detail::parse_u64(value, key, line_no);
        else if (key == "max_bits") cfg.rule.max_bits = detail::parse_u64(value, key, line_no);
        else if (key == "metric") {
            if (value == "end_to_end") cfg.scenario.metric = ErrorMetric::end_to_end;
            else if (value == "relay") cfg.scenario.metric = ErrorMetric::relay_network_bit;
            else throw ConfigError(line_no, key, "expected end_to_end|relay");
        }
        else if (key == "genie_remove_strong_isi") cfg.scenario.genie_remove_strong_isi = detail::parse_bool(value, key, line_no);
        else if (key == "coherent_superposition") cfg.scenario.coherent_superposition = detail::parse_bool(value, key, line_no);
        else if (key == "relay_detector") {
            if (value == "channel_aware") cfg.scenario.relay_detector = RelayDetector::channel_aware;
            else if (value == "fixed_threshold") cfg.scenario.relay_detector = RelayDetector::fixed_threshold;
            else throw ConfigError(line_no, key, "expected channel_aware|fixed_threshold");
        }
        else if (key == "relay_threshold_scale") cfg.scenario.relay_threshold_scale = detail::parse_double(value, key, line_no);
        else if (key == "anc_threshold_scale") cfg.scenario.anc_threshold_scale = detail::parse_double(value, key, line_no);
        else if (key == "include_term_c") cfg.include_term_c = detail::parse_bool(value, key, line_no);
        else if (key == "special_case") {
            if (value == "none") cfg.special_case = SpecialCase::none;
            else if (value == "user_a_low") cfg.special_case = SpecialCase::user_a_low;
            else if (value == "user_b_low") cfg.special_case = SpecialCase::user_b_low;
            else if (value == "all_awgn") cfg.special_case = SpecialCase::all_awgn;
            else throw ConfigError(line_no, key, "expected none|user_a_low|user_b_low|all_awgn");
        }
        else if (key == "out") cfg.out = value;
        else if (key.rfind("hop1_a.", 0) == 0) hop_field(cfg.scenario.hop1_a, key.substr(7));
        else if (key.rfind("hop1_b.", 0) == 0) hop_field(cfg.scenario.hop1_b, key.substr(7));
        else if (key.rfind("hop2_b.", 0) == 0) hop_field(cfg.scenario.hop2_b, key.substr(7));
        else throw ConfigError(line_no, key, "unknown key");
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(0, "<config>", e.what());
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream body;
    body << in.rdbuf();
    return parse_experiment_config(body.str());
}

// Canonical serialization of the effective config; hashed into the CSV
// provenance header so overrides are visible in the artifact.
inline std::string canonical_config_text(const ExperimentConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["scheme"] = to_string(cfg.scenario.scheme);
    kv["beta"] = std::to_string(cfg.scenario.beta);
    kv["master_seed"] = std::to_string(cfg.master_seed);
    kv["min_errors"] = std::to_string(cfg.rule.min_errors);
    kv["max_bits"] = std::to_string(cfg.rule.max_bits);
    kv["metric"] = cfg.scenario.metric == ErrorMetric::relay_network_bit ? "relay" : "end_to_end";
    kv["genie_remove_strong_isi"] = cfg.scenario.genie_remove_strong_isi ? "true" : "false";
    kv["coherent_superposition"] = cfg.scenario.coherent_superposition ? "true" : "false";
    kv["relay_detector"] =
        cfg.scenario.relay_detector == RelayDetector::channel_aware ? "channel_aware" : "fixed_threshold";
    kv["relay_threshold_scale"] = fmt_g12(cfg.scenario.relay_threshold_scale);
    kv["anc_threshold_scale"] = fmt_g12(cfg.scenario.anc_threshold_scale);
    kv["include_term_c"] = cfg.include_term_c ? "true" : "false";
    switch (cfg.special_case) {
        case SpecialCase::none: kv["special_case"] = "none"; break;
        case SpecialCase::user_a_low: kv["special_case"] = "user_a_low"; break;
        case SpecialCase::user_b_low: kv["special_case"] = "user_b_low"; break;
        case SpecialCase::all_awgn: kv["special_case"] = "all_awgn"; break;
    }
    auto hop = [&kv](const char* name, const TwoRayLink& l) {
        const std::string p(name);
        kv[p + ".avg_gain_1"] = fmt_g12(l.avg_gain_1);
        kv[p + ".avg_gain_2"] = fmt_g12(l.avg_gain_2);
        kv[p + ".delay"] = std::to_string(l.delay);
        kv[p + ".fading"] = l.fading ? "true" : "false";
    };
    hop("hop1_a", cfg.scenario.hop1_a);
    hop("hop1_b", cfg.scenario.hop1_b);
    hop("hop2_b", cfg.scenario.hop2_b);
    std::string grid;
    for (double g : cfg.grid) {
        if (!grid.empty()) grid += ",";
        grid += fmt_g12(g);
    }
    kv["ebn0_grid"] = grid;
    std::string text;
    for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
    return text;
}

inline std::string config_hash_hex(const ExperimentConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_config_text(cfg))));
    return buf;
}

// --- CSV artifacts --------------------------------------------------------------

namespace detail {

inline std::string csv_meta(const ExperimentConfig& cfg, const char* command) {
    std::string s;
    s += "# format=dcsk-csv-1\n";
    s += std::string("# tool=dcsk ") + kToolVersion + "\n";
    s += std::string("# command=") + command + "\n";
    s += "# config_hash=" + config_hash_hex(cfg) + "\n";
    s += "# master_seed=" + std::to_string(cfg.master_seed) + "\n";
    return s;
}

}  // namespace detail

inline MetricSeries run_simulation(const ExperimentConfig& cfg, unsigned workers = 0) {
    cfg.validate();
    return sweep(cfg.scenario, cfg.grid, cfg.rule, cfg.master_seed, workers, cfg.include_term_c);
}

inline std::string render_simulate_csv(const ExperimentConfig& cfg, const MetricSeries& series) {
    std::string s = detail::csv_meta(cfg, "simulate");
    s += "ebn0_db,scheme,ber_sim,ci95,bits,errors,ber_analytic,flagged\n";
    for (const auto& p : series.points) {
        s += fmt_g12(p.estimate.ebn0_db) + "," + to_string(series.scheme) + "," +
             fmt_g12(p.estimate.ber) + "," + fmt_g12(p.estimate.ci95) + "," +
             std::to_string(p.estimate.bits) + "," + std::to_string(p.estimate.errors) + "," +
             (p.ber_analytic ? fmt_g12(*p.ber_analytic) : std::string()) + "," +
             (p.estimate.flagged ? "1" : "0") + "\n";
    }
    return s;
}

struct AnalyzeRow {
    double ebn0_db;
    double ber_1a, ber_1b, ber_2b, ber_e2e;
    double throughput_s2, throughput_s3;
    double gamma_t, gamma_f;
};

// Pure closed-form table over the grid; the special-case flag swaps the
// AWGN-side links for the degenerate expression.
inline std::vector<AnalyzeRow> run_analysis(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::size_t beta = cfg.scenario.beta;
    std::vector<AnalyzeRow> rows;
    rows.reserve(cfg.grid.size());
    for (double db : cfg.grid) {
        const double ebn0 = db_to_linear(db);
        AnalyzeRow r{};
        r.ebn0_db = db;
        const double awgn = awgn_ber(ebn0, beta);
        switch (cfg.special_case) {
            case SpecialCase::none:
                r.ber_1a = link_analytic_ber(cfg.scenario.hop1_a, ebn0, beta, cfg.include_term_c);
                r.ber_1b = link_analytic_ber(cfg.scenario.hop1_b, ebn0, beta, cfg.include_term_c);
                r.ber_2b = link_analytic_ber(cfg.scenario.hop2_b, ebn0, beta, cfg.include_term_c);
                break;
            case SpecialCase::user_a_low:
                r.ber_1a = awgn;
                r.ber_1b = link_analytic_ber(cfg.scenario.hop1_b, ebn0, beta, cfg.include_term_c);
                r.ber_2b = link_analytic_ber(cfg.scenario.hop2_b, ebn0, beta, cfg.include_term_c);
                break;
            case SpecialCase::user_b_low:
                r.ber_1a = link_analytic_ber(cfg.scenario.hop1_a, ebn0, beta, cfg.include_term_c);
                r.ber_1b = awgn;
                r.ber_2b = awgn;
                break;
            case SpecialCase::all_awgn:
                r.ber_1a = r.ber_1b = r.ber_2b = awgn;
                break;
        }
        r.ber_e2e = end_to_end_ber({r.ber_1a, r.ber_1b, r.ber_2b});
        r.throughput_s2 = throughput(r.ber_e2e, 6.0 * static_cast<double>(beta));
        r.throughput_s3 = throughput(r.ber_e2e, 4.0 * static_cast<double>(beta));
        r.gamma_t = spectral_efficiency(SchemeId::time_mux2, r.ber_e2e, beta);
        r.gamma_f = spectral_efficiency(SchemeId::freq_mux3, r.ber_e2e, beta);
        rows.push_back(r);
    }
    return rows;
}

inline std::string render_analyze_csv(const ExperimentConfig& cfg, const std::vector<AnalyzeRow>& rows) {
    std::string s = detail::csv_meta(cfg, "analyze");
    s += "ebn0_db,ber_1a,ber_1b,ber_2b,ber_e2e,throughput_s2,throughput_s3,gamma_t,gamma_f\n";
    for (const auto& r : rows) {
        s += fmt_g12(r.ebn0_db) + "," + fmt_g12(r.ber_1a) + "," + fmt_g12(r.ber_1b) + "," +
             fmt_g12(r.ber_2b) + "," + fmt_g12(r.ber_e2e) + "," + fmt_g12(r.throughput_s2) + "," +
             fmt_g12(r.throughput_s3) + "," + fmt_g12(r.gamma_t) + "," + fmt_g12(r.gamma_f) + "\n";
    }
    return s;
}

// Long-format join of simulated and analytical series across schemes.
inline std::string render_compare_csv(
    const std::vector<std::pair<ExperimentConfig, MetricSeries>>& runs) {
    if (runs.empty()) throw std::invalid_argument("compare: needs at least one config");
    std::string s;
    s += "# format=dcsk-csv-1\n";
    s += std::string("# tool=dcsk ") + kToolVersion + "\n";
    s += "# command=compare\n";
    for (const auto& [cfg, series] : runs) {
        s += "# series scheme=" + to_string(series.scheme) +
             " config_hash=" + config_hash_hex(cfg) +
             " master_seed=" + std::to_string(cfg.master_seed) + "\n";
    }
    s += "scheme,ebn0_db,metric,value\n";
    for (const auto& [cfg, series] : runs) {
        const std::string scheme = to_string(series.scheme);
        for (const auto& p : series.points) {
            const std::string at = scheme + "," + fmt_g12(p.estimate.ebn0_db) + ",";
            s += at + "ber_sim," + fmt_g12(p.estimate.ber) + "\n";
            s += at + "ci95," + fmt_g12(p.estimate.ci95) + "\n";
            s += at + "bits," + std::to_string(p.estimate.bits) + "\n";
            s += at + "errors," + std::to_string(p.estimate.errors) + "\n";
            s += at + "flagged," + (p.estimate.flagged ? "1" : "0") + "\n";
            if (p.ber_analytic) s += at + "ber_analytic," + fmt_g12(*p.ber_analytic) + "\n";
            s += at + "throughput_sim," + fmt_g12(p.throughput_sim) + "\n";
            if (p.throughput_analytic)
                s += at + "throughput_analytic," + fmt_g12(*p.throughput_analytic) + "\n";
            if (p.spectral_efficiency_sim)
                s += at + "spectral_efficiency_sim," + fmt_g12(*p.spectral_efficiency_sim) + "\n";
            if (p.spectral_efficiency_analytic)
                s += at + "spectral_efficiency_analytic," + fmt_g12(*p.spectral_efficiency_analytic) + "\n";
        }
    }
    return s;
}

// --- CSV parsing (round-trip support) -------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (table.header.empty()) table.header = std::move(cells);
        else table.rows.push_back(std::move(cells));
    }
    return table;
}

// Atomic write: temp file in the destination directory, then rename.
inline void atomic_write_file(const std::string& path, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace dcsk
