#pragma once

#include "airyids.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace airyids::cli {

inline constexpr const char* tool_version = "1.0.0";

enum class Command { bands, spectrum, ids, verify, oracle };
enum class Format { csv, json };

struct RunConfig {
    Command command = Command::bands;
    std::string c = "10";
    int n = 2;
    Parity parity = Parity::odd_wells;
    std::optional<int> p_max;
    int grid = 500;
    Format format = Format::csv;
    std::string out;
    std::string suite = "lemma-h";
    std::string method = "shooting";
    std::map<std::string, std::string> tol;
};

// Overridable knobs and their defaults.
inline const std::map<std::string, std::string>& tolerance_defaults() {
    static const std::map<std::string, std::string> d{
        {"gap_samples", "500"}, {"lemma_samples", "1000"}, {"fd_step", "1e-3"}, {"j_max", "20"}, {"shooting_points", "0"}};
    return d;
}

inline const char* to_string(Command c) {
    switch (c) {
    case Command::bands: return "bands";
    case Command::spectrum: return "spectrum";
    case Command::ids: return "ids";
    case Command::verify: return "verify";
    case Command::oracle: return "oracle";
    }
    return "?";
}

inline Parity parse_parity(const std::string& s) {
    if (s == "odd") return Parity::odd_wells;
    if (s == "even") return Parity::even_wells;
    throw ConfigError("parity must be 'odd' or 'even', got '" + s + "'");
}

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError("format must be 'csv' or 'json', got '" + s + "'");
}

inline real_t parse_real(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        (void)std::stold(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return real_t(s);
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + " is not a number: '" + s + "'");
    }
}

inline int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string(what) + " is not an integer: '" + s + "'");
    }
}

inline void set_tol(RunConfig& cfg, const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects KEY=VAL, got '" + kv + "'");
    std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    if (!tolerance_defaults().count(key)) throw ConfigError("unknown tolerance key '" + key + "'");
    (void)parse_real(val, key.c_str());
    cfg.tol[key] = val;
}

inline std::string tol_value(const RunConfig& cfg, const std::string& key) {
    auto it = cfg.tol.find(key);
    return it != cfg.tol.end() ? it->second : tolerance_defaults().at(key);
}

// key=value lines; '#' starts a comment. Keys: c, n, parity, p_max, grid, format, out, suite, method, tol.KEY.
inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key == "c") cfg.c = val;
        else if (key == "n") cfg.n = parse_int(val, "n");
        else if (key == "parity") cfg.parity = parse_parity(val);
        else if (key == "p_max") cfg.p_max = parse_int(val, "p_max");
        else if (key == "grid") cfg.grid = parse_int(val, "grid");
        else if (key == "format") cfg.format = parse_format(val);
        else if (key == "out") cfg.out = val;
        else if (key == "suite") cfg.suite = val;
        else if (key == "method") cfg.method = val;
        else if (key.rfind("tol.", 0) == 0) set_tol(cfg, key.substr(4) + "=" + val);
        else throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
}

inline void validate(const RunConfig& cfg) {
    real_t c = parse_real(cfg.c, "c");
    if (!(c > 0)) throw ConfigError("c must be > 0");
    if (cfg.n < 0) throw ConfigError("n must be >= 0");
    if (cfg.grid < 2) throw ConfigError("grid must be >= 2");
    if (cfg.p_max && *cfg.p_max < 0) throw ConfigError("p_max must be >= 0");
    if (cfg.parity == Parity::even_wells && cfg.n < 1) throw ConfigError("even wells need n >= 1");
}

// Canonical echo of the configuration; the hash below is taken over this text.
inline std::string canonical(const RunConfig& cfg) {
    std::ostringstream os;
    os << "command=" << to_string(cfg.command) << ";c=" << cfg.c << ";n=" << cfg.n << ";parity=" << airyids::to_string(cfg.parity)
       << ";p_max=" << (cfg.p_max ? std::to_string(*cfg.p_max) : "auto") << ";grid=" << cfg.grid
       << ";format=" << (cfg.format == Format::csv ? "csv" : "json") << ";suite=" << cfg.suite << ";method=" << cfg.method;
    for (const auto& [k, v] : tolerance_defaults()) os << ";tol." << k << "=" << tol_value(cfg, k);
    return os.str();
}

inline std::string config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

// A table of already-formatted cells; reals are written with full working precision.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

inline std::string cell(const real_t& x) { return airyids::to_string(x); }
inline std::string cell(int x) { return std::to_string(x); }
inline std::string cell(bool x) { return x ? "true" : "false"; }

inline std::string render(const Table& t, const RunConfig& cfg) {
    std::ostringstream os;
    if (cfg.format == Format::csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
        return os.str();
    }
    nlohmann::ordered_json j;
    const std::string echo = canonical(cfg);
    j["meta"] = {{"tool", "airy_ids"}, {"version", tool_version}, {"config", echo}, {"config_hash", config_hash(echo)}};
    for (auto it = t.extra.begin(); it != t.extra.end(); ++it) j[it.key()] = it.value();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json o;
        for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = r[i];
        rows.push_back(o);
    }
    j["rows"] = rows;
    os << j.dump(2) << "\n";
    return os.str();
}

inline void write_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << text;
        if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw ConfigError("cannot rename '" + tmp.string() + "' to '" + path + "': " + ec.message());
}

inline Params<real_t> params_of(const RunConfig& cfg) {
    Params<real_t> p;
    p.c = parse_real(cfg.c, "c");
    p.validate();
    return p;
}

inline int p_max_of(const RunConfig& cfg, const Params<real_t>& params) {
    if (cfg.p_max) return *cfg.p_max;
    int p = max_band_index(params);
    if (p < 0) throw PreconditionError("c = " + cfg.c + " is below c_0 = " + airyids::to_string(c_constant<real_t>(0)));
    return p;
}

inline Table cmd_bands(const RunConfig& cfg) {
    auto params = params_of(cfg);
    auto bands = band_edges(params, p_max_of(cfg, params));
    Table t{{"p", "y_max", "y_min", "e_min", "e_max", "center_offset"}, {}, {}};
    for (const auto& b : bands) {
        t.rows.push_back({cell(b.p), cell(b.y_max), cell(b.y_min), cell(b.e_min), cell(b.e_max), cell(b.center_offset)});
    }
    return t;
}

inline Table cmd_spectrum(const RunConfig& cfg) {
    auto params = params_of(cfg);
    int gap_samples = parse_int(tol_value(cfg, "gap_samples"), "gap_samples");
    auto rep = full_spectrum(params, cfg.n, cfg.parity, p_max_of(cfg, params), gap_samples);
    Table t{{"p", "k", "y", "e"}, {}, {}};
    for (const auto& b : rep.per_band) {
        for (std::size_t k = 0; k < b.y.size(); ++k) {
            t.rows.push_back({cell(b.p), cell(static_cast<int>(k)), cell(b.y[k]), cell(b.energy[k])});
        }
    }
    nlohmann::ordered_json counts = nlohmann::ordered_json::array(), gaps = nlohmann::ordered_json::array();
    for (const auto& b : rep.per_band) counts.push_back({{"p", b.p}, {"count", b.count}});
    for (const auto& g : rep.gaps) {
        gaps.push_back({{"p_below", g.p_below}, {"empty", g.empty}, {"samples", g.samples}, {"nonpositive", g.nonpositive}});
    }
    t.extra["counts"] = counts;
    t.extra["gaps"] = gaps;
    return t;
}

inline Table cmd_ids(const RunConfig& cfg) {
    auto params = params_of(cfg);
    auto curve = ids_curve(params, cfg.grid, std::optional<int>(cfg.n));
    Table t{{"e", "p", "phi", "ids_formula", "ids_empirical"}, {}, {}};
    for (const auto& s : curve) {
        t.rows.push_back({cell(s.e), cell(s.p_of_e), cell(s.phi), cell(s.ids), cell(*s.ids_empirical)});
    }
    return t;
}

inline Table cmd_verify(const RunConfig& cfg) {
    Table t;
    if (cfg.suite == "lemma-h") {
        auto params = params_of(cfg);
        int samples = parse_int(tol_value(cfg, "lemma_samples"), "lemma_samples");
        auto rep = lemma_h_report(p_max_of(cfg, params), params, samples);
        t.columns = {"p", "expected_sign", "samples", "violations", "min_abs_h", "worst_y"};
        real_t min_abs = std::numeric_limits<real_t>::infinity(), worst = 0;
        for (const auto& b : rep.bands) {
            t.rows.push_back({cell(b.p), cell(b.expected_sign), cell(b.samples), cell(b.violations), cell(b.min_abs_h),
                              cell(b.worst_y)});
            if (b.min_abs_h < min_abs) {
                min_abs = b.min_abs_h;
                worst = b.worst_y;
            }
        }
        t.extra = {{"suite", cfg.suite}, {"pass", rep.pass()}, {"min_abs_h", cell(min_abs)}, {"worst_y", cell(worst)}};
    } else if (cfg.suite == "appendix") {
        int j_max = parse_int(tol_value(cfg, "j_max"), "j_max");
        auto rows = appendix_inequalities<real_t>(j_max);
        auto base = appendix_base_case<real_t>();
        t.columns = {"label", "j", "lhs", "rhs", "holds", "diagnostic"};
        bool pass = true;
        for (const auto& r : rows) {
            t.rows.push_back({r.label, cell(r.j), cell(r.lhs), cell(r.rhs), cell(r.holds), cell(r.diagnostic)});
            if (!r.diagnostic && !r.holds) pass = false;
        }
        t.extra = {{"suite", cfg.suite},
                   {"pass", pass},
                   {"a_tilde_1", cell(base.a_tilde_1)},
                   {"c0", cell(base.c0)},
                   {"h_at_minus_a_tilde_1", cell(base.h)}};
    } else if (cfg.suite == "band-width") {
        int j_max = cfg.p_max ? std::max(1, *cfg.p_max / 2) : 5;
        t.columns = {"j", "c", "lambda", "k2j_bound", "width", "included"};
        bool pass = true;
        for (int j = 1; j <= j_max; ++j) {
            Params<real_t> p;
            p.c = c_constant<real_t>(2 * j);
            auto b = band_width_bound(j, p);
            t.rows.push_back({cell(j), cell(b.c), cell(b.lambda), cell(b.k2j_bound), cell(b.band->width()), cell(b.included)});
            pass = pass && b.included;
        }
        t.extra = {{"suite", cfg.suite}, {"pass", pass}};
    } else {
        throw ConfigError("unknown suite '" + cfg.suite + "' (expected lemma-h, appendix or band-width)");
    }
    return t;
}

inline Table cmd_oracle(const RunConfig& cfg) {
    auto params = params_of(cfg);
    const int p_max = p_max_of(cfg, params);
    Table t{{"p", "value", "residual"}, {}, {}};
    if (cfg.method == "shooting") {
        auto bands = band_edges(params, p_max);
        int pts = parse_int(tol_value(cfg, "shooting_points"), "shooting_points");
        for (const auto& b : bands) {
            if (b.truncated) continue;
            auto r = shooting_oracle_wells(params, well_count(cfg.n, cfg.parity), b, pts);
            for (std::size_t i = 0; i < r.values.size(); ++i) t.rows.push_back({cell(b.p), cell(r.values[i]), cell(r.residuals[i])});
        }
    } else if (cfg.method == "monodromy") {
        auto r = monodromy_oracle(params, p_max);
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            t.rows.push_back({cell(p_max - static_cast<int>(i / 2)), cell(r.values[i]), cell(r.residuals[i])});
        }
    } else if (cfg.method == "fd") {
        double step = to_double(parse_real(tol_value(cfg, "fd_step"), "fd_step"));
        auto r = fd_oracle(params, cfg.n, step, cfg.parity);
        t.columns = {"index", "e", "residual"};
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            t.rows.push_back({cell(static_cast<int>(i)), cell(r.values[i]), cell(r.residuals[i])});
        }
    } else {
        throw ConfigError("unknown oracle method '" + cfg.method + "' (expected shooting, monodromy or fd)");
    }
    t.extra = {{"method", cfg.method}};
    return t;
}

inline std::string execute(const RunConfig& cfg) {
    validate(cfg);
    Table t;
    switch (cfg.command) {
    case Command::bands: t = cmd_bands(cfg); break;
    case Command::spectrum: t = cmd_spectrum(cfg); break;
    case Command::ids: t = cmd_ids(cfg); break;
    case Command::verify: t = cmd_verify(cfg); break;
    case Command::oracle: t = cmd_oracle(cfg); break;
    }
    return render(t, cfg);
}

inline void print_error(std::ostream& err, const char* kind, const std::string& message, int code,
                        const std::string& trace = {}) {
    nlohmann::ordered_json j{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!trace.empty()) j["trace"] = trace;
    err << j.dump() << "\n";
}

// Parses argv into a RunConfig; config-file values are applied first so that flags win.
inline RunConfig parse_args(int argc, char** argv) {
    CLI::App app{"Spectra, bands and integrated density of states for Airy multi-well chains"};
    app.require_subcommand(1);
    std::string config_path, c, parity, format;
    std::optional<int> n, p_max, grid;
    std::optional<std::string> out, suite, method;
    std::vector<std::string> tols;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--c", c, "dimensionless coupling c");
    app.add_option("--n", n, "half-count N of the finite chain");
    app.add_option("--parity", parity, "odd or even number of wells");
    app.add_option("--p-max", p_max, "highest band index");
    app.add_option("--grid", grid, "energy grid size");
    app.add_option("--format", format, "csv or json");
    app.add_option("--out", out, "output file (stdout if absent)");
    app.add_option("--tol", tols, "tolerance override KEY=VAL");
    app.add_option("--suite", suite, "verify suite: lemma-h, appendix, band-width");
    app.add_option("--method", method, "oracle: shooting, monodromy, fd");
    app.fallthrough();
    std::map<std::string, Command> commands{{"bands", Command::bands}, {"spectrum", Command::spectrum},
                                            {"ids", Command::ids}, {"verify", Command::verify}, {"oracle", Command::oracle}};
    for (const auto& [name, cmd] : commands) app.add_subcommand(name, std::string(name) + " command");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::cout << app.help();
            throw;
        }
        throw ConfigError(e.what());
    }
    RunConfig cfg;
    for (const auto& [name, cmd] : commands) {
        if (app.got_subcommand(name)) cfg.command = cmd;
    }
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (!c.empty()) cfg.c = c;
    if (n) cfg.n = *n;
    if (!parity.empty()) cfg.parity = parse_parity(parity);
    if (p_max) cfg.p_max = *p_max;
    if (grid) cfg.grid = *grid;
    if (!format.empty()) cfg.format = parse_format(format);
    if (out) cfg.out = *out;
    if (suite) cfg.suite = *suite;
    if (method) cfg.method = *method;
    for (const auto& kv : tols) set_tol(cfg, kv);
    return cfg;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        RunConfig cfg = parse_args(argc, argv);
        std::string text = execute(cfg);
        if (cfg.out.empty()) out << text;
        else write_atomic(cfg.out, text);
        return 0;
    } catch (const CLI::ParseError&) {
        return 0; // help was printed
    } catch (const IntegrityError& e) {
        print_error(err, e.kind(), e.what(), e.exit_code(), e.trace());
        return e.exit_code();
    } catch (const Error& e) {
        print_error(err, e.kind(), e.what(), e.exit_code());
        return e.exit_code();
    } catch (const std::exception& e) {
        print_error(err, "numeric", e.what(), 5);
        return 5;
    }
}

} // namespace airyids::cli
