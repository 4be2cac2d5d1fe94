#include "polhdr/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "polhdr/error.hpp"

namespace polhdr {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(Stage::Config, "bad numeric value for '" + key + "': " + v);
    }
}

int parse_int_value(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        int d = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(Stage::Config, "bad integer value for '" + key + "': " + v);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);  // stoull wraps negatives
        std::size_t pos = 0;
        unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw Error(Stage::Config, "bad unsigned value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw Error(Stage::Config, "bad boolean value for '" + key + "': " + v + " (want true|false)");
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

// Single field table serving serialization and strict parsing.
struct Field {
    const char* key;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&)> set;
};

const std::vector<Field>& fields() {
    auto dbl = [](double PipelineConfig::* m, const char* key) {
        return Field{key, [m](const PipelineConfig& c) { return fmt_double(c.*m); },
                     [m, key](PipelineConfig& c, const std::string& v) { c.*m = parse_double(key, v); }};
    };
    static const std::vector<Field> f = {
        dbl(&PipelineConfig::pmin, "pmin"),
        dbl(&PipelineConfig::pmax, "pmax"),
        dbl(&PipelineConfig::hist_bin_deg, "hist_bin_deg"),
        dbl(&PipelineConfig::epsilon, "epsilon"),
        dbl(&PipelineConfig::exposure_floor, "exposure_floor"),
        dbl(&PipelineConfig::tonemap_key, "tonemap_key"),
        dbl(&PipelineConfig::tonemap_white_percentile, "tonemap_white_percentile"),
        Field{"channel", [](const PipelineConfig& c) { return c.channel; },
              [](PipelineConfig& c, const std::string& v) { c.channel = v; }},
        dbl(&PipelineConfig::phi_deg, "phi_deg"),
        dbl(&PipelineConfig::rho, "rho"),
        dbl(&PipelineConfig::rho2, "rho2"),
        dbl(&PipelineConfig::dolp, "dolp"),
        dbl(&PipelineConfig::aop_deg, "aop_deg"),
        Field{"bit_depth", [](const PipelineConfig& c) { return std::to_string(c.bit_depth); },
              [](PipelineConfig& c, const std::string& v) { c.bit_depth = parse_int_value("bit_depth", v); }},
        dbl(&PipelineConfig::gain, "gain"),
        dbl(&PipelineConfig::exposure_time, "exposure_time"),
        Field{"shot_noise", [](const PipelineConfig& c) { return c.shot_noise ? "true" : "false"; },
              [](PipelineConfig& c, const std::string& v) { c.shot_noise = parse_bool("shot_noise", v); }},
        dbl(&PipelineConfig::read_noise_sigma, "read_noise_sigma"),
        Field{"quantize", [](const PipelineConfig& c) { return c.quantize ? "true" : "false"; },
              [](PipelineConfig& c, const std::string& v) { c.quantize = parse_bool("quantize", v); }},
        Field{"seed", [](const PipelineConfig& c) { return std::to_string(c.seed); },
              [](PipelineConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); }},
        dbl(&PipelineConfig::sweep_chi_deg, "sweep_chi_deg"),
        dbl(&PipelineConfig::sweep_theta_deg, "sweep_theta_deg"),
    };
    return f;
}

}  // namespace

std::string PipelineConfig::serialize() const {
    std::ostringstream out;
    for (const auto& f : fields()) out << f.key << " = " << f.get(*this) << "\n";
    return out.str();
}

PipelineConfig PipelineConfig::parse(const std::string& text) {
    PipelineConfig cfg;
    std::map<std::string, const Field*> by_key;
    for (const auto& f : fields()) by_key[f.key] = &f;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw Error(Stage::Config, "line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        auto it = by_key.find(key);
        if (it == by_key.end())
            throw Error(Stage::Config, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        it->second->set(cfg, value);
    }
    return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Stage::Config, path + ": cannot open");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

void PipelineConfig::save(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw Error(Stage::Config, path + ": cannot open for writing");
    f << serialize();
}

std::string PipelineConfig::hash() const {
    const std::string s = serialize();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

}  // namespace polhdr
